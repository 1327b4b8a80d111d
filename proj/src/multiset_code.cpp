#include "wlgt/multiset_code.hpp"

#include <functional>
#include <set>

#include "wlgt/error.hpp"

namespace wlgt {

namespace {

void trim(DigitVector& d) {
  while (!d.digits.empty() && d.digits.back() == 0) d.digits.pop_back();
}

void check_base(int m) {
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "base must be at least 2");
}

}  // namespace

std::string DigitVector::to_string() const {
  std::string s = "0.";
  if (digits.empty()) s += "0";
  for (auto d : digits) s += (d < 10 ? std::to_string(d) : "[" + std::to_string(d) + "]");
  return s + "_" + std::to_string(base);
}

DigitVector zero_code(int m) {
  check_base(m);
  return DigitVector{m, {}};
}

DigitVector code_of(int i, int m) {
  check_base(m);
  if (i < 1) throw Error(ErrorCode::kInvalidArgument, "positions start at 1");
  DigitVector d{m, std::vector<std::int32_t>(i, 0)};
  d.digits[i - 1] = 1;
  return d;
}

DigitVector add(const DigitVector& a, const DigitVector& b) {
  if (a.base != b.base) throw Error(ErrorCode::kBaseMismatch, "cannot add codes of different bases");
  DigitVector out{a.base, a.digits};
  if (out.digits.size() < b.digits.size()) out.digits.resize(b.digits.size(), 0);
  for (std::size_t i = 0; i < b.digits.size(); ++i) {
    out.digits[i] += b.digits[i];
    if (out.digits[i] >= a.base)
      throw Error(ErrorCode::kDigitOverflow, "digit " + std::to_string(i + 1) + " reached the base " +
                                                  std::to_string(a.base));
  }
  trim(out);
  return out;
}

DigitVector shift(const DigitVector& a, int offset) {
  if (offset < 0) throw Error(ErrorCode::kInvalidArgument, "shift offset must be non-negative");
  if (a.is_zero()) return a;
  DigitVector out{a.base, std::vector<std::int32_t>(offset, 0)};
  out.digits.insert(out.digits.end(), a.digits.begin(), a.digits.end());
  return out;
}

DigitVector encode_multiset(std::span<const int> positions, int m) {
  DigitVector acc = zero_code(m);
  for (int p : positions) acc = add(acc, code_of(p, m));
  return acc;
}

namespace {

void enumerate(int max_position, int remaining, int lo, std::vector<int>& current,
               const std::function<void(const std::vector<int>&)>& visit) {
  visit(current);
  if (remaining == 0) return;
  for (int p = lo; p <= max_position; ++p) {
    current.push_back(p);
    enumerate(max_position, remaining - 1, p, current, visit);
    current.pop_back();
  }
}

}  // namespace

InjectivityReport check_injectivity(int m, int max_position) {
  check_base(m);
  InjectivityReport r;
  std::set<std::vector<std::int32_t>> seen;
  std::vector<int> current;
  enumerate(max_position, m - 1, 1, current, [&](const std::vector<int>& ms) {
    ++r.multisets;
    seen.insert(encode_multiset(ms, m).digits);
  });
  r.distinct_codes = seen.size();
  return r;
}

}  // namespace wlgt
