#include "wlgt/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <utility>

namespace wlgt {

double keyed_gaussian(std::uint64_t key) {
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - unit_uniform(hash_combine(key, 1));
  const double u2 = unit_uniform(hash_combine(key, 2));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return lo + static_cast<std::int64_t>(engine_());
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

std::vector<int> Rng::permutation(int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(uniform_int(0, i));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace wlgt
