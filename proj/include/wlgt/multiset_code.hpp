#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wlgt {

/// Exact base-m fixed-point number 0.d_1 d_2 ... in base m. digits[i] is the
/// coefficient of m^{-(i+1)}. Trailing zeros are trimmed, so equality is
/// structural.
struct DigitVector {
  int base = 2;
  std::vector<std::int32_t> digits;

  bool is_zero() const { return digits.empty(); }
  bool operator==(const DigitVector&) const = default;

  /// E.g. "0.201_4".
  std::string to_string() const;
};

DigitVector zero_code(int m);

/// m^{-i}: a single 1 at position i (1-based).
DigitVector code_of(int i, int m);

/// Digit-wise sum. DIGIT_OVERFLOW if a digit reaches the base, BASE_MISMATCH
/// on differing bases.
DigitVector add(const DigitVector& a, const DigitVector& b);

/// Multiply by m^{-offset}.
DigitVector shift(const DigitVector& a, int offset);

/// Sum of code_of(p) over the multiset of 1-based positions.
DigitVector encode_multiset(std::span<const int> positions, int m);

struct InjectivityReport {
  std::size_t multisets = 0;
  std::size_t distinct_codes = 0;
  bool injective() const { return multisets == distinct_codes; }
};

/// Encodes every multiset of order <= m - 1 over positions 1..max_position.
InjectivityReport check_injectivity(int m, int max_position);

}  // namespace wlgt
