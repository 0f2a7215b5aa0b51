#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "pbb/bigcount.hpp"

namespace pbb {

// Position vector in the factorial number system, most significant digit
// first: digits[l] has radix n-l (value range [0, n-1-l]) and weight
// (n-1-l)!, so digits[0] selects among n subtrees at level 0 of the
// permutation tree and the last digit is always 0.
struct Factoradic {
  std::vector<int> digits;

  Factoradic() = default;
  explicit Factoradic(std::vector<int> d) : digits(std::move(d)) {}

  int size() const { return static_cast<int>(digits.size()); }
  static Factoradic zero(int n) { return Factoradic(std::vector<int>(n, 0)); }

  friend bool operator==(const Factoradic& a, const Factoradic& b) = default;
};

// Throws std::invalid_argument if any digit is outside its radix.
void validate_factoradic(const Factoradic& v);

BigCount to_decimal(const Factoradic& v);
// Fast path for census bookkeeping; requires n <= 20.
std::uint64_t to_decimal_u64(const Factoradic& v);

// Inverse of to_decimal; throws if x >= n!.
Factoradic from_decimal(const BigCount& x, int n);
Factoradic from_decimal_u64(std::uint64_t x, int n);

// Lexicographic comparison; identical to comparing decimal values.
int compare(const Factoradic& a, const Factoradic& b);

// floor((a + b) / 2) computed directly on the digit vectors (mixed-radix
// addition, then division by 2 with remainder propagation). b == nullopt
// stands for the non-representable endpoint n!. Requires a < b.
Factoradic midpoint(const Factoradic& a, const std::optional<Factoradic>& b);

}  // namespace pbb
