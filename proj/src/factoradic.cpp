#include "pbb/factoradic.hpp"

#include <stdexcept>
#include <string>

namespace pbb {

void validate_factoradic(const Factoradic& v) {
  const int n = v.size();
  for (int l = 0; l < n; ++l) {
    if (v.digits[l] < 0 || v.digits[l] > n - 1 - l) {
      throw std::invalid_argument("factoradic digit " + std::to_string(v.digits[l]) +
                                  " out of radix at level " + std::to_string(l));
    }
  }
}

BigCount to_decimal(const Factoradic& v) {
  validate_factoradic(v);
  const int n = v.size();
  BigCount acc;
  for (int l = 0; l < n; ++l) {
    acc *= static_cast<std::uint64_t>(n - l);
    acc += BigCount(static_cast<std::uint64_t>(v.digits[l]));
  }
  return acc;
}

std::uint64_t to_decimal_u64(const Factoradic& v) {
  const int n = v.size();
  if (n > 20) throw std::overflow_error("to_decimal_u64 requires n <= 20");
  std::uint64_t acc = 0;
  for (int l = 0; l < n; ++l) acc = acc * static_cast<std::uint64_t>(n - l) + static_cast<std::uint64_t>(v.digits[l]);
  return acc;
}

Factoradic from_decimal(const BigCount& x, int n) {
  Factoradic out = Factoradic::zero(n);
  BigCount rest = x;
  for (int l = n - 1; l >= 0; --l) {
    out.digits[l] = static_cast<int>(rest.divmod_small(static_cast<std::uint32_t>(n - l)));
  }
  if (!rest.is_zero()) throw std::domain_error("from_decimal: value >= n!");
  return out;
}

Factoradic from_decimal_u64(std::uint64_t x, int n) {
  return from_decimal(BigCount(x), n);
}

int compare(const Factoradic& a, const Factoradic& b) {
  if (a.size() != b.size()) throw std::invalid_argument("factoradic length mismatch");
  for (int l = 0; l < a.size(); ++l) {
    if (a.digits[l] != b.digits[l]) return a.digits[l] < b.digits[l] ? -1 : 1;
  }
  return 0;
}

Factoradic midpoint(const Factoradic& a, const std::optional<Factoradic>& b) {
  validate_factoradic(a);
  const int n = a.size();

  // Mixed-radix sum a + b, kept as raw digit sums plus the carry out of
  // level 0. b == nullopt means b = n!, which is a carry of 1 and zeros.
  std::vector<int> sum(n, 0);
  int carry = 0;
  if (b) {
    validate_factoradic(*b);
    if (b->size() != n) throw std::invalid_argument("factoradic length mismatch");
    if (compare(a, *b) >= 0) throw std::invalid_argument("midpoint requires a < b");
    for (int l = n - 1; l >= 0; --l) {
      const int radix = n - l;
      const int s = a.digits[l] + b->digits[l] + carry;
      sum[l] = s % radix;
      carry = s / radix;
    }
  } else {
    sum = a.digits;
    carry = 1;
  }

  // Divide by 2 most-significant-first; each partial value rem*radix+digit
  // is < 2*radix, so the quotient digit stays within its radix.
  Factoradic out = Factoradic::zero(n);
  int rem = carry;
  for (int l = 0; l < n; ++l) {
    const int radix = n - l;
    const int cur = rem * radix + sum[l];
    out.digits[l] = cur / 2;
    rem = cur % 2;
  }
  return out;
}

}  // namespace pbb
