#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pbb/factoradic.hpp"

using namespace pbb;

namespace {

Factoradic fac(std::vector<int> d) { return Factoradic(std::move(d)); }

}  // namespace

TEST_CASE("bigcount basics") {
  CHECK(BigCount(0).is_zero());
  CHECK(BigCount::factorial(0) == BigCount(1));
  CHECK(BigCount::factorial(12) == BigCount(479001600));
  CHECK(BigCount::factorial(25).str() == "15511210043330985984000000");
  CHECK((BigCount(7) + BigCount(5)) == BigCount(12));
  CHECK((BigCount(7) - BigCount(5)) == BigCount(2));
  CHECK_THROWS(BigCount(5) - BigCount(7));
  CHECK((BigCount(25) / 2) == BigCount(12));
  CHECK(BigCount(25).half() == BigCount(12));
  CHECK(BigCount("123456789123456789123456789").str() == "123456789123456789123456789");
  CHECK_THROWS(BigCount("-3"));
  CHECK_THROWS(BigCount("12x"));
  CHECK(BigCount(300).bit_length() == 9);
}

TEST_CASE("bigcount byte serialization is big-endian and minimal") {
  CHECK(BigCount(0).to_bytes().empty());
  const std::vector<std::uint8_t> bytes = BigCount(0x12345).to_bytes();
  CHECK(bytes == std::vector<std::uint8_t>{0x01, 0x23, 0x45});
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    BigCount v = BigCount(rng()) * rng();
    CHECK(BigCount::from_bytes(v.to_bytes()) == v);
  }
}

TEST_CASE("to_decimal positional expansion") {
  CHECK(to_decimal(fac({0, 0, 0, 0})) == BigCount(0));
  CHECK(to_decimal(fac({2, 1, 1, 0})) == BigCount(15));
  CHECK(to_decimal(fac({3, 2, 1, 0})) == BigCount(23));
  CHECK(to_decimal_u64(fac({2, 1, 1, 0})) == 15);
  CHECK_THROWS(to_decimal(fac({4, 0, 0, 0})));  // digit out of radix
  CHECK_THROWS(to_decimal(fac({0, 0, 0, 1})));  // last digit must be 0
}

TEST_CASE("from_decimal inverts to_decimal") {
  CHECK(from_decimal(BigCount(0), 4) == fac({0, 0, 0, 0}));
  CHECK(from_decimal(BigCount(15), 4) == fac({2, 1, 1, 0}));
  CHECK_THROWS(from_decimal(BigCount(24), 4));

  // exhaustive bijection over [0, 8!)
  const int n = 8;
  for (std::uint64_t x = 0; x < 40320; ++x) {
    CHECK(to_decimal_u64(from_decimal_u64(x, n)) == x);
  }
}

TEST_CASE("lexicographic compare matches decimal order") {
  CHECK(compare(fac({0, 0, 0, 0}), fac({0, 0, 0, 0})) == 0);
  CHECK(compare(fac({1, 1, 1, 0}), fac({2, 1, 1, 0})) < 0);
  CHECK_THROWS(compare(fac({0, 0}), fac({0, 0, 0})));

  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const int n = 2 + static_cast<int>(rng() % 9);
    const std::uint64_t fact = to_decimal_u64(
        [&] {
          Factoradic top = Factoradic::zero(n);
          for (int l = 0; l < n; ++l) top.digits[l] = n - 1 - l;
          return top;
        }());
    const std::uint64_t xa = rng() % (fact + 1);
    const std::uint64_t xb = rng() % (fact + 1);
    const int cmp = compare(from_decimal_u64(xa, n), from_decimal_u64(xb, n));
    CHECK(cmp == (xa < xb ? -1 : xa > xb ? 1 : 0));
  }
}

TEST_CASE("midpoint of [0,24) is 12") {
  const Factoradic mid = midpoint(Factoradic::zero(4), std::nullopt);
  CHECK(mid == fac({2, 0, 0, 0}));
  CHECK(to_decimal_u64(mid) == 12);
}

TEST_CASE("midpoint of [0,2) is 1") {
  const Factoradic mid = midpoint(Factoradic::zero(2), std::nullopt);
  CHECK(to_decimal_u64(mid) == 1);
}

TEST_CASE("midpoint requires a < b") {
  CHECK_THROWS(midpoint(fac({1, 0}), fac({1, 0})));
  CHECK_THROWS(midpoint(fac({1, 0}), fac({0, 0})));
}

TEST_CASE("midpoint equals the decimal oracle") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 3000; ++i) {
    const int n = 2 + static_cast<int>(rng() % 8);
    std::uint64_t fact = 1;
    for (int k = 2; k <= n; ++k) fact *= static_cast<std::uint64_t>(k);
    std::uint64_t a = rng() % fact;
    std::uint64_t b = rng() % (fact + 1);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const Factoradic fa = from_decimal_u64(a, n);
    std::optional<Factoradic> fb;
    if (b < fact) fb = from_decimal_u64(b, n);
    const Factoradic mid = midpoint(fa, fb);
    CHECK(to_decimal_u64(mid) == (a + b) / 2);
  }
}

TEST_CASE("midpoint halves differ by at most one") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t fact = 5040;
    std::uint64_t a = rng() % fact;
    std::uint64_t b = rng() % fact;
    if (a + 2 > b) continue;
    const std::uint64_t mid = to_decimal_u64(midpoint(from_decimal_u64(a, 7), from_decimal_u64(b, 7)));
    const std::uint64_t left = mid - a, right = b - mid;
    CHECK(left + right == b - a);
    CHECK((left > right ? left - right : right - left) <= 1);
    CHECK(left >= 1);  // both halves non-empty when b - a >= 2
    CHECK(right >= 1);
  }
}
