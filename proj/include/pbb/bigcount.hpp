#pragma once

#include <gmp.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pbb {

// Non-negative arbitrary-precision integer, large enough for n! at any
// instance size we care about. Thin value wrapper around GMP's mpz_t.
class BigCount {
 public:
  BigCount() { mpz_init(z_); }
  BigCount(std::uint64_t v) { mpz_init(z_); set_u64(v); }  // NOLINT: implicit by design
  explicit BigCount(const std::string& decimal);

  BigCount(const BigCount& o) { mpz_init_set(z_, o.z_); }
  BigCount(BigCount&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  BigCount& operator=(const BigCount& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  BigCount& operator=(BigCount&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~BigCount() { mpz_clear(z_); }

  static BigCount factorial(int n);

  BigCount& operator+=(const BigCount& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  // Throws if the result would be negative.
  BigCount& operator-=(const BigCount& o);
  BigCount& operator*=(std::uint64_t k);
  // Floor division.
  BigCount& operator/=(std::uint64_t k);

  friend BigCount operator+(BigCount a, const BigCount& b) { return a += b; }
  friend BigCount operator-(BigCount a, const BigCount& b) { return a -= b; }
  friend BigCount operator*(BigCount a, std::uint64_t k) { return a *= k; }
  friend BigCount operator/(BigCount a, std::uint64_t k) { return a /= k; }

  // Floor division and remainder by a small positive divisor.
  std::uint32_t divmod_small(std::uint32_t divisor);

  BigCount half() const {
    BigCount r;
    mpz_fdiv_q_2exp(r.z_, z_, 1);
    return r;
  }

  int compare(const BigCount& o) const { return mpz_cmp(z_, o.z_); }
  friend bool operator==(const BigCount& a, const BigCount& b) { return a.compare(b) == 0; }
  friend bool operator!=(const BigCount& a, const BigCount& b) { return a.compare(b) != 0; }
  friend bool operator<(const BigCount& a, const BigCount& b) { return a.compare(b) < 0; }
  friend bool operator<=(const BigCount& a, const BigCount& b) { return a.compare(b) <= 0; }
  friend bool operator>(const BigCount& a, const BigCount& b) { return a.compare(b) > 0; }
  friend bool operator>=(const BigCount& a, const BigCount& b) { return a.compare(b) >= 0; }

  bool is_zero() const { return mpz_sgn(z_) == 0; }
  bool fits_u64() const { return mpz_sizeinbase(z_, 2) <= 64; }
  std::uint64_t to_u64() const;  // throws if value does not fit

  // Number of bits in the binary representation; 0 for the value 0.
  std::size_t bit_length() const { return is_zero() ? 0 : mpz_sizeinbase(z_, 2); }

  std::string str() const;

  // Big-endian magnitude bytes, minimal length (empty for 0).
  std::vector<std::uint8_t> to_bytes() const;
  static BigCount from_bytes(std::span<const std::uint8_t> bytes);

 private:
  void set_u64(std::uint64_t v);
  mpz_t z_;
};

}  // namespace pbb
