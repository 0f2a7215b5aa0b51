#include "pbb/bigcount.hpp"

#include <limits>
#include <stdexcept>

namespace pbb {

BigCount::BigCount(const std::string& decimal) {
  mpz_init(z_);
  if (decimal.empty() || mpz_set_str(z_, decimal.c_str(), 10) != 0 || mpz_sgn(z_) < 0) {
    mpz_clear(z_);
    throw std::invalid_argument("BigCount: not a non-negative decimal integer: '" + decimal + "'");
  }
}

void BigCount::set_u64(std::uint64_t v) {
  mpz_import(z_, 1, 1, sizeof(v), 0, 0, &v);
}

BigCount BigCount::factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of negative size");
  BigCount r;
  mpz_fac_ui(r.z_, static_cast<unsigned long>(n));
  return r;
}

BigCount& BigCount::operator-=(const BigCount& o) {
  if (mpz_cmp(z_, o.z_) < 0) throw std::domain_error("BigCount subtraction would be negative");
  mpz_sub(z_, z_, o.z_);
  return *this;
}

BigCount& BigCount::operator*=(std::uint64_t k) {
  BigCount f(k);
  mpz_mul(z_, z_, f.z_);
  return *this;
}

BigCount& BigCount::operator/=(std::uint64_t k) {
  if (k == 0) throw std::domain_error("BigCount division by zero");
  BigCount d(k);
  mpz_fdiv_q(z_, z_, d.z_);
  return *this;
}

std::uint32_t BigCount::divmod_small(std::uint32_t divisor) {
  if (divisor == 0) throw std::domain_error("BigCount division by zero");
  return static_cast<std::uint32_t>(mpz_fdiv_q_ui(z_, z_, divisor));
}

std::uint64_t BigCount::to_u64() const {
  if (!fits_u64()) throw std::overflow_error("BigCount does not fit in 64 bits");
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, z_);
  return v;
}

std::string BigCount::str() const {
  char* s = mpz_get_str(nullptr, 10, z_);
  std::string out(s);
  void (*freefn)(void*, size_t) = nullptr;
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(s, out.size() + 1);
  return out;
}

std::vector<std::uint8_t> BigCount::to_bytes() const {
  if (is_zero()) return {};
  std::size_t count = 0;
  std::vector<std::uint8_t> out((mpz_sizeinbase(z_, 2) + 7) / 8);
  mpz_export(out.data(), &count, 1, 1, 1, 0, z_);
  out.resize(count);
  return out;
}

BigCount BigCount::from_bytes(std::span<const std::uint8_t> bytes) {
  BigCount r;
  if (!bytes.empty()) mpz_import(r.z_, bytes.size(), 1, 1, 1, 0, bytes.data());
  return r;
}

}  // namespace pbb
