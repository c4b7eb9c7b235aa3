#include "truncmul/bigint.hpp"

#include <cstdlib>
#include <cstring>

namespace truncmul {

BigInt BigInt::from_int64(std::int64_t v) {
  BigInt r;
  if (v >= 0) {
    mpz_import(r.z_, 1, -1, sizeof(v), 0, 0, &v);
  } else {
    // Avoid UB on INT64_MIN: import the magnitude as unsigned.
    std::uint64_t mag = ~static_cast<std::uint64_t>(v) + 1;
    mpz_import(r.z_, 1, -1, sizeof(mag), 0, 0, &mag);
    mpz_neg(r.z_, r.z_);
  }
  return r;
}

BigInt BigInt::pow2(std::uint64_t k) {
  BigInt r;
  mpz_setbit(r.z_, k);
  return r;
}

bool BigInt::from_hex(const std::string& s, BigInt* out) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!ok) return false;
  }
  return mpz_set_str(out->z_, s.c_str(), 16) == 0;
}

std::string BigInt::to_hex() const {
  char* buf = mpz_get_str(nullptr, 16, z_);
  std::string s(buf);
  std::free(buf);
  return s;
}

std::string BigInt::to_dec() const {
  char* buf = mpz_get_str(nullptr, 10, z_);
  std::string s(buf);
  std::free(buf);
  return s;
}

bool BigInt::fits_int64() const {
  if (bit_length() < 63) return true;
  // 64-bit edge cases, including INT64_MIN.
  static const BigInt kMin = from_int64(INT64_MIN);
  static const BigInt kMax = from_int64(INT64_MAX);
  return *this >= kMin && *this <= kMax;
}

std::int64_t BigInt::to_int64() const {
  std::uint64_t mag = 0;
  size_t count = 0;
  mpz_export(&mag, &count, -1, sizeof(mag), 0, 0, z_);
  return sign() < 0 ? -static_cast<std::int64_t>(mag)
                    : static_cast<std::int64_t>(mag);
}

BigInt BigInt::operator+(const BigInt& o) const {
  BigInt r;
  mpz_add(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::operator-(const BigInt& o) const {
  BigInt r;
  mpz_sub(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::operator*(const BigInt& o) const {
  BigInt r;
  mpz_mul(r.z_, z_, o.z_);
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r;
  mpz_neg(r.z_, z_);
  return r;
}

BigInt BigInt::operator<<(std::uint64_t k) const {
  BigInt r;
  mpz_mul_2exp(r.z_, z_, k);
  return r;
}

BigInt BigInt::operator>>(std::uint64_t k) const {
  BigInt r;
  mpz_fdiv_q_2exp(r.z_, z_, k);
  return r;
}

BigInt BigInt::abs() const {
  BigInt r;
  mpz_abs(r.z_, z_);
  return r;
}

BigInt BigInt::low_bits(std::uint64_t k) const {
  BigInt r;
  mpz_fdiv_r_2exp(r.z_, z_, k);
  return r;
}

BigInt BigInt::fdiv_q(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_q(r.z_, a.z_, b.z_);
  return r;
}

BigInt BigInt::div_round_even(const BigInt& a, const BigInt& b) {
  // Work with floor quotient and nonnegative remainder against |b| so the
  // tie rule is applied to the true fractional part.
  BigInt babs = b.abs();
  BigInt q, r;
  mpz_fdiv_qr(q.z_, r.z_, a.z_, babs.z_);
  BigInt twice_r = r << 1;
  int c = twice_r.compare(babs);
  if (c > 0 || (c == 0 && q.is_odd())) {
    mpz_add_ui(q.z_, q.z_, 1);
  }
  if (b.sign() < 0) mpz_neg(q.z_, q.z_);
  return q;
}

BigInt BigInt::round_shift_even(const BigInt& x, std::int64_t k) {
  if (k <= 0) return x << static_cast<std::uint64_t>(-k);
  std::uint64_t uk = static_cast<std::uint64_t>(k);
  BigInt q = x >> uk;
  BigInt r = x.low_bits(uk);  // in [0, 2^k); exact fractional part of q
  BigInt half = pow2(uk - 1);
  int c = r.compare(half);
  if (c > 0 || (c == 0 && q.is_odd())) {
    mpz_add_ui(q.raw(), q.raw(), 1);
  }
  return q;
}

std::vector<std::uint64_t> BigInt::to_limbs() const {
  std::vector<std::uint64_t> limbs((bit_length() + 63) / 64);
  if (limbs.empty()) return limbs;
  size_t count = 0;
  mpz_export(limbs.data(), &count, -1, sizeof(std::uint64_t), 0, 0, z_);
  limbs.resize(count);
  return limbs;
}

BigInt BigInt::from_limbs(const std::vector<std::uint64_t>& limbs) {
  BigInt r;
  if (!limbs.empty()) {
    mpz_import(r.z_, limbs.size(), -1, sizeof(std::uint64_t), 0, 0,
               limbs.data());
  }
  return r;
}

}  // namespace truncmul
