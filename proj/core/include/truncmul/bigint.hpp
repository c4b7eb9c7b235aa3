#pragma once

#include <gmp.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace truncmul {

// Value-semantic arbitrary-precision integer over a GMP mpz_t.
// Only the operations the library needs are exposed; all shifts that drop
// bits are explicit about their rounding (floor or round-half-to-even).
class BigInt {
 public:
  BigInt() { mpz_init(z_); }
  BigInt(int v) { mpz_init_set_si(z_, v); }  // NOLINT(runtime/explicit)
  BigInt(long v) { mpz_init_set_si(z_, v); }  // NOLINT(runtime/explicit)
  BigInt(unsigned long v) { mpz_init_set_ui(z_, v); }
  BigInt(const BigInt& o) { mpz_init_set(z_, o.z_); }
  BigInt(BigInt&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  BigInt& operator=(const BigInt& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  BigInt& operator=(BigInt&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~BigInt() { mpz_clear(z_); }

  static BigInt from_int64(std::int64_t v);
  static BigInt pow2(std::uint64_t k);  // 2^k
  // Parses a lowercase hex string (no prefix, no sign). Returns false on any
  // invalid character, uppercase digit, or empty string.
  static bool from_hex(const std::string& s, BigInt* out);
  std::string to_hex() const;  // lowercase, no prefix; "-" prefix if negative
  std::string to_dec() const;

  int sign() const { return mpz_sgn(z_); }
  bool is_zero() const { return mpz_sgn(z_) == 0; }
  bool is_odd() const { return mpz_odd_p(z_) != 0; }
  // Number of bits of |x|; 0 for x = 0.
  std::uint64_t bit_length() const {
    return is_zero() ? 0 : mpz_sizeinbase(z_, 2);
  }
  // Largest k with 2^k | x; undefined for x = 0.
  std::uint64_t trailing_zeros() const { return mpz_scan1(z_, 0); }

  bool fits_int64() const;
  std::int64_t to_int64() const;  // requires fits_int64()
  double to_double() const { return mpz_get_d(z_); }
  // Returns d in [0.5, 1) and exp with x ~= d * 2^exp.
  double to_double_2exp(long* exp) const { return mpz_get_d_2exp(exp, z_); }

  BigInt operator+(const BigInt& o) const;
  BigInt operator-(const BigInt& o) const;
  BigInt operator*(const BigInt& o) const;
  BigInt operator-() const;
  BigInt& operator+=(const BigInt& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  BigInt& operator-=(const BigInt& o) {
    mpz_sub(z_, z_, o.z_);
    return *this;
  }
  BigInt& operator*=(const BigInt& o) {
    mpz_mul(z_, z_, o.z_);
    return *this;
  }
  BigInt& mul_int(long v) {
    mpz_mul_si(z_, z_, v);
    return *this;
  }
  void add_product(const BigInt& a, const BigInt& b) {  // *this += a*b
    mpz_addmul(z_, a.z_, b.z_);
  }
  void sub_product(const BigInt& a, const BigInt& b) {  // *this -= a*b
    mpz_submul(z_, a.z_, b.z_);
  }

  BigInt operator<<(std::uint64_t k) const;
  // Floor shift: rounds toward -infinity.
  BigInt operator>>(std::uint64_t k) const;

  int compare(const BigInt& o) const { return mpz_cmp(z_, o.z_); }
  int compare_abs(const BigInt& o) const { return mpz_cmpabs(z_, o.z_); }
  bool operator==(const BigInt& o) const { return compare(o) == 0; }
  bool operator!=(const BigInt& o) const { return compare(o) != 0; }
  bool operator<(const BigInt& o) const { return compare(o) < 0; }
  bool operator<=(const BigInt& o) const { return compare(o) <= 0; }
  bool operator>(const BigInt& o) const { return compare(o) > 0; }
  bool operator>=(const BigInt& o) const { return compare(o) >= 0; }

  BigInt abs() const;
  // x mod 2^k, result in [0, 2^k).
  BigInt low_bits(std::uint64_t k) const;
  bool divisible_by_pow2(std::uint64_t k) const {
    return mpz_divisible_2exp_p(z_, k) != 0;
  }
  // Floor quotient.
  static BigInt fdiv_q(const BigInt& a, const BigInt& b);
  // Nearest integer to a/b, ties to even. b must be nonzero.
  static BigInt div_round_even(const BigInt& a, const BigInt& b);
  // Nearest integer to x / 2^k, ties to even; k <= 0 shifts left exactly.
  static BigInt round_shift_even(const BigInt& x, std::int64_t k);

  // Little-endian 64-bit limbs of |x| (empty for 0), and back.
  std::vector<std::uint64_t> to_limbs() const;
  static BigInt from_limbs(const std::vector<std::uint64_t>& limbs);

  mpz_srcptr raw() const { return z_; }
  mpz_ptr raw() { return z_; }

 private:
  mpz_t z_;
};

// The library's nonnegative-integer role (operands, products, chunks) uses
// the same representation; call sites enforce the sign where it matters.
using BigNat = BigInt;

}  // namespace truncmul
