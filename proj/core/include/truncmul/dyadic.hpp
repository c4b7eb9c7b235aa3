#pragma once

#include <cstdint>

#include "truncmul/bigint.hpp"

namespace truncmul {

// Exact dyadic rational num * 2^{-shift}. shift may be negative (large
// values with trailing zero bits stay compact). Canonical form keeps num odd
// or zero; zero always has shift 0. Arithmetic is exact; the only lossy
// operations are the explicitly named roundings.
class DyadicRational {
 public:
  DyadicRational() : num_(0L), shift_(0) {}
  explicit DyadicRational(BigInt integer) : num_(std::move(integer)), shift_(0) {}
  DyadicRational(BigInt num, std::int64_t shift)
      : num_(std::move(num)), shift_(shift) {
    normalize();
  }
  static DyadicRational from_pow2(std::int64_t k) {
    return DyadicRational(BigInt(1L), -k);
  }

  const BigInt& num() const { return num_; }
  std::int64_t shift() const { return shift_; }
  bool is_zero() const { return num_.is_zero(); }
  int sign() const { return num_.sign(); }

  DyadicRational operator+(const DyadicRational& o) const;
  DyadicRational operator-(const DyadicRational& o) const;
  DyadicRational operator*(const DyadicRational& o) const;
  DyadicRational operator-() const { return DyadicRational(-num_, shift_); }
  DyadicRational& operator+=(const DyadicRational& o) {
    *this = *this + o;
    return *this;
  }
  DyadicRational& operator-=(const DyadicRational& o) {
    *this = *this - o;
    return *this;
  }
  DyadicRational abs() const { return DyadicRational(num_.abs(), shift_); }

  // Exact scaling by 2^k.
  DyadicRational mul_pow2(std::int64_t k) const {
    if (is_zero()) return *this;
    return DyadicRational(num_, shift_ - k);
  }

  int compare(const DyadicRational& o) const;
  int compare_abs(const DyadicRational& o) const;
  bool operator==(const DyadicRational& o) const { return compare(o) == 0; }
  bool operator<(const DyadicRational& o) const { return compare(o) < 0; }
  bool operator<=(const DyadicRational& o) const { return compare(o) <= 0; }
  bool operator>(const DyadicRational& o) const { return compare(o) > 0; }
  bool operator>=(const DyadicRational& o) const { return compare(o) >= 0; }
  // Compares |x| against 2^k exactly.
  int compare_abs_pow2(std::int64_t k) const;

  // Nearest integer, ties to even.
  BigInt round_to_int_even() const {
    return BigInt::round_shift_even(num_, shift_);
  }
  // Nearest multiple of 2^{grid_log2} (returned as the integer multiplier),
  // ties to even.
  BigInt round_to_grid(std::int64_t grid_log2) const {
    return BigInt::round_shift_even(num_, shift_ + grid_log2);
  }
  // Rounds to at most `bits` significant bits, ties to even. Exact when the
  // value already fits.
  DyadicRational round_to_signif(std::uint64_t bits) const;
  // Quotient a/b rounded to `bits` significant bits. b must be nonzero.
  static DyadicRational div_signif(const DyadicRational& a,
                                   const DyadicRational& b,
                                   std::uint64_t bits);

  double to_double() const;

 private:
  void normalize();

  BigInt num_;
  std::int64_t shift_;
};

}  // namespace truncmul
