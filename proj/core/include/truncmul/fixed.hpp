#pragma once

#include <cstdint>

#include "truncmul/dyadic.hpp"

namespace truncmul {

// Guard bits used by internal map evaluations: work at precision p + kGuardBits,
// round once at the end.
inline constexpr int kGuardBits = 16;

// Fixed-point real: value = mantissa * 2^{exponent - precision} with
// |mantissa| <= 2^precision (closed range). The exponent is carried
// explicitly so every intermediate knows its own scale.
class FixedReal {
 public:
  FixedReal() : mant_(0L), prec_(1), exp_(0) {}
  FixedReal(BigInt mantissa, std::int32_t precision, std::int64_t exponent);

  const BigInt& mantissa() const { return mant_; }
  std::int32_t precision() const { return prec_; }
  std::int64_t exponent() const { return exp_; }
  bool is_zero() const { return mant_.is_zero(); }

  DyadicRational value() const {
    return DyadicRational(mant_, static_cast<std::int64_t>(prec_) - exp_);
  }
  double to_double() const { return value().to_double(); }

  // Exact product of the underlying values.
  static DyadicRational mul_exact(const FixedReal& a, const FixedReal& b) {
    return a.value() * b.value();
  }

 private:
  BigInt mant_;
  std::int32_t prec_;
  std::int64_t exp_;
};

// Rounds x to the grid 2^{e-p}, ties to even. Throws OverflowError when the
// rounded mantissa falls outside [-2^p, 2^p].
FixedReal round_to_fixed(const DyadicRational& x, std::int32_t p,
                         std::int64_t e);

// Nearest integer to x, ties to even.
BigInt round_nearest_int(const DyadicRational& x);

// Represents the integer c at scale (p, e); requires c * 2^{p-e} to be an
// integer with |c| <= 2^e (i.e. p >= e's implied chunk width). Convenience
// for splitting integer chunks into fixed-point coefficients.
FixedReal fixed_from_integer(const BigInt& c, std::int32_t p, std::int64_t e);

}  // namespace truncmul
