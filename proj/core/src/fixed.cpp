#include "truncmul/fixed.hpp"

#include "truncmul/errors.hpp"

namespace truncmul {

FixedReal::FixedReal(BigInt mantissa, std::int32_t precision,
                     std::int64_t exponent)
    : mant_(std::move(mantissa)), prec_(precision), exp_(exponent) {
  if (prec_ < 1) throw OverflowError("fixed-point precision must be >= 1");
  std::uint64_t len = mant_.bit_length();
  std::uint64_t p = static_cast<std::uint64_t>(prec_);
  bool ok = len < p + 1 ||
            (len == p + 1 && mant_.abs() == BigInt::pow2(p));
  if (!ok) {
    throw OverflowError("mantissa exceeds 2^p at precision p=" +
                        std::to_string(prec_));
  }
}

FixedReal round_to_fixed(const DyadicRational& x, std::int32_t p,
                         std::int64_t e) {
  BigInt m = x.round_to_grid(e - static_cast<std::int64_t>(p));
  return FixedReal(std::move(m), p, e);  // ctor enforces the mantissa range
}

BigInt round_nearest_int(const DyadicRational& x) {
  return x.round_to_int_even();
}

FixedReal fixed_from_integer(const BigInt& c, std::int32_t p,
                             std::int64_t e) {
  std::int64_t scale = static_cast<std::int64_t>(p) - e;
  if (scale < 0) {
    throw OverflowError("integer chunk does not land on the fixed grid");
  }
  return FixedReal(c << static_cast<std::uint64_t>(scale), p, e);
}

}  // namespace truncmul
