#include "truncmul/fixed_poly.hpp"

#include "truncmul/errors.hpp"

namespace truncmul {

std::string ModulusTag::describe() const {
  const char* k = "?";
  switch (kind) {
    case Kind::kCyclic: k = "cyclic"; break;
    case Kind::kModA: k = "mod-A"; break;
    case Kind::kModB: k = "mod-B"; break;
    case Kind::kModC: k = "mod-C"; break;
  }
  return std::string(k) + "(b=" + std::to_string(b) +
         ",N=" + std::to_string(N) + ")";
}

FixedPolynomial::FixedPolynomial(ModulusTag tag, std::int32_t precision,
                                 std::int64_t exponent)
    : tag_(tag), prec_(precision), exp_(exponent),
      mant_(tag.coeff_count(), BigInt(0L)) {}

void FixedPolynomial::set_coeff(std::size_t i, const DyadicRational& x) {
  mant_[i] = x.round_to_grid(exp_ - static_cast<std::int64_t>(prec_));
}

void FixedPolynomial::check_mantissa_range() const {
  BigInt bound = BigInt::pow2(static_cast<std::uint64_t>(prec_));
  for (std::size_t i = 0; i < mant_.size(); ++i) {
    if (mant_[i].compare_abs(bound) > 0) {
      throw OverflowError("coefficient " + std::to_string(i) +
                          " exceeds 2^p in " + tag_.describe());
    }
  }
}

DyadicRational FixedPolynomial::max_abs_value() const {
  BigInt best(0L);
  for (const BigInt& m : mant_) {
    if (m.compare_abs(best) > 0) best = m;
  }
  return DyadicRational(best.abs(),
                        static_cast<std::int64_t>(prec_) - exp_);
}

}  // namespace truncmul
