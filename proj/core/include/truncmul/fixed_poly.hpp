#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "truncmul/fixed.hpp"

namespace truncmul {

// Identifies the quotient ring a coefficient vector represents. The rings
// in play, for chunk width b and length N:
//   kCyclic : X^N - 1                       (N coefficients)
//   kModA   : X^N + 2^{-b} X - 1            (N coefficients)
//   kModB   : X^{N+1} - 2^b X^N + 2^b       (N+1 coefficients)
//   kModC   : the degree-N cofactor of kModB through its real root
//             (N coefficients)
struct ModulusTag {
  enum class Kind : std::uint8_t { kCyclic, kModA, kModB, kModC };

  Kind kind = Kind::kCyclic;
  std::int32_t b = 0;  // chunk width; 0 for kCyclic
  std::int64_t N = 0;

  static ModulusTag cyclic(std::int64_t n) {
    return ModulusTag{Kind::kCyclic, 0, n};
  }
  static ModulusTag mod_a(std::int32_t b, std::int64_t n) {
    return ModulusTag{Kind::kModA, b, n};
  }
  static ModulusTag mod_b(std::int32_t b, std::int64_t n) {
    return ModulusTag{Kind::kModB, b, n};
  }
  static ModulusTag mod_c(std::int32_t b, std::int64_t n) {
    return ModulusTag{Kind::kModC, b, n};
  }

  std::size_t coeff_count() const {
    return static_cast<std::size_t>(kind == Kind::kModB ? N + 1 : N);
  }
  bool operator==(const ModulusTag& o) const {
    return kind == o.kind && b == o.b && N == o.N;
  }
  bool operator!=(const ModulusTag& o) const { return !(*this == o); }
  std::string describe() const;
};

// Polynomial with fixed-point coefficients sharing one (precision, exponent):
// coefficient i has value mant[i] * 2^{exponent - precision}, |mant[i]| <=
// 2^precision. Sharing the scale keeps the representation flat and makes the
// norm bound a single mantissa check.
class FixedPolynomial {
 public:
  FixedPolynomial() = default;
  // Zero polynomial of the tag's length.
  FixedPolynomial(ModulusTag tag, std::int32_t precision,
                  std::int64_t exponent);

  const ModulusTag& tag() const { return tag_; }
  std::int32_t precision() const { return prec_; }
  std::int64_t exponent() const { return exp_; }
  std::size_t size() const { return mant_.size(); }

  const BigInt& mant(std::size_t i) const { return mant_[i]; }
  BigInt& mant(std::size_t i) { return mant_[i]; }
  const std::vector<BigInt>& mantissas() const { return mant_; }

  FixedReal coeff(std::size_t i) const { return FixedReal(mant_[i], prec_, exp_); }
  DyadicRational coeff_value(std::size_t i) const {
    return DyadicRational(mant_[i],
                          static_cast<std::int64_t>(prec_) - exp_);
  }
  // Sets coefficient i by rounding x onto this polynomial's grid.
  void set_coeff(std::size_t i, const DyadicRational& x);

  // Throws OverflowError if any mantissa leaves [-2^p, 2^p].
  void check_mantissa_range() const;
  // max_i |coefficient i| as an exact dyadic.
  DyadicRational max_abs_value() const;

 private:
  ModulusTag tag_;
  std::int32_t prec_ = 1;
  std::int64_t exp_ = 0;
  std::vector<BigInt> mant_;
};

}  // namespace truncmul
