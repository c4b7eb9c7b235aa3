#pragma once

#include <cstdint>
#include <gmp.h>

#include <vector>

#include "truncmul/bigint.hpp"
#include "truncmul/dyadic.hpp"

namespace truncmul {

// Exact fraction, canonicalised after every operation.
class Rational {
 public:
  Rational();
  explicit Rational(const BigInt& z);
  Rational(const BigInt& num, const BigInt& den);  // den must be nonzero
  Rational(const Rational& other);
  Rational(Rational&& other) noexcept;
  Rational& operator=(const Rational& other);
  Rational& operator=(Rational&& other) noexcept;
  ~Rational();

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;  // o must be nonzero
  Rational operator-() const;
  Rational& operator*=(const Rational& o);
  Rational& operator+=(const Rational& o);

  // x(x-1)...(x-r+1) / r!
  static Rational binomial(const Rational& x, std::uint64_t r);

  bool operator==(const Rational& o) const;
  bool operator!=(const Rational& o) const { return !(*this == o); }
  int compare(const Rational& o) const;
  int sign() const;
  bool is_zero() const;
  Rational abs() const;

  BigInt num() const;
  BigInt den() const;  // always positive

  // Nearest multiple of 2^-grid_bits, ties to even; error <= 2^-(grid_bits+1).
  DyadicRational to_dyadic(std::int64_t grid_bits) const;
  double to_double() const;

 private:
  mpq_t q_;
};

// The four coefficient families indexing the change-of-basis maps between the
// cyclic ring and the two twisted rings.  Row r of each family scales like
// 2^-r(b-2) or better.
enum class SeriesFamily { kAlpha, kBeta, kGamma, kDelta };

// Exact coefficient for (family, r, k) at parameters (N, b).  Requires
// N >= 1, b >= 1, 0 <= k < N.
Rational series_coeff_exact(SeriesFamily family, std::uint64_t r,
                            std::uint64_t k, std::int64_t N, std::int32_t b);

// The exact coefficient rounded to the 2^-grid_bits grid, ties to even.
DyadicRational series_coeff(SeriesFamily family, std::uint64_t r,
                            std::uint64_t k, std::int64_t N, std::int32_t b,
                            std::int64_t grid_bits);

// Rows r = 0..lambda-1, each with N entries; row r is rounded to the grid
// 2^-(q + r(b-2)), i.e. to q bits relative to the row's magnitude bound.
std::vector<std::vector<DyadicRational>> coeff_table(SeriesFamily family,
                                                     std::int64_t lambda,
                                                     std::int64_t N,
                                                     std::int32_t b,
                                                     std::int64_t q);

// Same table with entries rounded to double.
std::vector<std::vector<double>> coeff_table_f64(SeriesFamily family,
                                                 std::int64_t lambda,
                                                 std::int64_t N,
                                                 std::int32_t b);

}  // namespace truncmul
