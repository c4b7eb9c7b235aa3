#include <doctest.h>

#include <cstdint>

#include "truncmul/errors.hpp"
#include "truncmul/series.hpp"

using truncmul::BigInt;
using truncmul::DyadicRational;
using truncmul::Rational;
using truncmul::SeriesFamily;

namespace {

Rational frac(long num, long den) {
  return Rational(BigInt(num), BigInt(den));
}

Rational pow2_frac(long num, long den, std::int64_t down_shift) {
  return Rational(BigInt(num), BigInt(den) * BigInt::pow2(
                                   static_cast<std::uint64_t>(down_shift)));
}

}  // namespace

TEST_SUITE_BEGIN("series");

TEST_CASE("leading coefficients match the closed forms") {
  for (std::int64_t N : {3, 5, 12, 64}) {
    for (std::int32_t b : {4, 8, 14}) {
      using SF = SeriesFamily;
      // row r = 0 is identically 1
      for (std::uint64_t k : {0ULL, 1ULL, static_cast<unsigned long long>(N - 1)})
        for (auto fam : {SF::kAlpha, SF::kBeta, SF::kGamma, SF::kDelta})
          CHECK(truncmul::series_coeff_exact(fam, 0, k, N, b) ==
                frac(1, 1));
      // k = 0 column vanishes for r >= 1 in all four families
      for (std::uint64_t r : {1ULL, 2ULL, 3ULL})
        for (auto fam : {SF::kAlpha, SF::kBeta, SF::kGamma, SF::kDelta})
          CHECK(truncmul::series_coeff_exact(fam, r, 0, N, b).is_zero());
      // first few terms of each scalar series (k = 1)
      CHECK(truncmul::series_coeff_exact(SF::kBeta, 1, 1, N, b) ==
            pow2_frac(1, N, b));
      CHECK(truncmul::series_coeff_exact(SF::kBeta, 2, 1, N, b) ==
            pow2_frac(N + 1, 2 * N * N, 2 * b));
      CHECK(truncmul::series_coeff_exact(SF::kBeta, 3, 1, N, b) ==
            pow2_frac((N + 1) * (2 * N + 1), 6 * N * N * N, 3 * b));
      CHECK(truncmul::series_coeff_exact(SF::kAlpha, 1, 1, N, b) ==
            pow2_frac(-1, N, b));
      CHECK(truncmul::series_coeff_exact(SF::kAlpha, 2, 1, N, b) ==
            pow2_frac(-(N - 3), 2 * N * N, 2 * b));
      CHECK(truncmul::series_coeff_exact(SF::kAlpha, 3, 1, N, b) ==
            pow2_frac(-(N - 4) * (2 * N - 4), 6 * N * N * N, 3 * b));
      CHECK(truncmul::series_coeff_exact(SF::kDelta, 1, 1, N, b) ==
            pow2_frac(-1, N, b));
      CHECK(truncmul::series_coeff_exact(SF::kDelta, 2, 1, N, b) ==
            pow2_frac(-(N - 1), 2 * N * N, 2 * b));
      CHECK(truncmul::series_coeff_exact(SF::kDelta, 3, 1, N, b) ==
            pow2_frac(-(N - 1) * (2 * N - 1), 6 * N * N * N, 3 * b));
      CHECK(truncmul::series_coeff_exact(SF::kGamma, 1, 1, N, b) ==
            pow2_frac(1, N, b));
      CHECK(truncmul::series_coeff_exact(SF::kGamma, 2, 1, N, b) ==
            pow2_frac(N + 3, 2 * N * N, 2 * b));
      CHECK(truncmul::series_coeff_exact(SF::kGamma, 3, 1, N, b) ==
            pow2_frac((N + 4) * (2 * N + 4), 6 * N * N * N, 3 * b));
    }
  }
}

TEST_CASE("power-product identity ties the whole table together") {
  // Row k of each family is the k-th power of row 1 as a formal series, so
  // coefficients must convolve: sum_{r1+r2=r} c_{r1,k1} c_{r2,k2} = c_{r,k1+k2}.
  std::int64_t N = 11;
  std::int32_t b = 5;
  for (auto fam : {SeriesFamily::kAlpha, SeriesFamily::kBeta,
                   SeriesFamily::kGamma, SeriesFamily::kDelta}) {
    for (std::uint64_t k1 : {1ULL, 2ULL, 4ULL}) {
      for (std::uint64_t k2 : {1ULL, 3ULL, 5ULL}) {
        if (k1 + k2 >= static_cast<std::uint64_t>(N)) continue;
        for (std::uint64_t r = 0; r <= 6; ++r) {
          Rational conv;
          for (std::uint64_t r1 = 0; r1 <= r; ++r1)
            conv += truncmul::series_coeff_exact(fam, r1, k1, N, b) *
                    truncmul::series_coeff_exact(fam, r - r1, k2, N, b);
          CHECK(conv == truncmul::series_coeff_exact(fam, r, k1 + k2, N, b));
        }
      }
    }
  }
}

TEST_CASE("composition identities pair the inverse families") {
  // beta(alpha-side) and delta(gamma-side) are compositional inverses:
  //   sum_{r+s=m} inner_{r,1} outer_{s,r+1} = [m == 0].
  std::int64_t N = 13;
  std::int32_t b = 6;
  auto check_inverse = [&](SeriesFamily outer, SeriesFamily inner) {
    for (std::uint64_t m = 0; m <= 7; ++m) {
      Rational acc;
      for (std::uint64_t r = 0; r <= m; ++r)
        acc += truncmul::series_coeff_exact(outer, r, 1, N, b) *
               truncmul::series_coeff_exact(inner, m - r, r + 1, N, b);
      if (m == 0)
        CHECK(acc == frac(1, 1));
      else
        CHECK(acc.is_zero());
    }
  };
  // beta(alpha(z)) = z and alpha(beta(z)) = z
  check_inverse(SeriesFamily::kBeta, SeriesFamily::kAlpha);
  check_inverse(SeriesFamily::kAlpha, SeriesFamily::kBeta);
  // delta(gamma(z)) = z and gamma(delta(z)) = z
  check_inverse(SeriesFamily::kDelta, SeriesFamily::kGamma);
  check_inverse(SeriesFamily::kGamma, SeriesFamily::kDelta);
}

TEST_CASE("magnitude bounds") {
  for (std::int64_t N : {3, 7, 32}) {
    for (std::int32_t b : {4, 6, 12}) {
      for (std::uint64_t r = 0; r < 8; ++r) {
        Rational tight = Rational(BigInt(1),
                                  BigInt::pow2(static_cast<std::uint64_t>(b) * r));
        Rational loose =
            Rational(BigInt(1),
                     BigInt::pow2(static_cast<std::uint64_t>(b - 2) * r));
        for (std::int64_t k = 0; k < N; ++k) {
          auto kk = static_cast<std::uint64_t>(k);
          CHECK(truncmul::series_coeff_exact(SeriesFamily::kBeta, r, kk, N, b)
                    .abs()
                    .compare(tight) <= 0);
          CHECK(truncmul::series_coeff_exact(SeriesFamily::kDelta, r, kk, N, b)
                    .abs()
                    .compare(tight) <= 0);
          CHECK(truncmul::series_coeff_exact(SeriesFamily::kAlpha, r, kk, N, b)
                    .abs()
                    .compare(loose) <= 0);
          CHECK(truncmul::series_coeff_exact(SeriesFamily::kGamma, r, kk, N, b)
                    .abs()
                    .compare(loose) <= 0);
        }
      }
    }
  }
}

TEST_CASE("table layout and grid rounding") {
  auto rows = truncmul::coeff_table(SeriesFamily::kAlpha, 2, 3, 4, 40);
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].size() == 3);
  for (const auto& v : rows[0]) CHECK(v == DyadicRational(BigInt(1), 0));
  // alpha row 1 at (N=3, b=4) is (0, -1/48, -1/24), rounded to grid 40+2.
  CHECK(rows[1][0].is_zero());
  CHECK(rows[1][1] == truncmul::series_coeff(SeriesFamily::kAlpha, 1, 1, 3, 4,
                                             42));
  CHECK((rows[1][1] * DyadicRational(BigInt(48), 0) + DyadicRational(BigInt(1), 0))
            .compare_abs_pow2(-36) < 0);
  CHECK((rows[1][2] * DyadicRational(BigInt(24), 0) + DyadicRational(BigInt(1), 0))
            .compare_abs_pow2(-36) < 0);

  auto f64 = truncmul::coeff_table_f64(SeriesFamily::kGamma, 3, 5, 8);
  REQUIRE(f64.size() == 3);
  REQUIRE(f64[0].size() == 5);
  CHECK(f64[0][2] == 1.0);
  CHECK(f64[1][0] == 0.0);
  for (std::size_t k = 0; k < 5; ++k) {
    double exact = truncmul::series_coeff_exact(SeriesFamily::kGamma, 2, k, 5, 8)
                       .to_double();
    CHECK(f64[2][k] == doctest::Approx(exact).epsilon(1e-15));
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(truncmul::series_coeff_exact(SeriesFamily::kBeta, 1, 5, 5, 4),
                  truncmul::InputOutOfRange);
  CHECK_THROWS_AS(truncmul::series_coeff_exact(SeriesFamily::kBeta, 1, 0, 0, 4),
                  truncmul::InputOutOfRange);
  CHECK_THROWS_AS(truncmul::coeff_table(SeriesFamily::kBeta, 0, 4, 4, 10),
                  truncmul::InputOutOfRange);
}

TEST_SUITE_END();
