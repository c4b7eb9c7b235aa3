#include "truncmul/series.hpp"

#include "truncmul/errors.hpp"

namespace truncmul {

Rational::Rational() { mpq_init(q_); }

Rational::Rational(const BigInt& z) {
  mpq_init(q_);
  mpq_set_z(q_, z.raw());
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den.is_zero()) throw InputOutOfRange("Rational: zero denominator");
  mpq_init(q_);
  mpq_set_num(q_, num.raw());
  mpq_set_den(q_, den.raw());
  mpq_canonicalize(q_);
}

Rational::Rational(const Rational& other) {
  mpq_init(q_);
  mpq_set(q_, other.q_);
}

Rational::Rational(Rational&& other) noexcept {
  mpq_init(q_);
  mpq_swap(q_, other.q_);
}

Rational& Rational::operator=(const Rational& other) {
  if (this != &other) mpq_set(q_, other.q_);
  return *this;
}

Rational& Rational::operator=(Rational&& other) noexcept {
  if (this != &other) mpq_swap(q_, other.q_);
  return *this;
}

Rational::~Rational() { mpq_clear(q_); }

Rational Rational::operator+(const Rational& o) const {
  Rational r;
  mpq_add(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator-(const Rational& o) const {
  Rational r;
  mpq_sub(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator*(const Rational& o) const {
  Rational r;
  mpq_mul(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw InputOutOfRange("Rational: division by zero");
  Rational r;
  mpq_div(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator-() const {
  Rational r;
  mpq_neg(r.q_, q_);
  return r;
}

Rational& Rational::operator*=(const Rational& o) {
  mpq_mul(q_, q_, o.q_);
  return *this;
}

Rational& Rational::operator+=(const Rational& o) {
  mpq_add(q_, q_, o.q_);
  return *this;
}

Rational Rational::binomial(const Rational& x, std::uint64_t r) {
  Rational acc(BigInt(1));
  Rational term = x;
  for (std::uint64_t j = 0; j < r; ++j) {
    Rational factor = (term - Rational(BigInt::from_int64(
                                  static_cast<std::int64_t>(j)))) /
                      Rational(BigInt::from_int64(
                          static_cast<std::int64_t>(j + 1)));
    acc *= factor;
  }
  return acc;
}

bool Rational::operator==(const Rational& o) const {
  return mpq_equal(q_, o.q_) != 0;
}

int Rational::compare(const Rational& o) const {
  int c = mpq_cmp(q_, o.q_);
  return c < 0 ? -1 : c > 0 ? 1 : 0;
}

int Rational::sign() const { return mpq_sgn(q_); }

bool Rational::is_zero() const { return sign() == 0; }

Rational Rational::abs() const {
  Rational r;
  mpq_abs(r.q_, q_);
  return r;
}

BigInt Rational::num() const {
  BigInt r;
  mpz_set(r.raw(), mpq_numref(q_));
  return r;
}

BigInt Rational::den() const {
  BigInt r;
  mpz_set(r.raw(), mpq_denref(q_));
  return r;
}

DyadicRational Rational::to_dyadic(std::int64_t grid_bits) const {
  BigInt n = num();
  BigInt d = den();
  if (grid_bits >= 0)
    n = n << grid_bits;
  else
    d = d << static_cast<std::uint64_t>(-grid_bits);
  BigInt m = BigInt::div_round_even(n, d);
  return DyadicRational(m, grid_bits);
}

double Rational::to_double() const { return mpq_get_d(q_); }

namespace {

// The binomial argument for each family; alpha and gamma carry the extra
// prefactor k/(rN) (resp. -k/(rN)) applied to a binomial of order r-1.
Rational coeff_inner(SeriesFamily family, std::uint64_t r, std::uint64_t k,
                     std::int64_t N) {
  BigInt bigN = BigInt::from_int64(N);
  BigInt bigK = BigInt::from_int64(static_cast<std::int64_t>(k));
  BigInt bigR = BigInt::from_int64(static_cast<std::int64_t>(r));
  switch (family) {
    case SeriesFamily::kBeta:
      return Rational::binomial(Rational(-bigK, bigN), r);
    case SeriesFamily::kDelta:
      return Rational::binomial(Rational(bigK, bigN), r);
    case SeriesFamily::kAlpha: {
      if (r == 0) return Rational(BigInt(1));
      if (k == 0) return Rational();
      Rational x = Rational(bigK + bigR - bigN, bigN);
      return Rational(bigK, bigR * bigN) * Rational::binomial(x, r - 1);
    }
    case SeriesFamily::kGamma: {
      if (r == 0) return Rational(BigInt(1));
      if (k == 0) return Rational();
      Rational x = Rational(-(bigK + bigR) - bigN, bigN);
      return Rational(-bigK, bigR * bigN) * Rational::binomial(x, r - 1);
    }
  }
  throw InputOutOfRange("series_coeff: unknown family");
}

}  // namespace

Rational series_coeff_exact(SeriesFamily family, std::uint64_t r,
                            std::uint64_t k, std::int64_t N, std::int32_t b) {
  if (N < 1 || b < 1 || k >= static_cast<std::uint64_t>(N))
    throw InputOutOfRange("series_coeff: bad (N, b, k)");
  Rational inner = coeff_inner(family, r, k, N);
  // times (-2^-b)^r
  BigInt den = BigInt::pow2(static_cast<std::uint64_t>(b) * r);
  Rational scale(r % 2 == 0 ? BigInt(1) : BigInt(-1), den);
  return inner * scale;
}

DyadicRational series_coeff(SeriesFamily family, std::uint64_t r,
                            std::uint64_t k, std::int64_t N, std::int32_t b,
                            std::int64_t grid_bits) {
  return series_coeff_exact(family, r, k, N, b).to_dyadic(grid_bits);
}

std::vector<std::vector<DyadicRational>> coeff_table(SeriesFamily family,
                                                     std::int64_t lambda,
                                                     std::int64_t N,
                                                     std::int32_t b,
                                                     std::int64_t q) {
  if (lambda < 1 || N < 1 || b < 3)
    throw InputOutOfRange("coeff_table: bad (lambda, N, b)");
  std::vector<std::vector<DyadicRational>> rows(
      static_cast<std::size_t>(lambda));
  for (std::int64_t r = 0; r < lambda; ++r) {
    std::int64_t grid = q + r * (b - 2);
    auto& row = rows[static_cast<std::size_t>(r)];
    row.reserve(static_cast<std::size_t>(N));
    for (std::int64_t k = 0; k < N; ++k)
      row.push_back(series_coeff(family, static_cast<std::uint64_t>(r),
                                 static_cast<std::uint64_t>(k), N, b, grid));
  }
  return rows;
}

std::vector<std::vector<double>> coeff_table_f64(SeriesFamily family,
                                                 std::int64_t lambda,
                                                 std::int64_t N,
                                                 std::int32_t b) {
  if (lambda < 1 || N < 1 || b < 3)
    throw InputOutOfRange("coeff_table_f64: bad (lambda, N, b)");
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(lambda));
  for (std::int64_t r = 0; r < lambda; ++r) {
    auto& row = rows[static_cast<std::size_t>(r)];
    row.resize(static_cast<std::size_t>(N));
    for (std::int64_t k = 0; k < N; ++k)
      row[static_cast<std::size_t>(k)] =
          series_coeff_exact(family, static_cast<std::uint64_t>(r),
                             static_cast<std::uint64_t>(k), N, b)
              .to_double();
  }
  return rows;
}

}  // namespace truncmul
