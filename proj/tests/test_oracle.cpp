#include <doctest.h>

#include <cstdint>
#include <random>

#include "test_support.hpp"
#include "truncmul/errors.hpp"
#include "truncmul/oracle.hpp"

using truncmul::BigInt;
using truncmul::InputKind;
using truncmul::IntPolynomial;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("limb_mul matches native 128-bit products") {
  std::mt19937_64 rng(101);
  for (int iter = 0; iter < 2000; ++iter) {
    std::int64_t a = static_cast<std::int64_t>(rng() >> (rng() % 63));
    std::int64_t b = static_cast<std::int64_t>(rng() >> (rng() % 63));
    if (rng() & 1) a = -a;
    if (rng() & 1) b = -b;
    __int128 want = static_cast<__int128>(a) * b;
    BigInt got = truncmul::limb_mul(BigInt::from_int64(a), BigInt::from_int64(b));
    unsigned __int128 mag = want < 0 ? -static_cast<unsigned __int128>(want)
                                     : static_cast<unsigned __int128>(want);
    std::vector<std::uint64_t> limbs = {static_cast<std::uint64_t>(mag),
                                        static_cast<std::uint64_t>(mag >> 64)};
    BigInt expect = BigInt::from_limbs(limbs);
    if (want < 0) expect = -expect;
    CHECK(got == expect);
  }
}

TEST_CASE("limb_mul agrees with the library multiply on large operands") {
  // Two independent multiplication routes; agreement certifies both.
  std::mt19937_64 rng(102);
  for (int bits : {64, 200, 1000, 3000, 20000, 100000}) {
    for (int iter = 0; iter < 4; ++iter) {
      BigInt a = testsup::random_signed_bits(rng, bits);
      BigInt b = testsup::random_signed_bits(rng, bits);
      CHECK(truncmul::limb_mul(a, b) == a * b);
    }
  }
}

TEST_CASE("limb_mul algebraic identities across the Karatsuba cutoff") {
  std::mt19937_64 rng(103);
  for (int bits : {1, 63, 64, 65, 127, 1536, 1537, 4096}) {
    BigInt a = testsup::random_bits(rng, bits);
    BigInt b = testsup::random_bits(rng, bits);
    BigInt sq_sum = truncmul::limb_mul(a + b, a + b);
    BigInt cross = truncmul::limb_mul(a, b);
    BigInt expect = truncmul::limb_mul(a, a) + (cross << 1) +
                    truncmul::limb_mul(b, b);
    CHECK(sq_sum == expect);
    CHECK(truncmul::limb_mul(a + b, a - b) ==
          truncmul::limb_mul(a, a) - truncmul::limb_mul(b, b));
  }
  CHECK(truncmul::limb_mul(BigInt(0), BigInt(12345)).is_zero());
  CHECK(truncmul::limb_mul(BigInt(-7), BigInt(9)) == BigInt(-63));
}

TEST_CASE("oracle_low and oracle_high_set semantics") {
  std::mt19937_64 rng(104);
  for (int iter = 0; iter < 200; ++iter) {
    std::uint64_t n = 8 + rng() % 120;
    BigInt u = testsup::random_bits(rng, n);
    BigInt v = testsup::random_bits(rng, n);
    BigInt p = truncmul::oracle_full(u, v);
    CHECK(truncmul::oracle_low(u, v, n) == p.low_bits(n));
    auto highs = truncmul::oracle_high_set(u, v, n);
    CHECK(!highs.empty());
    CHECK(highs.size() <= 2);
    for (const BigInt& w : highs) {
      CHECK(truncmul::is_valid_high(u, v, n, w));
      BigInt resid = p - (w << n);
      CHECK(resid.compare_abs(BigInt::pow2(n)) < 0);
    }
    // floor(uv / 2^n) is always a member.
    CHECK(highs.front() == (p >> n));
    // Exactness: two members iff the product is not a multiple of 2^n.
    CHECK((highs.size() == 2) == !p.low_bits(n).is_zero());
  }
}

TEST_CASE("fold modulo X^N + 2^-b X - 1 evaluates to the low part") {
  std::mt19937_64 rng(105);
  for (int iter = 0; iter < 60; ++iter) {
    std::int64_t N = 2 + static_cast<std::int64_t>(rng() % 12);
    std::int32_t b = 4 + static_cast<std::int32_t>(rng() % 10);
    IntPolynomial w(static_cast<std::size_t>(2 * N - 1));
    for (auto& c : w.coeffs) c = testsup::random_signed_bits(rng, 2 * b + 4);
    IntPolynomial m = truncmul::reduce_mod_A_scaled(w, N, b);
    // Scaled remainder evaluates at 2^b to exactly 2^b * sum_{i<N} w_i 2^{ib}.
    BigInt low_part;
    for (std::int64_t i = N; i-- > 0;)
      low_part = (low_part << b) + w.coeffs[static_cast<std::size_t>(i)];
    CHECK(m.eval_pow2(b) == (low_part << b));
    // Hence the congruence with the full value modulo 2^(Nb), scaled by 2^b.
    BigInt diff = (w.eval_pow2(b) << b) - m.eval_pow2(b);
    CHECK(diff.divisible_by_pow2(static_cast<std::uint64_t>(N) * b + b));
  }
  IntPolynomial xn(8);  // X^7 with N=7: folds to 1 - 2^-b X
  xn.coeffs[7] = BigInt(1);
  IntPolynomial r = truncmul::reduce_mod_A_scaled(xn, 7, 5);
  CHECK(r.coeffs[0] == BigInt(32));
  CHECK(r.coeffs[1] == BigInt(-1));
  for (std::size_t i = 2; i < 7; ++i) CHECK(r.coeffs[i].is_zero());
  IntPolynomial deep(20);
  deep.coeffs[19] = BigInt(1);
  CHECK_THROWS_AS(truncmul::reduce_mod_A_scaled(deep, 10, 4),
                  truncmul::DegreeTooLarge);
}

TEST_CASE("fold modulo X^(N+1) - 2^b X^N + 2^b cancels the high part") {
  std::mt19937_64 rng(106);
  for (int iter = 0; iter < 60; ++iter) {
    std::int64_t N = 2 + static_cast<std::int64_t>(rng() % 12);
    std::int32_t b = 4 + static_cast<std::int32_t>(rng() % 10);
    IntPolynomial w(static_cast<std::size_t>(2 * N + 1));
    for (auto& c : w.coeffs) c = testsup::random_signed_bits(rng, 2 * b + 4);
    IntPolynomial m = truncmul::reduce_mod_B_scaled(w, N, b);
    CHECK(m.coeffs.size() == static_cast<std::size_t>(N + 1));
    // Exact cancellation: W(2^b) - 2^(Nb) H(2^b) = sum_{i<N} w_i 2^(ib).
    BigInt low_part;
    for (std::int64_t i = N; i-- > 0;)
      low_part = (low_part << b) + w.coeffs[static_cast<std::size_t>(i)];
    BigInt lhs = (w.eval_pow2(b) << b) -
                 (m.eval_pow2(b) << (static_cast<std::uint64_t>(N) * b));
    CHECK(lhs == (low_part << b));
    // Closed form of the remainder: w_i (1 - 2^-b X) X^i + w_{N+i} X^i.
    IntPolynomial closed(static_cast<std::size_t>(N + 1));
    for (std::int64_t i = 0; i < N; ++i) {
      closed.coeffs[static_cast<std::size_t>(i)] +=
          w.coeffs[static_cast<std::size_t>(i)] << b;
      closed.coeffs[static_cast<std::size_t>(i + 1)] -=
          w.coeffs[static_cast<std::size_t>(i)];
      closed.coeffs[static_cast<std::size_t>(i)] +=
          w.coeffs[static_cast<std::size_t>(N + i)] << b;
    }
    closed.coeffs[static_cast<std::size_t>(N)] +=
        w.coeffs[static_cast<std::size_t>(2 * N)] << b;
    for (std::size_t i = 0; i < closed.coeffs.size(); ++i)
      CHECK(m.coeffs[i] == closed.coeffs[i]);
  }
  IntPolynomial deep(30);
  deep.coeffs[29] = BigInt(1);
  CHECK_THROWS_AS(truncmul::reduce_mod_B_scaled(deep, 10, 4),
                  truncmul::DegreeTooLarge);
}

TEST_CASE("poly_mul_exact against direct evaluation") {
  std::mt19937_64 rng(107);
  for (int iter = 0; iter < 40; ++iter) {
    std::size_t fl = 1 + rng() % 10, gl = 1 + rng() % 10;
    IntPolynomial f(fl), g(gl);
    for (auto& c : f.coeffs) c = testsup::random_signed_bits(rng, 40);
    for (auto& c : g.coeffs) c = testsup::random_signed_bits(rng, 40);
    IntPolynomial p = truncmul::poly_mul_exact(f, g);
    std::int32_t b = 96;  // wide enough that coefficients cannot interfere
    CHECK(p.eval_pow2(b) == truncmul::limb_mul(f.eval_pow2(b), g.eval_pow2(b)));
  }
}

TEST_CASE("gen_inputs determinism and ranges") {
  auto a = truncmul::gen_inputs(256, 10, InputKind::kUniform, 42);
  auto b = truncmul::gen_inputs(256, 10, InputKind::kUniform, 42);
  auto c = truncmul::gen_inputs(256, 10, InputKind::kUniform, 43);
  REQUIRE(a.size() == 10);
  CHECK(a == b);
  CHECK(a != c);
  BigInt cap = BigInt::pow2(256);
  for (const auto& v : a) {
    CHECK(v.sign() >= 0);
    CHECK(v < cap);
  }
}

TEST_CASE("gen_inputs structured values hit the boundaries") {
  auto vals = truncmul::gen_inputs(64, 12, InputKind::kStructured, 0);
  auto has = [&](const BigInt& x) {
    for (const auto& v : vals)
      if (v == x) return true;
    return false;
  };
  CHECK(has(BigInt(0)));
  CHECK(has(BigInt(1)));
  CHECK(has(BigInt::pow2(63)));
  CHECK(has(BigInt::pow2(63) + BigInt(1)));
  CHECK(has(BigInt::pow2(64) - BigInt(1)));
  CHECK(has(BigInt::pow2(32)));
}

TEST_CASE("gen_inputs adversarial chunk patterns") {
  std::int32_t b = 8;
  auto vals = truncmul::gen_inputs(128, 6, InputKind::kAdversarial, 9, b);
  for (const auto& v : vals) {
    CHECK(v < BigInt::pow2(128));
    // Every 8-bit chunk sits within 4 of the top of its range.
    for (int i = 0; i < 128 / 8; ++i) {
      BigInt chunk = (v >> (8 * i)).low_bits(8);
      CHECK(BigInt(251) <= chunk);
    }
  }
  auto sv = truncmul::gen_inputs(128, 6, InputKind::kAdversarial, 9, b, true);
  for (const auto& v : sv) {
    for (int i = 0; i < 128 / 8; ++i) {
      BigInt chunk = (v >> (8 * i)).low_bits(8);
      CHECK(BigInt(126) <= chunk);
      CHECK(chunk <= BigInt(129));
    }
  }
}

TEST_SUITE_END();
