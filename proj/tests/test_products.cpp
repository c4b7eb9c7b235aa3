#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"
#include "truncmul/errors.hpp"
#include "truncmul/oracle.hpp"
#include "truncmul/products.hpp"
#include "truncmul/smooth.hpp"

using truncmul::Backend;
using truncmul::BigInt;
using truncmul::Mode;
using truncmul::Params;

namespace {

Params manual_params(std::int64_t n, std::int32_t b, std::int64_t N, Mode mode,
                     Backend backend, bool signed_split = false) {
  Params p;
  p.n = n;
  p.b = b;
  p.N = N;
  p.mode = mode;
  p.backend = backend;
  p.signed_split = signed_split;
  p.p = truncmul::required_precision(mode, b, N);
  p.lambda = mode == Mode::kFull ? 0 : (p.p + 2 + b - 3) / (b - 2);
  return p;
}

// n for the high product on an (N, b) cell: the largest the covering
// constraint admits.
std::int64_t high_n(std::int32_t b, std::int64_t N) {
  return (N + 1) * static_cast<std::int64_t>(b) -
         truncmul::lg_ceil(static_cast<std::uint64_t>(N)) - 2;
}

BigInt reassemble(const std::vector<BigInt>& chunks, std::int32_t b) {
  BigInt acc;
  for (std::size_t i = chunks.size(); i-- > 0;) {
    acc = (acc << static_cast<std::uint64_t>(b)) + chunks[i];
  }
  return acc;
}

}  // namespace

TEST_SUITE("products") {

TEST_CASE("low split reproduces the documented example") {
  const Params p = manual_params(6, 2, 3, Mode::kFull, Backend::kExact);
  const std::vector<BigInt> chunks = split_low(BigInt(13), p);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0] == BigInt(1));
  CHECK(chunks[1] == BigInt(3));
  CHECK(chunks[2] == BigInt(0));
  const std::vector<std::int64_t> words = split_low_i64(BigInt(13), p);
  REQUIRE(words.size() == 3);
  CHECK(words[0] == 1);
  CHECK(words[1] == 3);
  CHECK(words[2] == 0);
}

TEST_CASE("high split aligns the operand to the top") {
  const Params p = manual_params(10, 4, 3, Mode::kHigh, Backend::kExact);
  const std::vector<BigInt> chunks = split_high(BigInt(1023), p);
  REQUIRE(chunks.size() == 4);
  CHECK(chunks[0] == BigInt(0));
  CHECK(chunks[1] == BigInt(12));
  CHECK(chunks[2] == BigInt(15));
  CHECK(chunks[3] == BigInt(15));
  const std::vector<std::int64_t> words = split_high_i64(BigInt(1023), p);
  REQUIRE(words.size() == 4);
  CHECK(words[1] == 12);
  CHECK(words[3] == 15);
}

TEST_CASE("splits reassemble the operand exactly") {
  std::mt19937_64 rng(0x5eedULL);
  struct Cell {
    std::int32_t b;
    std::int64_t N;
  };
  const Cell cells[] = {{4, 3}, {6, 17}, {13, 40}, {70, 9}, {251, 41}};
  for (const Cell& cell : cells) {
    for (bool balanced : {false, true}) {
      const std::int64_t n = cell.N * cell.b - 1;
      Params p = manual_params(n, cell.b, cell.N, Mode::kFull, Backend::kExact,
                               balanced);
      for (int it = 0; it < 20; ++it) {
        const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        CHECK(reassemble(split_low(u, p), cell.b) == u);
      }
      CHECK(reassemble(split_low(BigInt(0), p), cell.b) == BigInt(0));
    }
  }
  // Top-aligned variant: chunks recombine to u * 2^sigma.
  for (bool balanced : {false, true}) {
    const std::int32_t b = 6;
    const std::int64_t N = 33;
    const std::int64_t n = high_n(b, N);
    Params p = manual_params(n, b, N, Mode::kHigh, Backend::kExact, balanced);
    const std::int64_t sigma = (N + 1) * static_cast<std::int64_t>(b) - n;
    for (int it = 0; it < 20; ++it) {
      const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
      CHECK(reassemble(split_high(u, p), b) ==
            (u << static_cast<std::uint64_t>(sigma)));
    }
  }
  // A large operand exercises the windowed extraction across many limbs.
  {
    const std::int64_t n = 10000;
    Params p = manual_params(n, 16, 625, Mode::kFull, Backend::kExact, true);
    const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
    CHECK(reassemble(split_low(u, p), 16) == u);
  }
}

TEST_CASE("balanced chunks stay in their half-open window") {
  std::mt19937_64 rng(0xba1aULL);
  const std::int32_t b = 8;
  const std::int64_t N = 25;
  Params p = manual_params(N * b, b, N, Mode::kFull, Backend::kExact, true);
  const BigInt half = BigInt::pow2(b - 1);
  const BigInt full = BigInt::pow2(b);
  for (int it = 0; it < 50; ++it) {
    const BigInt u =
        testsup::random_bits(rng, static_cast<std::uint64_t>(N * b));
    const std::vector<BigInt> chunks = split_low(u, p);
    for (std::size_t i = 0; i + 1 < chunks.size(); ++i) {
      CHECK(chunks[i] > -half);
      CHECK(chunks[i] <= half);
    }
    CHECK(chunks.back() >= BigInt(0));
    CHECK(chunks.back() <= full);
  }
}

TEST_CASE("machine word splits match the reference splits") {
  std::mt19937_64 rng(0x1deaULL);
  for (std::int32_t b : {4, 14, 21, 62}) {
    const std::int64_t N = 19;
    const std::int64_t n = N * b - 2;
    for (bool balanced : {false, true}) {
      Params p =
          manual_params(n, b, N, Mode::kFull, Backend::kExact, balanced);
      for (int it = 0; it < 10; ++it) {
        const BigInt u =
            testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        const std::vector<BigInt> ref = split_low(u, p);
        const std::vector<std::int64_t> words = split_low_i64(u, p);
        REQUIRE(ref.size() == words.size());
        for (std::size_t i = 0; i < ref.size(); ++i) {
          CHECK(ref[i] == BigInt::from_int64(words[i]));
        }
      }
    }
  }
  Params wide = manual_params(300, 100, 3, Mode::kFull, Backend::kExact);
  CHECK_THROWS_AS(split_low_i64(BigInt(5), wide), truncmul::InputOutOfRange);
}

TEST_CASE("splits reject out-of-range operands") {
  Params p = manual_params(12, 4, 3, Mode::kLow, Backend::kExact);
  CHECK_THROWS_AS(split_low(BigInt(-1), p), truncmul::InputOutOfRange);
  CHECK_THROWS_AS(split_low(BigInt::pow2(12), p), truncmul::InputOutOfRange);
  CHECK_THROWS_AS(split_low(BigInt::pow2(13), p), truncmul::InputOutOfRange);
  // Covering violations surface before any chunking happens.
  Params bad = p;
  bad.n = 13;
  CHECK_THROWS_AS(split_low(BigInt(1), bad), truncmul::InputOutOfRange);
  Params high = manual_params(10, 4, 3, Mode::kHigh, Backend::kExact);
  high.n = 15;
  CHECK_THROWS_AS(split_high(BigInt(1), high), truncmul::InputOutOfRange);
}

TEST_CASE("parameter selection pins the documented million-bit rows") {
  const Params low = select_params(1000000, Mode::kLow, Backend::kFft);
  CHECK(low.b == 14);
  CHECK(low.N == 71680);
  CHECK(low.lambda == 4);
  CHECK(low.p == 65);
  CHECK(low.signed_split);
  CHECK(low.mode == Mode::kLow);

  const Params high = select_params(1000000, Mode::kHigh, Backend::kFft);
  CHECK(high.b == 14);
  CHECK(high.N == 71680);
  CHECK(high.lambda == 4);
  CHECK(high.p == 68);

  const Params full = select_params(1000000, Mode::kFull, Backend::kFft);
  CHECK(full.b == 21);
  CHECK(full.N == 49152);
  CHECK(full.lambda == 0);
  CHECK(full.p == 60);
}

TEST_CASE("parameter selection falls back below the cutoff") {
  CHECK(select_params(4095, Mode::kLow, Backend::kFft).mode ==
        Mode::kOracleFallback);
  CHECK(select_params(4096, Mode::kLow, Backend::kExact).mode == Mode::kLow);
  CHECK(select_params(99, Mode::kFull, Backend::kExact, 100).mode ==
        Mode::kOracleFallback);
  CHECK(select_params(100, Mode::kFull, Backend::kExact, 100).mode ==
        Mode::kFull);
  // Cutoff zero disables the fallback entirely.
  const Params tiny = select_params(12, Mode::kLow, Backend::kExact, 0);
  CHECK(tiny.mode == Mode::kLow);
  CHECK(tiny.b == 4);
  CHECK(tiny.N == 3);
  CHECK(tiny.p == 20);
}

TEST_CASE("selected parameters validate across a size sweep") {
  for (std::int64_t n : {4096LL, 10001LL, 65536LL, 300000LL, 2154434LL}) {
    for (Mode mode : {Mode::kFull, Mode::kLow, Mode::kHigh}) {
      for (Backend backend : {Backend::kExact, Backend::kFft}) {
        const Params p = select_params(n, mode, backend);
        CHECK(p.mode == mode);  // validate_params ran inside select_params
        if (backend == Backend::kExact) {
          CHECK(p.N <= 4100);
          CHECK_FALSE(p.signed_split);
        } else {
          CHECK(truncmul::is_2357_smooth(static_cast<std::uint64_t>(p.N)));
          CHECK(p.signed_split);
        }
      }
    }
  }
}

TEST_CASE("parameter validation rejects broken shapes") {
  const Params good = manual_params(12, 4, 3, Mode::kLow, Backend::kExact);
  truncmul::validate_params(good);

  Params p = good;
  p.p += 1;
  CHECK_THROWS_AS(truncmul::validate_params(p), truncmul::InputOutOfRange);
  p = good;
  p.b = 3;
  CHECK_THROWS_AS(truncmul::validate_params(p), truncmul::InputOutOfRange);
  p = good;
  p.N = 2;
  CHECK_THROWS_AS(truncmul::validate_params(p), truncmul::InputOutOfRange);
  p = good;
  p.n = 13;
  CHECK_THROWS_AS(truncmul::validate_params(p), truncmul::InputOutOfRange);
  p = good;
  p.lambda = 0;
  CHECK_THROWS_AS(truncmul::validate_params(p), truncmul::InputOutOfRange);

  Params high = manual_params(10, 4, 3, Mode::kHigh, Backend::kExact);
  truncmul::validate_params(high);
  high.n = 13;
  CHECK_THROWS_AS(truncmul::validate_params(high), truncmul::InputOutOfRange);

  Params fft = manual_params(44, 4, 11, Mode::kLow, Backend::kFft);
  CHECK_THROWS_AS(truncmul::validate_params(fft), truncmul::UnsupportedLength);
  fft.N = 12;
  fft.n = 44;
  fft.p = truncmul::required_precision(Mode::kLow, 4, 12);
  truncmul::validate_params(fft);

  Params fallback;
  fallback.n = 8;
  fallback.mode = Mode::kOracleFallback;
  truncmul::validate_params(fallback);
  fallback.n = 0;
  CHECK_THROWS_AS(truncmul::validate_params(fallback),
                  truncmul::InputOutOfRange);
}

TEST_CASE("product calls require a matching mode") {
  std::mt19937_64 rng(7);
  const Params low = manual_params(12, 4, 3, Mode::kLow, Backend::kExact);
  const BigInt u = testsup::random_bits(rng, 12);
  CHECK_THROWS_AS(full_product(u, u, low), truncmul::InputOutOfRange);
  CHECK_THROWS_AS(high_product(u, u, low), truncmul::InputOutOfRange);
  Params fallback;
  fallback.n = 12;
  fallback.mode = Mode::kOracleFallback;
  CHECK_THROWS_AS(low_product(u, u, fallback), truncmul::InputOutOfRange);
}

TEST_CASE("exact low products match the oracle on small grids") {
  std::mt19937_64 rng(0x10ULL);
  for (std::int32_t b : {4, 6}) {
    for (std::int64_t N : {3, 4, 8}) {
      const std::int64_t n = N * b;
      const Params p = manual_params(n, b, N, Mode::kLow, Backend::kExact);
      const BigInt top = BigInt::pow2(static_cast<std::uint64_t>(n)) - BigInt(1);
      CHECK(low_product(top, top, p) ==
            truncmul::oracle_low(top, top, static_cast<std::uint64_t>(n)));
      CHECK(low_product(BigInt(0), top, p) == BigInt(0));
      CHECK(low_product(BigInt(1), top, p) == top);
      for (int it = 0; it < 40; ++it) {
        const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        const BigInt v = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        CHECK(low_product(u, v, p) ==
              truncmul::oracle_low(u, v, static_cast<std::uint64_t>(n)));
      }
    }
  }
  // Balanced chunks must give the same answers on the exact backend too.
  const Params p =
      manual_params(24, 4, 6, Mode::kLow, Backend::kExact, true);
  for (int it = 0; it < 20; ++it) {
    const BigInt u = testsup::random_bits(rng, 24);
    const BigInt v = testsup::random_bits(rng, 24);
    CHECK(low_product(u, v, p) == truncmul::oracle_low(u, v, 24));
  }
}

TEST_CASE("exact high products land in the oracle's admissible set") {
  std::mt19937_64 rng(0x11ULL);
  for (std::int32_t b : {4, 6}) {
    for (std::int64_t N : {3, 8}) {
      const std::int64_t n = high_n(b, N);
      const Params p = manual_params(n, b, N, Mode::kHigh, Backend::kExact);
      const BigInt top = BigInt::pow2(static_cast<std::uint64_t>(n)) - BigInt(1);
      CHECK(truncmul::is_valid_high(top, top, static_cast<std::uint64_t>(n),
                                    high_product(top, top, p)));
      CHECK(truncmul::is_valid_high(BigInt(0), top, static_cast<std::uint64_t>(n),
                                    high_product(BigInt(0), top, p)));
      for (int it = 0; it < 40; ++it) {
        const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        const BigInt v = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        const BigInt w = high_product(u, v, p);
        CHECK(truncmul::is_valid_high(u, v, static_cast<std::uint64_t>(n), w));
      }
    }
  }
}

TEST_CASE("exact full products are exact") {
  std::mt19937_64 rng(0x12ULL);
  for (std::int32_t b : {1, 4, 9}) {
    for (std::int64_t N : {2, 8}) {
      const std::int64_t n = N * b;
      const Params p = manual_params(n, b, N, Mode::kFull, Backend::kExact);
      const BigInt top = BigInt::pow2(static_cast<std::uint64_t>(n)) - BigInt(1);
      CHECK(full_product(top, top, p) == truncmul::oracle_full(top, top));
      for (int it = 0; it < 30; ++it) {
        const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        const BigInt v = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
        CHECK(full_product(u, v, p) == truncmul::oracle_full(u, v));
      }
    }
  }
}

TEST_CASE("the three products agree with each other") {
  std::mt19937_64 rng(0x13ULL);
  const std::int64_t n = 36;
  const Params low = manual_params(n, 6, 6, Mode::kLow, Backend::kExact);
  const Params full = manual_params(n, 4, 9, Mode::kFull, Backend::kExact);
  for (int it = 0; it < 25; ++it) {
    const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
    const BigInt v = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
    const BigInt f = full_product(u, v, full);
    CHECK(low_product(u, v, low) ==
          f.low_bits(static_cast<std::uint64_t>(n)));
    CHECK(low_product(u, v, low) == low_product(v, u, low));
    CHECK(full_product(u, v, full) == full_product(v, u, full));
  }
}

TEST_CASE("fft products match the oracle at moderate sizes") {
  std::mt19937_64 rng(0x14ULL);
  const std::int64_t n = 8192;
  const Params low = select_params(n, Mode::kLow, Backend::kFft);
  const Params high = select_params(n, Mode::kHigh, Backend::kFft);
  const Params full = select_params(n, Mode::kFull, Backend::kFft);
  for (int it = 0; it < 10; ++it) {
    const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
    const BigInt v = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
    CHECK(low_product(u, v, low) ==
          truncmul::oracle_low(u, v, static_cast<std::uint64_t>(n)));
    CHECK(truncmul::is_valid_high(u, v, static_cast<std::uint64_t>(n),
                                  high_product(u, v, high)));
    CHECK(full_product(u, v, full) == truncmul::oracle_full(u, v));
  }
  // The all-ones operand balances to tiny chunks and still round-trips.
  const BigInt top = BigInt::pow2(static_cast<std::uint64_t>(n)) - BigInt(1);
  CHECK(low_product(top, top, low) ==
        truncmul::oracle_low(top, top, static_cast<std::uint64_t>(n)));
  CHECK(full_product(top, top, full) == truncmul::oracle_full(top, top));
}

TEST_CASE("fft products cover an odd size that needs covering slack") {
  std::mt19937_64 rng(0x15ULL);
  const std::int64_t n = 5001;
  const Params low = select_params(n, Mode::kLow, Backend::kFft);
  const Params high = select_params(n, Mode::kHigh, Backend::kFft);
  for (int it = 0; it < 6; ++it) {
    const BigInt u = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
    const BigInt v = testsup::random_bits(rng, static_cast<std::uint64_t>(n));
    CHECK(low_product(u, v, low) ==
          truncmul::oracle_low(u, v, static_cast<std::uint64_t>(n)));
    CHECK(truncmul::is_valid_high(u, v, static_cast<std::uint64_t>(n),
                                  high_product(u, v, high)));
  }
}

TEST_CASE("the float pipeline trips on parameters beyond its budget") {
  // b = 30 with unsigned chunks drives convolution coefficients far past
  // 2^53, which the rounding guard must refuse rather than return garbage.
  Params p = manual_params(3840, 30, 128, Mode::kLow, Backend::kFft, false);
  p.lambda = 4;
  const BigInt top = BigInt::pow2(3840) - BigInt(1);
  CHECK_THROWS_AS(low_product(top, top, p),
                  truncmul::ConvolutionPrecisionFailure);
}

}  // TEST_SUITE
