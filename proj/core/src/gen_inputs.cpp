#include <random>

#include "truncmul/errors.hpp"
#include "truncmul/oracle.hpp"

namespace truncmul {

namespace {

BigInt random_value(std::mt19937_64& rng, std::uint64_t n) {
  std::vector<std::uint64_t> limbs((n + 63) / 64);
  for (auto& l : limbs) l = rng();
  return BigInt::from_limbs(limbs).low_bits(n);
}

BigInt alternating_bits(std::uint64_t n, bool start_set) {
  std::vector<std::uint64_t> limbs((n + 63) / 64,
                                   start_set ? 0x5555555555555555ULL
                                             : 0xaaaaaaaaaaaaaaaaULL);
  return BigInt::from_limbs(limbs).low_bits(n);
}

std::vector<BigInt> structured_values(std::uint64_t n) {
  std::vector<BigInt> vals;
  auto push = [&](BigInt v) {
    v = v.low_bits(n);
    for (const BigInt& seen : vals)
      if (seen == v) return;
    vals.push_back(std::move(v));
  };
  push(BigInt(0));
  push(BigInt(1));
  push(BigInt(2));
  push(BigInt(3));
  push(BigInt::pow2(n / 2));
  if (n >= 1) {
    push(BigInt::pow2(n - 1));
    push(BigInt::pow2(n - 1) + BigInt(1));
    push(BigInt::pow2(n - 1) - BigInt(1));
  }
  push(BigInt::pow2(n) - BigInt(1));
  push(BigInt::pow2(n) - BigInt(2));
  push(alternating_bits(n, true));
  push(alternating_bits(n, false));
  return vals;
}

// Every chunk pushed toward its extreme so that convolution coefficients hit
// their worst-case magnitudes: near 2^b - 1 in the unsigned model, near the
// balancing boundary 2^(b-1) in the signed model.
BigInt adversarial_value(std::mt19937_64& rng, std::uint64_t n, std::int32_t b,
                         bool signed_mode) {
  std::uint64_t chunks = (n + static_cast<std::uint64_t>(b) - 1) /
                         static_cast<std::uint64_t>(b);
  BigInt v;
  for (std::uint64_t i = chunks; i-- > 0;) {
    std::uint64_t eta = rng() % 4;
    std::int64_t chunk;
    if (signed_mode) {
      chunk = (1LL << (b - 1)) - 2 + static_cast<std::int64_t>(eta);
    } else {
      chunk = (1LL << b) - 1 - static_cast<std::int64_t>(eta);
    }
    if (chunk < 0) chunk = 0;
    v = (v << b) + BigInt::from_int64(chunk);
  }
  return v.low_bits(n);
}

}  // namespace

std::vector<BigInt> gen_inputs(std::uint64_t n, std::size_t count,
                               InputKind kind, std::uint64_t seed,
                               std::int32_t chunk_bits, bool signed_mode) {
  if (n == 0) throw InputOutOfRange("gen_inputs: n must be positive");
  std::mt19937_64 rng(seed);
  std::vector<BigInt> out;
  out.reserve(count);
  switch (kind) {
    case InputKind::kUniform:
      for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_value(rng, n));
      break;
    case InputKind::kAdversarial: {
      std::int32_t b = chunk_bits > 0 ? chunk_bits : 8;
      for (std::size_t i = 0; i < count; ++i)
        out.push_back(adversarial_value(rng, n, b, signed_mode));
      break;
    }
    case InputKind::kStructured: {
      std::vector<BigInt> vals = structured_values(n);
      for (std::size_t i = 0; i < count; ++i)
        out.push_back(vals[i % vals.size()]);
      break;
    }
  }
  return out;
}

}  // namespace truncmul
