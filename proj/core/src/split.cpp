#include "truncmul/products.hpp"

#include <cstdint>
#include <vector>

#include "pipeline_f64.hpp"
#include "truncmul/errors.hpp"
#include "truncmul/smooth.hpp"

namespace truncmul {
namespace {

void check_operand(const BigInt& u, std::int64_t n) {
  if (n < 1) throw InputOutOfRange("split: bit length must be positive");
  if (u.sign() < 0 || u.bit_length() > static_cast<std::uint64_t>(n)) {
    throw InputOutOfRange("split: operand outside [0, 2^n)");
  }
}

// Reads the b-bit window starting at bit position pos from a little-endian
// limb vector; bits past the end read as zero.
BigInt window_big(const std::vector<std::uint64_t>& limbs, std::int64_t pos,
                  std::int32_t b) {
  const std::size_t first = static_cast<std::size_t>(pos >> 6);
  const unsigned sh = static_cast<unsigned>(pos & 63);
  const std::size_t count =
      static_cast<std::size_t>((b + sh + 63) / 64);
  std::vector<std::uint64_t> sub;
  sub.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    sub.push_back(first + i < limbs.size() ? limbs[first + i] : 0);
  }
  BigInt piece = BigInt::from_limbs(sub);
  return (piece >> sh).low_bits(static_cast<std::uint64_t>(b));
}

// Shared chunking core. The top chunk stays unbalanced so values up to
// count * b bits remain representable; every other chunk is pulled into
// (-2^{b-1}, 2^{b-1}] when balanced, pushing a carry upward.
std::vector<BigInt> chunk_big(const BigInt& u, std::int32_t b,
                              std::int64_t count, bool balanced) {
  const std::vector<std::uint64_t> limbs = u.to_limbs();
  std::vector<BigInt> out(static_cast<std::size_t>(count));
  const BigInt half = BigInt::pow2(static_cast<std::uint64_t>(b - 1));
  const BigInt full = BigInt::pow2(static_cast<std::uint64_t>(b));
  int carry = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    BigInt x = window_big(limbs, i * b, b);
    if (carry != 0) x = x + BigInt(1L);
    if (balanced && i + 1 < count && x > half) {
      out[static_cast<std::size_t>(i)] = x - full;
      carry = 1;
    } else {
      out[static_cast<std::size_t>(i)] = std::move(x);
      carry = 0;
    }
  }
  return out;
}

// Chunks u * 2^lead without materializing the shift: window positions below
// bit zero read as zeros.  The idx < 0 branches fire only for the first
// lead / b chunks, so the predictor retires them for free afterwards.
// OutT is int64 or double; the float pipeline stores doubles directly.
template <class OutT>
void chunk_store(const BigInt& u, std::int32_t b, std::int64_t count,
                 bool balanced, std::int64_t lead, OutT* out) {
  if (b > 62) {
    throw InputOutOfRange("split: chunk width too large for int64 chunks");
  }
  std::vector<std::uint64_t> limbs = u.to_limbs();
  // Pad so every window read below touches initialized limbs.
  limbs.resize(static_cast<std::size_t>((count * b) >> 6) + 2, 0);
  const std::uint64_t* lp = limbs.data();
  const std::uint64_t mask = (std::uint64_t{1} << b) - 1;
  const auto window = [&](std::int64_t i) -> std::uint64_t {
    const std::int64_t pos = i * b - lead;
    const std::int64_t idx = pos >> 6;  // floor division by 64
    const unsigned sh = static_cast<unsigned>(pos & 63);
    if (idx >= 0) {
      std::uint64_t w = lp[idx] >> sh;
      if (sh != 0) w |= lp[idx + 1] << (64u - sh);
      return w & mask;
    }
    if (idx == -1 && sh != 0) return (lp[0] << (64u - sh)) & mask;
    return 0;
  };
  const std::int64_t half = std::int64_t{1} << (b - 1);
  const std::int64_t body = balanced ? count - 1 : 0;
  std::int64_t carry = 0;
  std::int64_t i = 0;
  for (; i < body; ++i) {  // balanced interior: branch-free rebalance
    const std::int64_t x = static_cast<std::int64_t>(window(i)) + carry;
    const std::int64_t d = x > half ? 1 : 0;
    out[i] = static_cast<OutT>(x - (d << b));
    carry = d;
  }
  for (; i < count; ++i) {  // top chunk, or the whole run when unbalanced
    out[i] = static_cast<OutT>(static_cast<std::int64_t>(window(i)) + carry);
    carry = 0;
  }
}

std::vector<std::int64_t> chunk_i64(const BigInt& u, std::int32_t b,
                                    std::int64_t count, bool balanced,
                                    std::int64_t lead) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(count));
  chunk_store(u, b, count, balanced, lead, out.data());
  return out;
}

void check_low_shape(const Params& params) {
  if (params.b < 1 || params.N < 1) {
    throw InputOutOfRange("split: chunk width and count must be positive");
  }
  if (params.N * static_cast<std::int64_t>(params.b) < params.n) {
    throw InputOutOfRange("split: N b >= n is required");
  }
}

void check_high_shape(const Params& params) {
  if (params.b < 1 || params.N < 2) {
    throw InputOutOfRange("split: chunk width and count must be positive");
  }
  const std::int64_t cover = (params.N + 1) * static_cast<std::int64_t>(params.b);
  if (cover < params.n + lg_ceil(static_cast<std::uint64_t>(params.N)) + 2) {
    throw InputOutOfRange("split: (N+1) b >= n + lg N + 2 is required");
  }
}

}  // namespace

std::vector<BigInt> split_low(const BigInt& u, const Params& params) {
  check_low_shape(params);
  check_operand(u, params.n);
  return chunk_big(u, params.b, params.N, params.signed_split);
}

std::vector<BigInt> split_high(const BigInt& u, const Params& params) {
  check_high_shape(params);
  check_operand(u, params.n);
  const std::int64_t sigma =
      (params.N + 1) * static_cast<std::int64_t>(params.b) - params.n;
  return chunk_big(u << sigma, params.b, params.N + 1, params.signed_split);
}

std::vector<std::int64_t> split_low_i64(const BigInt& u, const Params& params) {
  check_low_shape(params);
  check_operand(u, params.n);
  return chunk_i64(u, params.b, params.N, params.signed_split, 0);
}

std::vector<std::int64_t> split_high_i64(const BigInt& u,
                                         const Params& params) {
  check_high_shape(params);
  check_operand(u, params.n);
  const std::int64_t sigma =
      (params.N + 1) * static_cast<std::int64_t>(params.b) - params.n;
  return chunk_i64(u, params.b, params.N + 1, params.signed_split, sigma);
}

namespace detail {

void split_low_f64(const BigInt& u, const Params& params, double* out,
                   std::int64_t out_len) {
  check_low_shape(params);
  check_operand(u, params.n);
  chunk_store(u, params.b, params.N, params.signed_split, 0, out);
  for (std::int64_t i = params.N; i < out_len; ++i) out[i] = 0.0;
}

void split_high_f64(const BigInt& u, const Params& params, double* out) {
  check_high_shape(params);
  check_operand(u, params.n);
  const std::int64_t sigma =
      (params.N + 1) * static_cast<std::int64_t>(params.b) - params.n;
  chunk_store(u, params.b, params.N + 1, params.signed_split, sigma, out);
}

}  // namespace detail

}  // namespace truncmul
