#pragma once

#include <cstdint>
#include <vector>

#include "truncmul/bigint.hpp"
#include "truncmul/convolution.hpp"

namespace truncmul {

// Which truncated product a parameter set drives. kOracleFallback marks sizes
// below the fallback cutoff, where the schoolbook oracle is used directly and
// the remaining parameter fields are meaningless.
enum class Mode : std::uint8_t { kFull, kLow, kHigh, kOracleFallback };

// Everything a product pipeline needs to know, kept as plain data so callers
// can override individual fields before validation.
//   n           operand bit length; inputs lie in [0, 2^n)
//   b           chunk width in bits
//   N           number of chunks (the convolution length for low/high)
//   lambda      series truncation length for the ring maps (0 for kFull)
//   p           working precision; tied to (mode, b, N) by formula
//   signed_split  balanced chunks in (-2^{b-1}, 2^{b-1}] with an unbalanced
//                 top chunk; default on for the FFT backend, off for exact
struct Params {
  std::int64_t n = 0;
  std::int32_t b = 0;
  std::int64_t N = 0;
  std::int64_t lambda = 0;
  std::int32_t p = 0;
  Mode mode = Mode::kFull;
  Backend backend = Backend::kExact;
  bool signed_split = false;
};

// Below this operand bit length select_params falls back to the oracle.
inline constexpr std::int64_t kDefaultFallbackCutoff = 4096;

// Working precision the mode requires at chunk width b and length N.
std::int32_t required_precision(Mode mode, std::int32_t b, std::int64_t N);

// Series truncation length select_params would pick: 0 for the full product,
// enough terms to push the series tail below the working precision otherwise.
std::int64_t default_lambda(Mode mode, Backend backend, std::int32_t b,
                            std::int32_t p);

// Checks the structural invariants: field ranges, the covering constraint
// (N b >= n, or (N+1) b >= n + lg N + 2 for the high mode), the precision
// formula, and 2357-smoothness of the transform length for the FFT backend.
// Throws InputOutOfRange or UnsupportedLength. The float-significand budget
// is deliberately not checked here: overridden parameter sets run at the
// caller's risk and the in-pipeline rounding tripwire polices accuracy.
void validate_params(const Params& params);

// Chooses parameters for an n-bit product. Sizes below fallback_cutoff
// (pass 0 to disable the fallback) get mode kOracleFallback. The exact
// backend picks the smallest chunk width that caps the length near 4096;
// the FFT backend picks the largest chunk width whose double-precision
// error budget holds, then the cheapest 2357-smooth length in a narrow
// window above the covering bound. Throws NoValidParams if nothing fits.
Params select_params(std::int64_t n, Mode mode, Backend backend,
                     std::int64_t fallback_cutoff = kDefaultFallbackCutoff);

// Splits u (in [0, 2^n)) into params.N chunks of params.b bits, little-endian:
// u = sum_i chunk_i 2^{i b}. With signed_split, chunks below the top are
// rebalanced into (-2^{b-1}, 2^{b-1}] and the top absorbs the carries,
// landing in [0, 2^b].
std::vector<BigInt> split_low(const BigInt& u, const Params& params);

// Top-aligned variant for the high product: splits u 2^{sigma} into
// params.N + 1 chunks, where sigma = (N+1) b - n. Requires the high-mode
// covering constraint (N+1) b >= n + lg N + 2.
std::vector<BigInt> split_high(const BigInt& u, const Params& params);

// Machine-word versions of the two splitters for the float pipeline.
// Require b <= 62 so every chunk (top included) fits an int64.
std::vector<std::int64_t> split_low_i64(const BigInt& u, const Params& params);
std::vector<std::int64_t> split_high_i64(const BigInt& u,
                                         const Params& params);

// The three products. Operands must lie in [0, 2^n). Each validates params,
// requires the matching mode, and dispatches on params.backend. Throws
// ConvolutionPrecisionFailure when a rounding tripwire or recombination
// consistency check fires (possible only with overridden parameters or
// adversarial inputs on the FFT backend).
//
// full_product  returns u v exactly.
// low_product   returns u v mod 2^n.
// high_product  returns a w with |u v - 2^n w| < 2^n and 0 <= w <= 2^n;
//               both admissible values of w may occur.
BigInt full_product(const BigInt& u, const BigInt& v, const Params& params);
BigInt low_product(const BigInt& u, const BigInt& v, const Params& params);
BigInt high_product(const BigInt& u, const BigInt& v, const Params& params);

}  // namespace truncmul
