#include "truncmul/products.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "truncmul/errors.hpp"
#include "truncmul/smooth.hpp"

namespace truncmul {
namespace {

// Double-precision significand budget for the FFT backend, in bits: the
// chunk width must satisfy 3b + log2(N)/2 <= kFloatBudget (low/high) or
// 2b + log2(2N)/2 <= kFloatBudget (full). The half-weight on the length
// reflects the cancellation signed balanced chunks give random inputs.
constexpr double kFloatBudget = 50.5;

// The exact backend caps the quadratic convolution length near this.
constexpr std::int64_t kMaxExactLength = 4096;

// Largest chunk width the selector will consider for the FFT backend.
constexpr std::int32_t kMaxFftChunk = 30;

std::int64_t min_length(Mode mode) { return mode == Mode::kFull ? 2 : 3; }
std::int32_t min_chunk(Mode mode) { return mode == Mode::kFull ? 1 : 4; }

// Smallest N meeting the covering constraint at chunk width b.
std::int64_t covering_length(Mode mode, std::int64_t n, std::int32_t b) {
  if (mode == Mode::kHigh) {
    std::int64_t N = std::max<std::int64_t>(
        min_length(mode), (n + 2) / b > 0 ? (n + 2) / b - 1 : 1);
    while ((N + 1) * b < n + lg_ceil(static_cast<std::uint64_t>(N)) + 2) ++N;
    return N;
  }
  return std::max<std::int64_t>(min_length(mode), (n + b - 1) / b);
}

std::int64_t transform_length(Mode mode, std::int64_t N) {
  return mode == Mode::kFull ? 2 * N : N;
}

double budget_used(Mode mode, std::int32_t b, std::int64_t N) {
  const double len = static_cast<double>(transform_length(mode, N));
  const double base = mode == Mode::kFull ? 2.0 * b : 3.0 * b;
  return base + 0.5 * std::log2(len);
}

// Transform cost proxy: length times a per-point radix weight.
double transform_cost(std::int64_t length) {
  std::array<std::uint32_t, 4> e;
  if (!factor_2357(static_cast<std::uint64_t>(length), e)) return 1e300;
  constexpr std::array<double, 4> kRadixWork = {1.0, 2.6, 3.4, 4.2};
  double work = 0.0;
  for (std::size_t i = 0; i < 4; ++i) work += e[i] * kRadixWork[i];
  return static_cast<double>(length) * work;
}

// Cheapest 2357-smooth length in [lo, hi] whose odd part is < 200, ranked
// by (transform cost, value). Returns -1 when the window holds none.
std::int64_t best_smooth_in(std::int64_t lo, std::int64_t hi, Mode mode) {
  std::int64_t best = -1;
  double best_cost = 0.0;
  for (std::int64_t odd = 1; odd < 200; odd += 2) {
    if (!is_2357_smooth(static_cast<std::uint64_t>(odd))) continue;
    std::int64_t c = odd;
    while (c < lo && c <= (std::int64_t{1} << 62) / 2) c <<= 1;
    if (c < lo || c > hi) continue;
    const double cost = transform_cost(transform_length(mode, c));
    if (best < 0 || cost < best_cost || (cost == best_cost && c < best)) {
      best = c;
      best_cost = cost;
    }
  }
  return best;
}

}  // namespace

std::int32_t required_precision(Mode mode, std::int32_t b, std::int64_t N) {
  if (b < 1 || N < 2) {
    throw InputOutOfRange("required_precision: chunk width or length too small");
  }
  const std::int32_t lg = lg_ceil(static_cast<std::uint64_t>(N));
  switch (mode) {
    case Mode::kFull:
      return 2 * b + lg + 2;
    case Mode::kLow:
      return 3 * b + lg + 6;
    case Mode::kHigh:
      return 3 * b + lg + 9;
    case Mode::kOracleFallback:
      break;
  }
  throw InputOutOfRange("required_precision: fallback mode has no precision");
}

std::int64_t default_lambda(Mode mode, Backend backend, std::int32_t b,
                            std::int32_t p) {
  if (mode == Mode::kFull) return 0;
  if (b < 4) {
    throw InputOutOfRange("default_lambda: truncated modes need b >= 4");
  }
  if (backend == Backend::kFft) {
    return std::max<std::int64_t>(4, (52 + b - 1) / b);
  }
  return (p + 2 + b - 3) / (b - 2);
}

void validate_params(const Params& params) {
  if (params.n < 1) {
    throw InputOutOfRange("params: n must be positive");
  }
  if (params.mode == Mode::kOracleFallback) return;
  if (params.mode == Mode::kFull) {
    if (params.b < 1 || params.N < 2) {
      throw InputOutOfRange("params: full product needs b >= 1, N >= 2");
    }
    if (params.N * static_cast<std::int64_t>(params.b) < params.n) {
      throw InputOutOfRange("params: N b >= n is required");
    }
  } else {
    if (params.b < 4 || params.N < 3) {
      throw InputOutOfRange("params: truncated modes need b >= 4, N >= 3");
    }
    if (params.lambda < 1) {
      throw InputOutOfRange("params: truncated modes need lambda >= 1");
    }
    if (params.mode == Mode::kLow) {
      if (params.N * static_cast<std::int64_t>(params.b) < params.n) {
        throw InputOutOfRange("params: N b >= n is required");
      }
    } else {
      const std::int64_t cover =
          (params.N + 1) * static_cast<std::int64_t>(params.b);
      if (cover <
          params.n + lg_ceil(static_cast<std::uint64_t>(params.N)) + 2) {
        throw InputOutOfRange("params: (N+1) b >= n + lg N + 2 is required");
      }
    }
  }
  if (params.p != required_precision(params.mode, params.b, params.N)) {
    throw InputOutOfRange("params: p must follow the mode's precision formula");
  }
  if (params.backend == Backend::kFft &&
      !is_2357_smooth(static_cast<std::uint64_t>(params.N))) {
    throw UnsupportedLength("params: FFT lengths must be 2357-smooth");
  }
}

Params select_params(std::int64_t n, Mode mode, Backend backend,
                     std::int64_t fallback_cutoff) {
  if (n < 1) throw InputOutOfRange("select_params: n must be positive");
  if (mode == Mode::kOracleFallback) {
    throw InputOutOfRange("select_params: pick a product mode, not fallback");
  }
  Params params;
  params.n = n;
  params.backend = backend;
  if (fallback_cutoff > 0 && n < fallback_cutoff) {
    params.mode = Mode::kOracleFallback;
    return params;
  }
  params.mode = mode;
  if (backend == Backend::kExact) {
    params.signed_split = false;
    params.b = std::max<std::int32_t>(
        min_chunk(mode),
        static_cast<std::int32_t>((n + kMaxExactLength - 1) / kMaxExactLength));
    params.N = covering_length(mode, n, params.b);
  } else {
    params.signed_split = true;
    std::int32_t chosen = -1;
    for (std::int32_t b = kMaxFftChunk; b >= min_chunk(mode); --b) {
      if (budget_used(mode, b, covering_length(mode, n, b)) <= kFloatBudget) {
        chosen = b;
        break;
      }
    }
    if (chosen < 0) {
      throw NoValidParams("select_params: no chunk width fits the float budget");
    }
    params.b = chosen;
    const std::int64_t lo = covering_length(mode, n, chosen);
    for (double widen : {1.15, 1.2}) {
      const std::int64_t hi = std::max(
          lo, static_cast<std::int64_t>(std::floor(widen * static_cast<double>(lo))));
      params.N = best_smooth_in(lo, hi, mode);
      if (params.N > 0) break;
    }
    if (params.N <= 0) {
      throw NoValidParams("select_params: no smooth length in the window");
    }
  }
  params.p = required_precision(mode, params.b, params.N);
  params.lambda = default_lambda(mode, backend, params.b, params.p);
  validate_params(params);
  return params;
}

}  // namespace truncmul
