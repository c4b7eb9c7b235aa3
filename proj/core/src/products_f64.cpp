#include "pipeline_f64.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "truncmul/errors.hpp"

namespace truncmul::detail {
namespace {

// Rounds a convolution output to the nearest integer, policing the two ways
// double precision can fail: a coefficient too large to hold integers
// exactly, or a residual farther than a quarter from the nearest integer.
// Either means the chosen parameters cannot certify this input pair.
std::int64_t checked_round(double x) {
  if (!(std::fabs(x) < 9007199254740992.0)) {  // 2^53; also rejects NaN
    throw ConvolutionPrecisionFailure(
        "float pipeline coefficient overflowed the exact-integer range");
  }
  const double r = std::nearbyint(x);
  if (std::fabs(x - r) > 0.25) {
    throw ConvolutionPrecisionFailure(
        "float pipeline rounding tripwire: residual above a quarter");
  }
  return static_cast<std::int64_t>(r);
}

// Accumulates signed machine-word addends at bit offsets.  Lane i is a
// signed 128-bit accumulator for bit window [64 i, 64 i + 128): an addend at
// bit_pos lands entirely in lane bit_pos / 64, so each add is one shift and
// one 128-bit add with no branches and no carry chasing.  Lanes cannot
// overflow: |c| < 2^53 and the shift is < 64, so one addend is below 2^117,
// and fewer than 64 / 4 + 2 addends share a lane at the smallest chunk base.
// A single signed carry-propagation pass in take() produces the value.
class SignedAccumulator {
 public:
  explicit SignedAccumulator(std::int64_t max_bits)
      : lanes_(static_cast<std::size_t>(max_bits / 64 + 3), 0) {}

  void add(std::int64_t c, std::int64_t bit_pos) {
    const auto idx = static_cast<std::size_t>(bit_pos >> 6);
    const unsigned sh = static_cast<unsigned>(bit_pos & 63);
    lanes_[idx] += static_cast<__int128>(c) << sh;
  }

  BigInt take() const {
    std::vector<std::uint64_t> limbs(lanes_.size() + 1);
    __int128 carry = 0;
    for (std::size_t i = 0; i < lanes_.size(); ++i) {
      const __int128 s = lanes_[i] + carry;
      limbs[i] = static_cast<std::uint64_t>(s);
      carry = s >> 64;  // arithmetic: keeps the running sign
    }
    limbs.back() = static_cast<std::uint64_t>(carry);
    if (carry >= 0) return BigInt::from_limbs(limbs);
    for (std::uint64_t& l : limbs) l = ~l;
    for (std::size_t i = 0; i < limbs.size(); ++i) {
      if (++limbs[i] != 0) break;
    }
    return -BigInt::from_limbs(limbs);
  }

 private:
  std::vector<__int128> lanes_;
};

// Rounds vals[i] * 2^scale to the nearest integer (ties to even) and adds it
// to the accumulator at bit offset i * b.  Blocks take a branch-free rounding
// pass first — valid while |x| < 2^51 and every residual stays within a
// quarter — and any block that fails the combined mask is redone through
// checked_round, which reports which tripwire fired.
void round_accumulate(const double* vals, std::int64_t count,
                      std::int32_t scale, std::int32_t b,
                      SignedAccumulator& acc) {
  constexpr double kMagic = 6755399441055744.0;  // 1.5 * 2^52
  constexpr double kSafe = 2251799813685248.0;   // 2^51
  const double factor = std::ldexp(1.0, scale);  // power of two: exact
  constexpr std::int64_t kBlock = 2048;
  double rounded[kBlock];
  for (std::int64_t base = 0; base < count; base += kBlock) {
    const std::int64_t m = std::min(kBlock, count - base);
    const double* x = vals + base;
    int ok = 1;
    for (std::int64_t i = 0; i < m; ++i) {
      const double v = x[i] * factor;
      const double r = (v + kMagic) - kMagic;
      rounded[i] = r;
      ok &= static_cast<int>(std::fabs(v) < kSafe) &
            static_cast<int>(std::fabs(v - r) <= 0.25);
    }
    if (ok) {
      for (std::int64_t i = 0; i < m; ++i) {
        acc.add(static_cast<std::int64_t>(rounded[i]), (base + i) * b);
      }
    } else {
      for (std::int64_t i = 0; i < m; ++i) {
        acc.add(checked_round(x[i] * factor), (base + i) * b);
      }
    }
  }
}

}  // namespace

BigInt full_product_f64(const BigInt& u, const BigInt& v,
                        const Params& params) {
  const std::int64_t length = 2 * params.N;
  auto plan = shared_plan(length, kF64PlanPrecision, Backend::kFft);
  CyclicF64Workspace ws = cyclic_f64_workspace(*plan);
  split_low_f64(u, params, ws.a, length);
  split_low_f64(v, params, ws.b, length);
  cyclic_convolve_f64_prepared(*plan);
  SignedAccumulator acc(length * params.b + 128);
  round_accumulate(ws.a, length, 0, params.b, acc);
  BigInt result = acc.take();
  if (result.sign() < 0) {
    throw ConvolutionPrecisionFailure("full product recombined negative");
  }
  return result;
}

BigInt low_product_f64(const BigInt& u, const BigInt& v, const Params& params) {
  const std::int64_t N = params.N;
  auto tables = shared_tables_f64(N, params.b, params.lambda, true, false);
  auto plan = shared_plan(N, kF64PlanPrecision, Backend::kFft);
  CyclicF64Workspace ws = cyclic_f64_workspace(*plan);
  split_low_f64(u, params, ws.a, N);
  alpha_star_inplace_f64(*tables, ws.a);
  split_low_f64(v, params, ws.b, N);
  alpha_star_inplace_f64(*tables, ws.b);
  cyclic_convolve_f64_prepared(*plan);
  const double* low = beta_star_view_f64(*tables, ws.a);
  SignedAccumulator acc(N * params.b + params.b + 128);
  round_accumulate(low, N, params.b, params.b, acc);
  const BigInt t = acc.take();
  if (!t.divisible_by_pow2(static_cast<std::uint64_t>(params.b))) {
    throw ConvolutionPrecisionFailure(
        "low product recombination is not divisible by the chunk base");
  }
  return (t >> static_cast<std::uint64_t>(params.b))
      .low_bits(static_cast<std::uint64_t>(params.n));
}

BigInt high_product_f64(const BigInt& u, const BigInt& v,
                        const Params& params) {
  const std::int64_t N = params.N;
  auto tables = shared_tables_f64(N, params.b, params.lambda, false, true);
  auto plan = shared_plan(N, kF64PlanPrecision, Backend::kFft);
  CyclicF64Workspace ws = cyclic_f64_workspace(*plan);
  double au = 0.0;
  double av = 0.0;
  split_high_f64(u, params, ws.a);
  gamma_dagger_inplace_f64(*tables, ws.a, &au);
  split_high_f64(v, params, ws.b);
  gamma_dagger_inplace_f64(*tables, ws.b, &av);
  cyclic_convolve_f64_prepared(*plan);
  const double* h = delta_dagger_view_f64(*tables, ws.a, au * av);
  SignedAccumulator acc((N + 1) * params.b + params.b + 128);
  round_accumulate(h, N + 1, params.b, params.b, acc);
  const BigInt t = acc.take();
  const std::int64_t sigma =
      (N + 1) * static_cast<std::int64_t>(params.b) - params.n;
  const BigInt w =
      DyadicRational(t, 2 * static_cast<std::int64_t>(params.b) + sigma)
          .round_to_int_even();
  if (w.sign() < 0 || w > BigInt::pow2(static_cast<std::uint64_t>(params.n))) {
    throw ConvolutionPrecisionFailure("high product left its admissible range");
  }
  return w;
}

}  // namespace truncmul::detail
