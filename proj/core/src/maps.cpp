#include "truncmul/maps.hpp"

#include <algorithm>
#include <utility>

#include "truncmul/errors.hpp"
#include "truncmul/fixed.hpp"
#include "truncmul/smooth.hpp"

namespace truncmul {

namespace {

// x^n with intermediate rounding to keep mantissas near work_bits.
DyadicRational dyadic_pow(const DyadicRational& x, std::int64_t n,
                          std::int64_t work_bits) {
  DyadicRational result(BigInt(1), 0);
  DyadicRational base = x;
  auto bits = static_cast<std::uint64_t>(n);
  auto work = static_cast<std::uint64_t>(work_bits);
  while (bits > 0) {
    if (bits & 1) result = (result * base).round_to_signif(work);
    bits >>= 1;
    if (bits) base = (base * base).round_to_signif(work);
  }
  return result;
}

}  // namespace

DyadicRational compute_aux_root(std::int32_t b, std::int64_t N,
                                std::int64_t signif_bits) {
  if (N < 3 || b < 1 || N * static_cast<std::int64_t>(b) < 12 ||
      signif_bits < 2) {
    throw InputOutOfRange("compute_aux_root: need N >= 3, b >= 1, Nb >= 12");
  }
  const std::int64_t nb = N * static_cast<std::int64_t>(b);
  // The root sits in (2^b (1 - 2^(1-Nb)), 2^b), so 2^b itself carries about
  // Nb - 1 correct leading bits.
  if (signif_bits <= nb - 4) return DyadicRational::from_pow2(b);

  const auto work = static_cast<std::uint64_t>(signif_bits + 8);
  const DyadicRational top = DyadicRational::from_pow2(b);
  const DyadicRational weight(BigInt::from_int64(N), 0);
  const DyadicRational weight1(BigInt::from_int64(N + 1), 0);
  DyadicRational x = top;
  // Newton from above: the polynomial is convex and increasing to the right
  // of the root, so the iterates decrease monotonically onto it.
  for (int iter = 0; iter < 200; ++iter) {
    DyadicRational xn1 = dyadic_pow(x, N - 1, signif_bits + 8);
    DyadicRational xn = (xn1 * x).round_to_signif(work);
    DyadicRational value = xn * (x - top) + top;
    DyadicRational slope = xn1 * (weight1 * x - weight * top);
    if (slope.is_zero()) break;
    DyadicRational step = DyadicRational::div_signif(value, slope, work);
    x = (x - step).round_to_signif(work);
    if (x > top) x = top;
    if (step.is_zero() || step.compare_abs_pow2(b - signif_bits - 6) <= 0) {
      break;
    }
  }
  return x.round_to_signif(static_cast<std::uint64_t>(signif_bits));
}

MapContext::MapContext(std::int64_t N, std::int32_t b, std::int32_t p,
                       std::int64_t lambda, MapSet maps)
    : N_(N), b_(b), p_(p), lambda_(lambda) {
  if (N < 3 || b < 4 || p < 1 || lambda < 1) {
    throw InputOutOfRange("MapContext: need N >= 3, b >= 4, p >= 1, "
                          "lambda >= 1");
  }
  q_ = static_cast<std::int64_t>(p) + kGuardBits;
  has_low_ = maps == MapSet::kLowPair || maps == MapSet::kAll;
  has_high_ = maps == MapSet::kHighPair || maps == MapSet::kAll;

  if (has_low_) {
    alpha_ = coeff_table(SeriesFamily::kAlpha, lambda_, N_, b_, q_);
    beta_ = coeff_table(SeriesFamily::kBeta, lambda_, N_, b_, q_);
  }
  if (!has_high_) return;

  gamma_ = coeff_table(SeriesFamily::kGamma, lambda_, N_, b_, q_);
  delta_ = coeff_table(SeriesFamily::kDelta, lambda_, N_, b_, q_);

  const std::int64_t root_bits = q_ + 8;
  root_ = compute_aux_root(b_, N_, root_bits);
  root_is_pow2_ = root_bits <= N_ * static_cast<std::int64_t>(b_) - 4;
  // Contributions below this scale are invisible at precision q_ even after
  // summing N of them.
  const std::int64_t drop_log2 = -(q_ + lg_ceil(N_) + 8);

  if (root_is_pow2_) {
    pos_pow_n_ = DyadicRational::from_pow2(N_ * b_);
    cofactor_at_root_ = pos_pow_n_ - DyadicRational(BigInt::from_int64(N_));
    for (std::int64_t i = 0; i < N_; ++i) {
      if (-i * b_ < drop_log2) break;
      fold_row_.push_back(DyadicRational::from_pow2(-i * b_));
    }
  } else {
    // Newton precision is only requested when Nb is close to q_, so N is
    // small here and dense ladders are cheap.
    const auto work = static_cast<std::uint64_t>(root_bits);
    DyadicRational inv =
        DyadicRational::div_signif(DyadicRational(BigInt(1)), root_, work);
    inv_root_pow_.assign(static_cast<std::size_t>(N_) + 1,
                         DyadicRational(BigInt(1)));
    for (std::int64_t j = 1; j <= N_; ++j) {
      inv_root_pow_[j] = (inv_root_pow_[j - 1] * inv).round_to_signif(work);
    }
    pos_pow_n_ = dyadic_pow(root_, N_, root_bits);
    cofactor_at_root_ =
        pos_pow_n_ -
        DyadicRational(BigInt::from_int64(N_)) * inv_root_pow_[1].mul_pow2(b_);
    for (std::int64_t i = 0; i < N_; ++i) {
      DyadicRational entry = inv_root_pow_[i + 1].mul_pow2(b_);
      if (entry.compare_abs_pow2(drop_log2) < 0) break;
      fold_row_.push_back(std::move(entry));
    }
  }
  if (!(cofactor_at_root_ > DyadicRational())) {
    throw Error("MapContext: cofactor evaluation lost positivity");
  }
}

const DyadicRational& MapContext::aux_root() const {
  if (!has_high_) {
    throw ContextMismatch("aux_root: high-product maps were not built");
  }
  return root_;
}

const DyadicRational& MapContext::cofactor_at_root() const {
  if (!has_high_) {
    throw ContextMismatch("cofactor_at_root: high-product maps not built");
  }
  return cofactor_at_root_;
}

DyadicRational MapContext::root_power(std::int64_t k) const {
  if (root_is_pow2_) return DyadicRational::from_pow2(b_ * k);
  if (k >= 0) {
    if (k == N_) return pos_pow_n_;
    return dyadic_pow(root_, k, q_ + 8);
  }
  return inv_root_pow_[static_cast<std::size_t>(-k)];
}

DyadicRational MapContext::aux_component(
    const std::vector<DyadicRational>& coeffs) const {
  // Powers root^(i-N) decay like 2^(-(N-i)b); stop once they cannot move the
  // sum at the working precision.
  const std::int64_t max_depth = (q_ + lg_ceil(N_) + 8) / b_ + 1;
  DyadicRational acc;
  for (std::int64_t i = static_cast<std::int64_t>(coeffs.size()) - 1; i >= 0;
       --i) {
    const std::int64_t depth = N_ - i;
    if (depth > max_depth) break;
    const DyadicRational& c = coeffs[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    if (root_is_pow2_) {
      acc += c.mul_pow2(-depth * b_);
    } else {
      acc += depth == 0 ? c : c * inv_root_pow_[static_cast<std::size_t>(depth)];
    }
  }
  return acc;
}

void MapContext::fold_cofactor(std::vector<DyadicRational>& buf) const {
  for (std::int64_t j = static_cast<std::int64_t>(buf.size()) - 1; j >= N_;
       --j) {
    DyadicRational c = std::move(buf[static_cast<std::size_t>(j)]);
    if (c.is_zero()) continue;
    for (std::size_t i = 0; i < fold_row_.size(); ++i) {
      buf[static_cast<std::size_t>(j) - static_cast<std::size_t>(N_) + i] +=
          c * fold_row_[i];
    }
  }
  buf.resize(static_cast<std::size_t>(N_));
}

namespace {

void require_operand(const MapContext& ctx, const FixedPolynomial& f,
                     const ModulusTag& want, const char* where) {
  if (f.tag() != want) {
    throw ContextMismatch(std::string(where) + ": operand ring " +
                          f.tag().describe() + ", context expects " +
                          want.describe());
  }
  if (f.precision() != ctx.precision()) {
    throw ContextMismatch(std::string(where) + ": operand precision " +
                          std::to_string(f.precision()) +
                          " differs from context precision " +
                          std::to_string(ctx.precision()));
  }
}

FixedPolynomial round_out(const std::vector<DyadicRational>& acc,
                          const ModulusTag& tag, std::int32_t p,
                          std::int64_t e) {
  FixedPolynomial out(tag, p, e);
  for (std::size_t i = 0; i < acc.size(); ++i) out.set_coeff(i, acc[i]);
  out.check_mantissa_range();
  return out;
}

}  // namespace

FixedPolynomial apply_alpha_star(const MapContext& ctx,
                                 const FixedPolynomial& f) {
  if (!ctx.has_low_) {
    throw ContextMismatch("apply_alpha_star: low-product maps not built");
  }
  const std::int64_t N = ctx.N_;
  require_operand(ctx, f, ModulusTag::mod_a(ctx.b_, N), "apply_alpha_star");
  std::vector<DyadicRational> acc(static_cast<std::size_t>(N));
  for (std::int64_t k = 0; k < N; ++k) {
    DyadicRational fk = f.coeff_value(static_cast<std::size_t>(k));
    if (fk.is_zero()) continue;
    for (std::int64_t r = 0; r < ctx.lambda_; ++r) {
      const DyadicRational& c =
          ctx.alpha_[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
      if (c.is_zero()) continue;
      acc[static_cast<std::size_t>((k + r) % N)] += fk * c;
    }
  }
  return round_out(acc, ModulusTag::cyclic(N), ctx.p_, f.exponent() + 1);
}

FixedPolynomial apply_beta_star(const MapContext& ctx,
                                const FixedPolynomial& f) {
  if (!ctx.has_low_) {
    throw ContextMismatch("apply_beta_star: low-product maps not built");
  }
  const std::int64_t N = ctx.N_;
  require_operand(ctx, f, ModulusTag::cyclic(N), "apply_beta_star");
  std::vector<DyadicRational> buf(
      static_cast<std::size_t>(N + ctx.lambda_ - 1));
  for (std::int64_t k = 0; k < N; ++k) {
    DyadicRational fk = f.coeff_value(static_cast<std::size_t>(k));
    if (fk.is_zero()) continue;
    for (std::int64_t r = 0; r < ctx.lambda_; ++r) {
      const DyadicRational& c =
          ctx.beta_[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
      if (c.is_zero()) continue;
      buf[static_cast<std::size_t>(k + r)] += fk * c;
    }
  }
  // Fold X^(N+m) down as X^m - 2^-b X^(m+1); descending order so re-grown
  // top coefficients are folded in turn.
  for (std::int64_t j = static_cast<std::int64_t>(buf.size()) - 1; j >= N;
       --j) {
    DyadicRational c = std::move(buf[static_cast<std::size_t>(j)]);
    if (c.is_zero()) continue;
    buf[static_cast<std::size_t>(j - N)] += c;
    buf[static_cast<std::size_t>(j - N + 1)] -= c.mul_pow2(-ctx.b_);
  }
  buf.resize(static_cast<std::size_t>(N));
  return round_out(buf, ModulusTag::mod_a(ctx.b_, N), ctx.p_,
                   f.exponent() + 1);
}

FixedPolynomial reduce_mod_c(const MapContext& ctx, const FixedPolynomial& f) {
  if (!ctx.has_high_) {
    throw ContextMismatch("reduce_mod_c: high-product maps not built");
  }
  const std::int64_t N = ctx.N_;
  require_operand(ctx, f, ModulusTag::mod_b(ctx.b_, N), "reduce_mod_c");
  std::vector<DyadicRational> acc(static_cast<std::size_t>(N));
  for (std::int64_t i = 0; i < N; ++i) {
    acc[static_cast<std::size_t>(i)] =
        f.coeff_value(static_cast<std::size_t>(i));
  }
  DyadicRational top = f.coeff_value(static_cast<std::size_t>(N));
  if (!top.is_zero()) {
    for (std::size_t i = 0; i < ctx.fold_row_.size(); ++i) {
      acc[i] += top * ctx.fold_row_[i];
    }
  }
  return round_out(acc, ModulusTag::mod_c(ctx.b_, N), ctx.p_,
                   f.exponent() + 2);
}

CyclicWithAux apply_gamma_dagger(const MapContext& ctx,
                                 const FixedPolynomial& f) {
  if (!ctx.has_high_) {
    throw ContextMismatch("apply_gamma_dagger: high-product maps not built");
  }
  const std::int64_t N = ctx.N_;
  require_operand(ctx, f, ModulusTag::mod_b(ctx.b_, N), "apply_gamma_dagger");

  std::vector<DyadicRational> vals(static_cast<std::size_t>(N) + 1);
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f.coeff_value(i);
  DyadicRational aux_acc = ctx.aux_component(vals);

  // Reduce into the cofactor ring, then apply the series columns cyclically.
  std::vector<DyadicRational> reduced(vals.begin(),
                                      vals.begin() + static_cast<std::size_t>(N));
  if (!vals.back().is_zero()) {
    for (std::size_t i = 0; i < ctx.fold_row_.size(); ++i) {
      reduced[i] += vals.back() * ctx.fold_row_[i];
    }
  }
  std::vector<DyadicRational> acc(static_cast<std::size_t>(N));
  for (std::int64_t k = 0; k < N; ++k) {
    const DyadicRational& gk = reduced[static_cast<std::size_t>(k)];
    if (gk.is_zero()) continue;
    for (std::int64_t r = 0; r < ctx.lambda_; ++r) {
      const DyadicRational& c =
          ctx.gamma_[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
      if (c.is_zero()) continue;
      acc[static_cast<std::size_t>((k + r) % N)] += gk * c;
    }
  }
  const std::int64_t e_out = f.exponent() + 2;
  CyclicWithAux out{round_out(acc, ModulusTag::cyclic(N), ctx.p_, e_out),
                    round_to_fixed(aux_acc, ctx.p_, e_out)};
  return out;
}

FixedPolynomial apply_delta_dagger(const MapContext& ctx,
                                   const FixedPolynomial& f,
                                   const FixedReal& aux) {
  if (!ctx.has_high_) {
    throw ContextMismatch("apply_delta_dagger: high-product maps not built");
  }
  const std::int64_t N = ctx.N_;
  require_operand(ctx, f, ModulusTag::cyclic(N), "apply_delta_dagger");
  if (aux.precision() != ctx.p_ || aux.exponent() != f.exponent()) {
    throw ContextMismatch(
        "apply_delta_dagger: aux channel disagrees with operand scale");
  }

  // Image of f under the series map, folded into the cofactor ring.
  std::vector<DyadicRational> h(static_cast<std::size_t>(N + ctx.lambda_ - 1));
  for (std::int64_t k = 0; k < N; ++k) {
    DyadicRational fk = f.coeff_value(static_cast<std::size_t>(k));
    if (fk.is_zero()) continue;
    for (std::int64_t r = 0; r < ctx.lambda_; ++r) {
      const DyadicRational& c =
          ctx.delta_[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
      if (c.is_zero()) continue;
      h[static_cast<std::size_t>(k + r)] += fk * c;
    }
  }
  ctx.fold_cofactor(h);

  // Cofactor multiple that matches the aux channel at the root.
  DyadicRational target = aux.value();
  target = ctx.root_is_pow2_ ? target.mul_pow2(N * ctx.b_)
                             : target * ctx.pos_pow_n_;
  DyadicRational psi = DyadicRational::div_signif(
      target - ctx.aux_component(h), ctx.cofactor_at_root_,
      static_cast<std::uint64_t>(ctx.q_ + 8));

  std::vector<DyadicRational> acc(static_cast<std::size_t>(N) + 1);
  acc[0] = h[0];
  for (std::int64_t i = 1; i < N; ++i) {
    acc[static_cast<std::size_t>(i)] =
        h[static_cast<std::size_t>(i)] -
        h[static_cast<std::size_t>(i - 1)].mul_pow2(-ctx.b_);
  }
  acc[static_cast<std::size_t>(N)] =
      psi - h[static_cast<std::size_t>(N - 1)].mul_pow2(-ctx.b_);
  for (std::size_t i = 0; i < ctx.fold_row_.size(); ++i) {
    acc[i] -= psi * ctx.fold_row_[i];
  }
  return round_out(acc, ModulusTag::mod_b(ctx.b_, N), ctx.p_,
                   f.exponent() + 2);
}

}  // namespace truncmul
