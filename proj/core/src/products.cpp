#include "truncmul/products.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "pipeline_f64.hpp"
#include "truncmul/errors.hpp"
#include "truncmul/fixed.hpp"
#include "truncmul/fixed_poly.hpp"
#include "truncmul/maps.hpp"
#include "truncmul/smooth.hpp"

namespace truncmul {
namespace {

struct Caches {
  std::shared_mutex mu;
  std::map<std::tuple<std::int64_t, std::int32_t, std::int32_t, std::int64_t,
                      int>,
           std::shared_ptr<const MapContext>>
      contexts;
  std::map<std::tuple<std::int64_t, std::int32_t, int>,
           std::shared_ptr<const ConvolutionPlan>>
      plans;
  std::map<std::tuple<std::int64_t, std::int32_t, std::int64_t, int>,
           std::shared_ptr<const MapTablesF64>>
      tables;
};

Caches& caches() {
  static Caches c;
  return c;
}

// Shared-lock lookup; on a miss the value is built outside the lock (a
// racing builder's duplicate is discarded by emplace).
template <class Map, class Key, class Maker>
typename Map::mapped_type cache_get(Map& map, const Key& key, Maker make) {
  {
    std::shared_lock<std::shared_mutex> lock(caches().mu);
    auto it = map.find(key);
    if (it != map.end()) return it->second;
  }
  typename Map::mapped_type value = make();
  std::unique_lock<std::shared_mutex> lock(caches().mu);
  return map.emplace(key, std::move(value)).first->second;
}

std::shared_ptr<const MapContext> shared_context(std::int64_t N, std::int32_t b,
                                                 std::int32_t p,
                                                 std::int64_t lambda,
                                                 MapSet set) {
  return cache_get(
      caches().contexts, std::make_tuple(N, b, p, lambda, static_cast<int>(set)),
      [&] { return std::make_shared<const MapContext>(N, b, p, lambda, set); });
}

// Lifts integer chunks onto the tag's coefficient grid at exponent b.
FixedPolynomial chunks_to_poly(const std::vector<BigInt>& chunks,
                               const ModulusTag& tag, std::int32_t p,
                               std::int32_t b) {
  FixedPolynomial f(tag, p, b);
  const std::uint64_t up = static_cast<std::uint64_t>(p - b);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    f.mant(i) = chunks[i] << up;
  }
  f.check_mantissa_range();
  return f;
}

// c_i = nearest integer to mant_i / 2^k (ties to even), with the pipeline
// tripwire: a mantissa farther than a quarter of the grid from its rounding
// means the accumulated error left its provable envelope.
std::vector<BigInt> round_mantissas(const FixedPolynomial& f, std::int64_t k) {
  std::vector<BigInt> out(f.size());
  const BigInt grid = BigInt::pow2(static_cast<std::uint64_t>(k));
  for (std::size_t i = 0; i < f.size(); ++i) {
    out[i] = BigInt::round_shift_even(f.mant(i), k);
    const BigInt diff = f.mant(i) - (out[i] << static_cast<std::uint64_t>(k));
    if ((diff.abs() << 2) > grid) {
      throw ConvolutionPrecisionFailure(
          "coefficient rounding tripwire: result error exceeds a quarter ulp");
    }
  }
  return out;
}

BigInt recombine(const std::vector<BigInt>& c, std::int32_t b) {
  BigInt t;
  for (std::size_t i = c.size(); i-- > 0;) {
    t = (t << static_cast<std::uint64_t>(b)) + c[i];
  }
  return t;
}

void require_mode(const Params& params, Mode expected, const char* what) {
  validate_params(params);
  if (params.mode != expected) {
    throw InputOutOfRange(std::string(what) +
                          ": params were built for a different mode");
  }
}

}  // namespace

namespace detail {

std::shared_ptr<const ConvolutionPlan> shared_plan(std::int64_t length,
                                                   std::int32_t p,
                                                   Backend backend) {
  return cache_get(caches().plans,
                   std::make_tuple(length, p, static_cast<int>(backend)),
                   [&] { return make_plan(length, p, backend); });
}

std::shared_ptr<const MapTablesF64> shared_tables_f64(std::int64_t N,
                                                      std::int32_t b,
                                                      std::int64_t lambda,
                                                      bool low, bool high) {
  const int flags = (low ? 1 : 0) | (high ? 2 : 0);
  return cache_get(caches().tables, std::make_tuple(N, b, lambda, flags), [&] {
    return std::make_shared<const MapTablesF64>(
        build_map_tables_f64(N, b, lambda, low, high));
  });
}

}  // namespace detail

BigInt full_product(const BigInt& u, const BigInt& v, const Params& params) {
  require_mode(params, Mode::kFull, "full_product");
  if (params.backend == Backend::kFft) {
    return detail::full_product_f64(u, v, params);
  }
  const std::int64_t length = 2 * params.N;
  const ModulusTag tag = ModulusTag::cyclic(length);
  auto plan = detail::shared_plan(length, params.p, Backend::kExact);
  const FixedPolynomial fu =
      chunks_to_poly(split_low(u, params), tag, params.p, params.b);
  const FixedPolynomial fv =
      chunks_to_poly(split_low(v, params), tag, params.p, params.b);
  const FixedPolynomial w = cyclic_convolve(*plan, fu, fv);
  const std::int64_t k = params.p - w.exponent();
  const BigInt result = recombine(round_mantissas(w, k), params.b);
  if (result.sign() < 0) {
    throw ConvolutionPrecisionFailure("full product recombined negative");
  }
  return result;
}

BigInt low_product(const BigInt& u, const BigInt& v, const Params& params) {
  require_mode(params, Mode::kLow, "low_product");
  if (params.backend == Backend::kFft) {
    return detail::low_product_f64(u, v, params);
  }
  const ModulusTag tag = ModulusTag::mod_a(params.b, params.N);
  auto ctx = shared_context(params.N, params.b, params.p, params.lambda,
                            MapSet::kLowPair);
  auto plan = detail::shared_plan(params.N, params.p, Backend::kExact);
  const FixedPolynomial fu =
      chunks_to_poly(split_low(u, params), tag, params.p, params.b);
  const FixedPolynomial fv =
      chunks_to_poly(split_low(v, params), tag, params.p, params.b);
  const FixedPolynomial w = cyclic_convolve(*plan, apply_alpha_star(*ctx, fu),
                                            apply_alpha_star(*ctx, fv));
  const FixedPolynomial low = apply_beta_star(*ctx, w);
  const std::int64_t k = params.p - (low.exponent() + params.b);
  const BigInt t = recombine(round_mantissas(low, k), params.b);
  if (!t.divisible_by_pow2(static_cast<std::uint64_t>(params.b))) {
    throw ConvolutionPrecisionFailure(
        "low product recombination is not divisible by the chunk base");
  }
  return (t >> static_cast<std::uint64_t>(params.b))
      .low_bits(static_cast<std::uint64_t>(params.n));
}

BigInt high_product(const BigInt& u, const BigInt& v, const Params& params) {
  require_mode(params, Mode::kHigh, "high_product");
  if (params.backend == Backend::kFft) {
    return detail::high_product_f64(u, v, params);
  }
  const ModulusTag tag = ModulusTag::mod_b(params.b, params.N);
  auto ctx = shared_context(params.N, params.b, params.p, params.lambda,
                            MapSet::kHighPair);
  auto plan = detail::shared_plan(params.N, params.p, Backend::kExact);
  const FixedPolynomial fu =
      chunks_to_poly(split_high(u, params), tag, params.p, params.b);
  const FixedPolynomial fv =
      chunks_to_poly(split_high(v, params), tag, params.p, params.b);
  const CyclicWithAux gu = apply_gamma_dagger(*ctx, fu);
  const CyclicWithAux gv = apply_gamma_dagger(*ctx, fv);
  const FixedPolynomial w = cyclic_convolve(*plan, gu.poly, gv.poly);
  const FixedReal aux = round_to_fixed(FixedReal::mul_exact(gu.aux, gv.aux),
                                       params.p, w.exponent());
  const FixedPolynomial h = apply_delta_dagger(*ctx, w, aux);
  const std::int64_t k = params.p - (h.exponent() + params.b);
  const BigInt t = recombine(round_mantissas(h, k), params.b);
  const std::int64_t sigma =
      (params.N + 1) * static_cast<std::int64_t>(params.b) - params.n;
  const BigInt w_out =
      DyadicRational(t, 2 * static_cast<std::int64_t>(params.b) + sigma)
          .round_to_int_even();
  if (w_out.sign() < 0 ||
      w_out > BigInt::pow2(static_cast<std::uint64_t>(params.n))) {
    throw ConvolutionPrecisionFailure("high product left its admissible range");
  }
  return w_out;
}

}  // namespace truncmul
