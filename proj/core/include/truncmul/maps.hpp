#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "truncmul/dyadic.hpp"
#include "truncmul/fixed_poly.hpp"
#include "truncmul/series.hpp"

namespace truncmul {

// The real root of X^(N+1) - 2^b X^N + 2^b just below 2^b, to signif_bits
// significant bits.  When 2^b itself is already that accurate (signif_bits <=
// Nb - 4) it is returned exactly; otherwise the root is refined by Newton
// steps from above.  Requires N >= 3, b >= 1, Nb >= 12.
DyadicRational compute_aux_root(std::int32_t b, std::int64_t N,
                                std::int64_t signif_bits);

enum class MapSet { kLowPair, kHighPair, kAll };

struct CyclicWithAux;

// Precomputed data for the change-of-ring maps at one (N, b, p, lambda):
// coefficient tables rounded near precision p + kGuardBits, the auxiliary
// root with its power ladder, and the folding rows for the degree-N cofactor
// ring.  Contexts are immutable after construction and shareable.
class MapContext {
 public:
  MapContext(std::int64_t N, std::int32_t b, std::int32_t p,
             std::int64_t lambda, MapSet maps = MapSet::kAll);

  std::int64_t length() const { return N_; }
  std::int32_t chunk_bits() const { return b_; }
  std::int32_t precision() const { return p_; }
  std::int64_t terms() const { return lambda_; }

  // Available only when the high-product maps were requested.
  const DyadicRational& aux_root() const;
  // The cofactor polynomial evaluated at the stored root (sign-positive).
  const DyadicRational& cofactor_at_root() const;

 private:
  friend FixedPolynomial apply_alpha_star(const MapContext&,
                                          const FixedPolynomial&);
  friend FixedPolynomial apply_beta_star(const MapContext&,
                                         const FixedPolynomial&);
  friend FixedPolynomial reduce_mod_c(const MapContext&,
                                      const FixedPolynomial&);
  friend CyclicWithAux apply_gamma_dagger(const MapContext&,
                                          const FixedPolynomial&);
  friend FixedPolynomial apply_delta_dagger(const MapContext&,
                                            const FixedPolynomial&,
                                            const FixedReal&);

  // Value of root^k for -N <= k <= N; exact shift when the root is a power
  // of two, else from the dense ladder (only reachable for small N).
  DyadicRational root_power(std::int64_t k) const;
  // Scalar product sum_i coeffs[i] * root^(i - N) with the negligible low
  // powers dropped.
  DyadicRational aux_component(const std::vector<DyadicRational>& coeffs) const;
  // Folds buf (length >= N) down to the cofactor ring in place.
  void fold_cofactor(std::vector<DyadicRational>& buf) const;

  std::int64_t N_;
  std::int32_t b_;
  std::int32_t p_;
  std::int64_t lambda_;
  std::int64_t q_;  // internal grid: p + guard
  bool has_low_ = false;
  bool has_high_ = false;

  std::vector<std::vector<DyadicRational>> alpha_;
  std::vector<std::vector<DyadicRational>> beta_;
  std::vector<std::vector<DyadicRational>> gamma_;
  std::vector<std::vector<DyadicRational>> delta_;

  DyadicRational root_;  // the auxiliary real root
  bool root_is_pow2_ = false;
  std::vector<DyadicRational> inv_root_pow_;  // root^-1 .. root^-N (dense)
  DyadicRational pos_pow_n_;                  // root^N (dense mode)
  DyadicRational cofactor_at_root_;           // positive, ~2^(Nb)
  // fold_row_[i] = 2^b / root^(i+1): X^N folds to sum_i fold_row_[i] X^i in
  // the cofactor ring.  Entries below the working grid are dropped, so only
  // the leading O(lambda) of them are nonzero.
  std::vector<DyadicRational> fold_row_;
};

// Low-product pair.  alpha_star maps the twisted ring into the cyclic ring,
// beta_star maps back.  Input exponent e, output exponent e + 1, and the
// result is within 2^(e+1-p) of the exact map image (coordinatewise).
FixedPolynomial apply_alpha_star(const MapContext& ctx,
                                 const FixedPolynomial& f);
FixedPolynomial apply_beta_star(const MapContext& ctx,
                                const FixedPolynomial& f);

// Image of f (in the degree-(N+1) ring) in the degree-N cofactor ring.
// Output exponent e + 2; max-norm grows by at most ~2.003.
FixedPolynomial reduce_mod_c(const MapContext& ctx, const FixedPolynomial& f);

// A cyclic-ring element together with the scalar tracking the component at
// the auxiliary real root.
struct CyclicWithAux {
  FixedPolynomial poly;
  FixedReal aux;
};

// High-product pair: gamma_dagger splits an element of the degree-(N+1) ring
// into (cyclic image, aux component); delta_dagger reassembles.  Exponents
// shift by +2 and results are within 2^(e+2-p) of exact (coordinatewise,
// with the aux channel included in the norm).
CyclicWithAux apply_gamma_dagger(const MapContext& ctx,
                                 const FixedPolynomial& f);
FixedPolynomial apply_delta_dagger(const MapContext& ctx,
                                   const FixedPolynomial& f,
                                   const FixedReal& aux);

}  // namespace truncmul
