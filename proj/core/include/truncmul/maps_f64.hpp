#pragma once

#include <cstdint>
#include <vector>

namespace truncmul {

// Double-precision mirror of the ring-change maps, for the float pipeline.
// Coefficients travel as plain doubles at value scale (no shared exponent);
// the tables match their exact counterparts to one double rounding. Two
// regimes for the auxiliary root: when N b is large the root is 2^b to
// working accuracy and every derived quantity is an exact power of two;
// for small N b the root is computed once and powered directly.
// Structure detected in a coefficient table at build time, letting the map
// kernels synthesize the cheap rows instead of streaming them from memory:
// row 0 is often identically one and row 1 exactly k * slope1. Both flags are
// verified entry-by-entry against the built table, so the kernels stay exact.
struct SeriesShape {
  bool identity_row0 = false;
  bool linear_row1 = false;
  double slope1 = 0.0;
};

struct MapTablesF64 {
  std::int64_t N = 0;
  std::int32_t b = 0;
  std::int64_t lambda = 0;
  bool has_low = false;
  bool has_high = false;
  // Row r holds the N per-residue coefficients of series term r.
  std::vector<std::vector<double>> alpha, beta, gamma, delta;
  SeriesShape alpha_shape, beta_shape, gamma_shape, delta_shape;
  double root = 0.0;             // auxiliary root of the high-mode modulus
  double inv_root = 0.0;         // 1 / root
  double root_neg_n = 0.0;       // root^-N (underflows to 0 when N b is huge)
  double cofactor_scaled = 1.0;  // C(root) / root^N, in (0, 1]
  std::vector<double> fold_row;  // 2^b / root^(i+1), truncated where negligible
};

// low/high select which table pairs are built (alpha/beta vs gamma/delta).
MapTablesF64 build_map_tables_f64(std::int64_t N, std::int32_t b,
                                  std::int64_t lambda, bool low, bool high);

// in and out hold N coefficients and may not alias.
void alpha_star_f64(const MapTablesF64& t, const double* in, double* out);
void beta_star_f64(const MapTablesF64& t, const double* in, double* out);
// Zero-copy variant: the N result coefficients land in thread-local scratch
// owned by the map layer, valid until the calling thread runs another
// beta/delta kernel.
const double* beta_star_view_f64(const MapTablesF64& t, const double* in);
// In-place variant: buf's N coefficients are replaced by the map image.
void alpha_star_inplace_f64(const MapTablesF64& t, double* buf);
// in holds N+1 coefficients, out N; *aux receives the root-channel value.
void gamma_dagger_f64(const MapTablesF64& t, const double* in, double* out,
                      double* aux);
// In-place variant: buf holds N+1 coefficients on entry; the first N are
// replaced by the map image and buf[N] is consumed.
void gamma_dagger_inplace_f64(const MapTablesF64& t, double* buf,
                              double* aux);
// in holds N coefficients, out N+1; aux is the product of the operands'
// root-channel values.
void delta_dagger_f64(const MapTablesF64& t, const double* in, double aux,
                      double* out);
// Zero-copy variant: the N+1 result coefficients land in the same
// thread-local scratch as beta_star_view_f64.
const double* delta_dagger_view_f64(const MapTablesF64& t, const double* in,
                                    double aux);

}  // namespace truncmul
