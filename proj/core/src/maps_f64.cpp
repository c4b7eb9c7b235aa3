#include "truncmul/maps_f64.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "truncmul/errors.hpp"
#include "truncmul/maps.hpp"
#include "truncmul/series.hpp"

namespace truncmul {
namespace {

// Contributions below this are invisible next to double rounding noise at
// the pipeline's value scales, so power ladders stop there.
constexpr double kNegligible = 1e-30;

// Scans a coefficient table for synthesizable rows.  Both properties are
// checked entry-by-entry against the stored values (bit-for-bit via ==), so
// a kernel that substitutes the closed form produces the identical result.
SeriesShape detect_shape(const std::vector<std::vector<double>>& table,
                         std::int64_t N) {
  SeriesShape s;
  if (table.empty() || N < 2) return s;
  s.identity_row0 = std::all_of(table[0].begin(), table[0].end(),
                                [](double x) { return x == 1.0; });
  if (table.size() >= 2) {
    const std::vector<double>& r1 = table[1];
    const double c = r1[1];
    bool ok = r1[0] == 0.0;
    for (std::int64_t k = 1; ok && k < N; ++k) {
      ok = static_cast<double>(k) * c == r1[static_cast<std::size_t>(k)];
    }
    s.linear_row1 = ok;
    s.slope1 = c;
  }
  return s;
}

// out[j] = sum_r in[k] * table[r][k] with k = (j - r) mod N — the gather
// form of out[(k+r) mod N] += in[k] * table[r][k].  A single pass over the
// output streams every array exactly once instead of once per row, which
// matters because these kernels are memory-bound at large N.  The four-row
// shape is what parameter selection produces at scale, so it gets a branch-
// free specialization — synthesizing rows 0 and 1 when the table shape
// allows, which removes two of the four table streams; everything else
// takes the generic modulo path.
void apply_series(const std::vector<std::vector<double>>& table,
                  const SeriesShape& shape, std::int64_t N, const double* in,
                  double* out) {
  const auto R = static_cast<std::int64_t>(table.size());
  if (R == 4 && N >= 4) {
    const double* r0 = table[0].data();
    const double* r1 = table[1].data();
    const double* r2 = table[2].data();
    const double* r3 = table[3].data();
    for (std::int64_t j = 0; j < 3; ++j) {
      const std::int64_t k1 = j - 1 < 0 ? j - 1 + N : j - 1;
      const std::int64_t k2 = j - 2 < 0 ? j - 2 + N : j - 2;
      const std::int64_t k3 = j - 3 < 0 ? j - 3 + N : j - 3;
      out[j] = in[j] * r0[j] + in[k1] * r1[k1] + in[k2] * r2[k2] +
               in[k3] * r3[k3];
    }
    if (shape.identity_row0 && shape.linear_row1) {
      const double c = shape.slope1;
      for (std::int64_t j = 3; j < N; ++j) {
        out[j] = in[j] + in[j - 1] * (static_cast<double>(j - 1) * c) +
                 in[j - 2] * r2[j - 2] + in[j - 3] * r3[j - 3];
      }
    } else if (shape.identity_row0) {
      for (std::int64_t j = 3; j < N; ++j) {
        out[j] = in[j] + in[j - 1] * r1[j - 1] + in[j - 2] * r2[j - 2] +
                 in[j - 3] * r3[j - 3];
      }
    } else {
      for (std::int64_t j = 3; j < N; ++j) {
        out[j] = in[j] * r0[j] + in[j - 1] * r1[j - 1] +
                 in[j - 2] * r2[j - 2] + in[j - 3] * r3[j - 3];
      }
    }
    return;
  }
  std::vector<const double*> rows(static_cast<std::size_t>(R));
  for (std::int64_t r = 0; r < R; ++r) {
    rows[static_cast<std::size_t>(r)] = table[static_cast<std::size_t>(r)].data();
  }
  for (std::int64_t j = 0; j < N; ++j) {
    double acc = 0.0;
    for (std::int64_t r = 0; r < R; ++r) {
      std::int64_t k = (j - r) % N;
      if (k < 0) k += N;
      acc += in[k] * rows[static_cast<std::size_t>(r)][k];
    }
    out[j] = acc;
  }
}

// In-place four-row gather: every interior gather reads indices <= j, so a
// descending sweep sees only original values; the three wrapped outputs are
// computed up front because they read the top entries the sweep clobbers
// last.  Requires R == 4 and N >= 4 — callers fall back to the two-buffer
// kernel otherwise.
void apply_series_inplace4(const std::vector<std::vector<double>>& table,
                           const SeriesShape& shape, std::int64_t N,
                           double* buf) {
  const double* r0 = table[0].data();
  const double* r1 = table[1].data();
  const double* r2 = table[2].data();
  const double* r3 = table[3].data();
  const double o0 = buf[0] * r0[0] + buf[N - 1] * r1[N - 1] +
                    buf[N - 2] * r2[N - 2] + buf[N - 3] * r3[N - 3];
  const double o1 = buf[1] * r0[1] + buf[0] * r1[0] + buf[N - 1] * r2[N - 1] +
                    buf[N - 2] * r3[N - 2];
  const double o2 = buf[2] * r0[2] + buf[1] * r1[1] + buf[0] * r2[0] +
                    buf[N - 1] * r3[N - 1];
  if (shape.identity_row0 && shape.linear_row1) {
    const double c = shape.slope1;
    for (std::int64_t j = N - 1; j >= 3; --j) {
      buf[j] = buf[j] + buf[j - 1] * (static_cast<double>(j - 1) * c) +
               buf[j - 2] * r2[j - 2] + buf[j - 3] * r3[j - 3];
    }
  } else if (shape.identity_row0) {
    for (std::int64_t j = N - 1; j >= 3; --j) {
      buf[j] = buf[j] + buf[j - 1] * r1[j - 1] + buf[j - 2] * r2[j - 2] +
               buf[j - 3] * r3[j - 3];
    }
  } else {
    for (std::int64_t j = N - 1; j >= 3; --j) {
      buf[j] = buf[j] * r0[j] + buf[j - 1] * r1[j - 1] +
               buf[j - 2] * r2[j - 2] + buf[j - 3] * r3[j - 3];
    }
  }
  buf[0] = o0;
  buf[1] = o1;
  buf[2] = o2;
}

// Flat variant: buf[j] = sum over r of in[j-r] * table[r][j-r] for the r
// that keep j-r inside [0, N); buf gets all N + rows - 1 entries written.
void apply_series_flat(const std::vector<std::vector<double>>& table,
                       const SeriesShape& shape, std::int64_t N,
                       const double* in, double* buf) {
  const auto R = static_cast<std::int64_t>(table.size());
  if (R == 4 && N >= 4) {
    const double* r0 = table[0].data();
    const double* r1 = table[1].data();
    const double* r2 = table[2].data();
    const double* r3 = table[3].data();
    buf[0] = in[0] * r0[0];
    buf[1] = in[1] * r0[1] + in[0] * r1[0];
    buf[2] = in[2] * r0[2] + in[1] * r1[1] + in[0] * r2[0];
    if (shape.identity_row0 && shape.linear_row1) {
      const double c = shape.slope1;
      for (std::int64_t j = 3; j < N; ++j) {
        buf[j] = in[j] + in[j - 1] * (static_cast<double>(j - 1) * c) +
                 in[j - 2] * r2[j - 2] + in[j - 3] * r3[j - 3];
      }
    } else if (shape.identity_row0) {
      for (std::int64_t j = 3; j < N; ++j) {
        buf[j] = in[j] + in[j - 1] * r1[j - 1] + in[j - 2] * r2[j - 2] +
                 in[j - 3] * r3[j - 3];
      }
    } else {
      for (std::int64_t j = 3; j < N; ++j) {
        buf[j] = in[j] * r0[j] + in[j - 1] * r1[j - 1] +
                 in[j - 2] * r2[j - 2] + in[j - 3] * r3[j - 3];
      }
    }
    buf[N] = in[N - 1] * r1[N - 1] + in[N - 2] * r2[N - 2] +
             in[N - 3] * r3[N - 3];
    buf[N + 1] = in[N - 1] * r2[N - 1] + in[N - 2] * r3[N - 2];
    buf[N + 2] = in[N - 1] * r3[N - 1];
    return;
  }
  std::vector<const double*> rows(static_cast<std::size_t>(R));
  for (std::int64_t r = 0; r < R; ++r) {
    rows[static_cast<std::size_t>(r)] = table[static_cast<std::size_t>(r)].data();
  }
  for (std::int64_t j = 0; j < N + R - 1; ++j) {
    double acc = 0.0;
    const std::int64_t rlo = std::max<std::int64_t>(0, j - N + 1);
    const std::int64_t rhi = std::min<std::int64_t>(R - 1, j);
    for (std::int64_t r = rlo; r <= rhi; ++r) {
      acc += in[j - r] * rows[static_cast<std::size_t>(r)][j - r];
    }
    buf[j] = acc;
  }
}

}  // namespace

MapTablesF64 build_map_tables_f64(std::int64_t N, std::int32_t b,
                                  std::int64_t lambda, bool low, bool high) {
  if (N < 3 || b < 4 || lambda < 1 || (!low && !high)) {
    throw InputOutOfRange("map tables: need N >= 3, b >= 4, lambda >= 1");
  }
  MapTablesF64 t;
  t.N = N;
  t.b = b;
  t.lambda = lambda;
  t.has_low = low;
  t.has_high = high;
  if (low) {
    t.alpha = coeff_table_f64(SeriesFamily::kAlpha, lambda, N, b);
    t.beta = coeff_table_f64(SeriesFamily::kBeta, lambda, N, b);
    t.alpha_shape = detect_shape(t.alpha, N);
    t.beta_shape = detect_shape(t.beta, N);
  }
  if (high) {
    t.gamma = coeff_table_f64(SeriesFamily::kGamma, lambda, N, b);
    t.delta = coeff_table_f64(SeriesFamily::kDelta, lambda, N, b);
    t.gamma_shape = detect_shape(t.gamma, N);
    t.delta_shape = detect_shape(t.delta, N);
    const std::int64_t total_bits = N * static_cast<std::int64_t>(b);
    if (total_bits >= 64) {
      // The root is 2^b to far more than double accuracy; every derived
      // quantity is an exact power of two (or underflows harmlessly).
      t.root = std::ldexp(1.0, b);
      t.inv_root = std::ldexp(1.0, -b);
      const int neg = static_cast<int>(std::min<std::int64_t>(total_bits, 1100));
      t.root_neg_n = std::ldexp(1.0, -neg);
      t.cofactor_scaled = 1.0 - static_cast<double>(N) * t.root_neg_n;
      for (std::int64_t i = 0; i < N && i * b <= 80; ++i) {
        t.fold_row.push_back(std::ldexp(1.0, static_cast<int>(-i * b)));
      }
    } else {
      t.root = compute_aux_root(b, N, 58).to_double();
      t.inv_root = 1.0 / t.root;
      double ipow = t.inv_root;  // inv_root^(i+1)
      for (std::int64_t i = 0; i < N; ++i) {
        t.fold_row.push_back(std::ldexp(ipow, b));
        ipow *= t.inv_root;
      }
      double inv_n = 1.0;
      for (std::int64_t i = 0; i < N; ++i) inv_n *= t.inv_root;
      t.root_neg_n = inv_n;
      t.cofactor_scaled =
          1.0 - static_cast<double>(N) * std::ldexp(inv_n * t.inv_root, b);
    }
    if (!(t.cofactor_scaled > 0.0)) {
      throw Error("map tables: cofactor evaluation lost its sign");
    }
  }
  return t;
}

// Per-thread kernel workspace, reused across calls; the kernels below never
// nest, so one buffer per thread is enough.
double* map_scratch(std::size_t n) {
  thread_local std::vector<double> ws;
  if (ws.size() < n) ws.resize(n);
  return ws.data();
}

void alpha_star_f64(const MapTablesF64& t, const double* in, double* out) {
  apply_series(t.alpha, t.alpha_shape, t.N, in, out);
}

void alpha_star_inplace_f64(const MapTablesF64& t, double* buf) {
  if (t.alpha.size() == 4 && t.N >= 4) {
    apply_series_inplace4(t.alpha, t.alpha_shape, t.N, buf);
    return;
  }
  double* tmp = map_scratch(static_cast<std::size_t>(t.N));
  std::copy(buf, buf + t.N, tmp);
  apply_series(t.alpha, t.alpha_shape, t.N, tmp, buf);
}

const double* beta_star_view_f64(const MapTablesF64& t, const double* in) {
  const std::int64_t size = t.N + t.lambda - 1;
  double* buf = map_scratch(static_cast<std::size_t>(size));
  apply_series_flat(t.beta, t.beta_shape, t.N, in, buf);
  const double step = std::ldexp(1.0, -t.b);
  for (std::int64_t j = size - 1; j >= t.N; --j) {
    const double c = buf[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    buf[static_cast<std::size_t>(j - t.N)] += c;
    buf[static_cast<std::size_t>(j - t.N + 1)] -= c * step;
  }
  return buf;
}

void beta_star_f64(const MapTablesF64& t, const double* in, double* out) {
  const double* buf = beta_star_view_f64(t, in);
  std::copy(buf, buf + t.N, out);
}

void gamma_dagger_f64(const MapTablesF64& t, const double* in, double* out,
                      double* aux) {
  // Root channel: sum_i in[i] root^{i-N}, taken from the top down.
  double acc = 0.0;
  double ipow = 1.0;
  for (std::int64_t d = 0; d <= t.N; ++d) {
    acc += in[t.N - d] * ipow;
    ipow *= t.inv_root;
    if (ipow < kNegligible) break;
  }
  *aux = acc;
  // Apply the series to the first N coefficients, then add the rank-one
  // correction from folding the top coefficient down: the fold only touches
  // fold_row.size() entries, so patching the output beats copying the input.
  apply_series(t.gamma, t.gamma_shape, t.N, in, out);
  const double top = in[t.N];
  if (top != 0.0) {
    const auto R = static_cast<std::int64_t>(t.gamma.size());
    const auto L = static_cast<std::int64_t>(t.fold_row.size());
    for (std::int64_t r = 0; r < R; ++r) {
      const double* row = t.gamma[static_cast<std::size_t>(r)].data();
      for (std::int64_t k = 0; k < L; ++k) {
        const std::int64_t j = (k + r) % t.N;
        out[j] += top * t.fold_row[static_cast<std::size_t>(k)] * row[k];
      }
    }
  }
}

void gamma_dagger_inplace_f64(const MapTablesF64& t, double* buf,
                              double* aux) {
  // Root channel: sum_i buf[i] root^{i-N}, taken from the top down — before
  // the in-place transform clobbers anything.
  double acc = 0.0;
  double ipow = 1.0;
  for (std::int64_t d = 0; d <= t.N; ++d) {
    acc += buf[t.N - d] * ipow;
    ipow *= t.inv_root;
    if (ipow < kNegligible) break;
  }
  *aux = acc;
  const double top = buf[t.N];
  if (t.gamma.size() == 4 && t.N >= 4) {
    apply_series_inplace4(t.gamma, t.gamma_shape, t.N, buf);
  } else {
    double* tmp = map_scratch(static_cast<std::size_t>(t.N));
    std::copy(buf, buf + t.N, tmp);
    apply_series(t.gamma, t.gamma_shape, t.N, tmp, buf);
  }
  if (top != 0.0) {
    const auto R = static_cast<std::int64_t>(t.gamma.size());
    const auto L = static_cast<std::int64_t>(t.fold_row.size());
    for (std::int64_t r = 0; r < R; ++r) {
      const double* row = t.gamma[static_cast<std::size_t>(r)].data();
      for (std::int64_t k = 0; k < L; ++k) {
        const std::int64_t j = (k + r) % t.N;
        buf[j] += top * t.fold_row[static_cast<std::size_t>(k)] * row[k];
      }
    }
  }
}

const double* delta_dagger_view_f64(const MapTablesF64& t, const double* in,
                                    double aux) {
  const std::int64_t size = t.N + t.lambda - 1;
  double* buf =
      map_scratch(static_cast<std::size_t>(std::max(size, t.N + 1)));
  apply_series_flat(t.delta, t.delta_shape, t.N, in, buf);
  for (std::int64_t j = size - 1; j >= t.N; --j) {
    const double c = buf[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < t.fold_row.size(); ++i) {
      buf[static_cast<std::size_t>(j - t.N) + i] += c * t.fold_row[i];
    }
  }
  // Root channel residue of the folded polynomial.
  double hrho = 0.0;
  double ipow = t.inv_root;
  for (std::int64_t d = 1; d <= t.N; ++d) {
    hrho += buf[static_cast<std::size_t>(t.N - d)] * ipow;
    ipow *= t.inv_root;
    if (ipow < kNegligible) break;
  }
  const double psi = (aux - hrho * t.root_neg_n) / t.cofactor_scaled;
  const double step = std::ldexp(1.0, -t.b);
  // Final differencing runs in place, descending so each entry still reads
  // its original lower neighbour.
  buf[t.N] = psi - buf[static_cast<std::size_t>(t.N - 1)] * step;
  for (std::int64_t i = t.N - 1; i >= 1; --i) {
    buf[i] = buf[static_cast<std::size_t>(i)] -
             buf[static_cast<std::size_t>(i - 1)] * step;
  }
  for (std::size_t i = 0; i < t.fold_row.size(); ++i) {
    buf[i] -= psi * t.fold_row[i];
  }
  return buf;
}

void delta_dagger_f64(const MapTablesF64& t, const double* in, double aux,
                      double* out) {
  const double* buf = delta_dagger_view_f64(t, in, aux);
  std::copy(buf, buf + t.N + 1, out);
}

}  // namespace truncmul
