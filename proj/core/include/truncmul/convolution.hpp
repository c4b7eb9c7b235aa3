#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "truncmul/fixed_poly.hpp"

namespace truncmul {

enum class Backend { kExact, kFft };

struct CyclicF64Workspace;

// A reusable cyclic-convolution plan for a single (length, precision,
// backend) triple.  Plans are immutable once built and safe to share across
// threads; building one is comparatively expensive for the FFT backend.
class ConvolutionPlan {
 public:
  ~ConvolutionPlan();
  ConvolutionPlan(const ConvolutionPlan&) = delete;
  ConvolutionPlan& operator=(const ConvolutionPlan&) = delete;

  std::int64_t length() const;
  std::int32_t precision() const;
  Backend backend() const;

  struct Impl;

 private:
  friend std::shared_ptr<const ConvolutionPlan> make_plan(std::int64_t,
                                                          std::int32_t,
                                                          Backend);
  friend FixedPolynomial cyclic_convolve(const ConvolutionPlan&,
                                         const FixedPolynomial&,
                                         const FixedPolynomial&);
  friend void cyclic_convolve_f64(const ConvolutionPlan&, const double*,
                                  const double*, double*);
  friend struct CyclicF64Workspace;
  friend CyclicF64Workspace cyclic_f64_workspace(const ConvolutionPlan&);
  friend void cyclic_convolve_f64_prepared(const ConvolutionPlan&);
  explicit ConvolutionPlan(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

// Builds a plan for cyclic length n at working precision p.
//  - kExact supports any n >= 1 and any p >= 1; quadratic work per call.
//  - kFft supports n >= 1 with no prime factor beyond 7 (UnsupportedLength
//    otherwise) and p <= 46 (PrecisionUnsupported otherwise), so that the
//    double-precision transform keeps every result within half an output ulp.
std::shared_ptr<const ConvolutionPlan> make_plan(std::int64_t n, std::int32_t p,
                                                 Backend backend);

// Cyclic convolution product.  Inputs must be cyclic polynomials of the
// plan's length and precision (PlanMismatch otherwise); exponents are free.
// The result has exponent e_f + e_g + lg_ceil(n) and satisfies
//   max_i |result_i - exact_i| < 2^(e_f + e_g + lg_ceil(n) - p),
// with a single rounding from the exact coefficient values.
FixedPolynomial cyclic_convolve(const ConvolutionPlan& plan,
                                const FixedPolynomial& f,
                                const FixedPolynomial& g);

// Raw double-precision cyclic convolution of length plan->length(); the plan
// must use the FFT backend.  out may not alias f or g.
void cyclic_convolve_f64(const ConvolutionPlan& plan, const double* f,
                         const double* g, double* out);

// Zero-copy variant: cyclic_f64_workspace hands out two aligned staging
// buffers private to the calling thread; fill them with the operands and
// call cyclic_convolve_f64_prepared, after which a holds the result and b is
// garbage.  Each buffer has n + 1 usable slots — the transform consumes the
// first n, the spare slot is staging room for callers that build their
// operands in place.  The pointers stay valid until the same thread asks for
// a workspace again (any length), so finish one convolution before starting
// the next.  FFT-backend plans only.
struct CyclicF64Workspace {
  double* a;
  double* b;
};
CyclicF64Workspace cyclic_f64_workspace(const ConvolutionPlan& plan);
void cyclic_convolve_f64_prepared(const ConvolutionPlan& plan);

// Real-input DFT helpers (mainly for direct spectral tests): forward returns
// the n/2+1 nonredundant bins; inverse expects them back and includes the
// 1/n normalisation.
std::vector<std::complex<double>> real_dft_forward(
    const std::vector<double>& in);
std::vector<double> real_dft_inverse(
    const std::vector<std::complex<double>>& spectrum, std::int64_t n);

}  // namespace truncmul
