#include "truncmul/convolution.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>

#include "truncmul/errors.hpp"
#include "truncmul/smooth.hpp"

namespace truncmul {

namespace {

// The FFTW planner is not thread-safe; every plan create/destroy and all
// wisdom traffic goes through this lock.  Executing plans is lock-free.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::string wisdom_path() {
  const char* dir = std::getenv("TRUNCMUL_PLAN_CACHE");
  if (dir == nullptr || *dir == '\0') return {};
  return std::string(dir) + "/fftw_wisdom";
}

void load_wisdom_once_locked() {
  static bool done = false;
  if (done) return;
  done = true;
  std::string path = wisdom_path();
  if (!path.empty()) fftw_import_wisdom_from_filename(path.c_str());
}

void save_wisdom_locked() {
  std::string path = wisdom_path();
  if (!path.empty()) fftw_export_wisdom_to_filename(path.c_str());
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (ptr == nullptr) throw Error("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

using i128 = __int128;
using u128 = unsigned __int128;

std::int64_t round_shift_even_i128(i128 x, std::int32_t k) {
  i128 q = x >> k;  // floor for negative x as well
  u128 r = static_cast<u128>(x - (q << k));
  u128 half = static_cast<u128>(1) << (k - 1);
  if (r > half || (r == half && (q & 1))) ++q;
  return static_cast<std::int64_t>(q);
}

}  // namespace

struct ConvolutionPlan::Impl {
  std::int64_t n = 0;
  std::int32_t p = 0;
  Backend backend = Backend::kExact;
  fftw_plan fwd = nullptr;  // r2c, length n
  fftw_plan inv = nullptr;  // c2r, length n

  ~Impl() {
    if (fwd != nullptr || inv != nullptr) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      if (fwd != nullptr) fftw_destroy_plan(fwd);
      if (inv != nullptr) fftw_destroy_plan(inv);
    }
  }
};

ConvolutionPlan::ConvolutionPlan(std::unique_ptr<Impl> impl)
    : impl_(std::move(impl)) {}

ConvolutionPlan::~ConvolutionPlan() = default;

std::int64_t ConvolutionPlan::length() const { return impl_->n; }
std::int32_t ConvolutionPlan::precision() const { return impl_->p; }
Backend ConvolutionPlan::backend() const { return impl_->backend; }

std::shared_ptr<const ConvolutionPlan> make_plan(std::int64_t n, std::int32_t p,
                                                 Backend backend) {
  if (n < 1) throw UnsupportedLength("make_plan: length must be positive");
  if (p < 1) throw PrecisionUnsupported("make_plan: precision must be >= 1");
  auto impl = std::make_unique<ConvolutionPlan::Impl>();
  impl->n = n;
  impl->p = p;
  impl->backend = backend;
  if (backend == Backend::kFft) {
    if (!is_2357_smooth(static_cast<std::uint64_t>(n)))
      throw UnsupportedLength(
          "make_plan: FFT backend needs a {2,3,5,7}-smooth length, got " +
          std::to_string(n));
    if (p > 46)
      throw PrecisionUnsupported(
          "make_plan: FFT backend supports precision <= 46, got " +
          std::to_string(p));
    std::size_t nc = static_cast<std::size_t>(n / 2 + 1);
    FftwBuffer real_buf(sizeof(double) * static_cast<std::size_t>(n));
    FftwBuffer cplx_buf(sizeof(fftw_complex) * nc);
    std::lock_guard<std::mutex> lock(planner_mutex());
    load_wisdom_once_locked();
    impl->fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n),
                                     static_cast<double*>(real_buf.ptr),
                                     static_cast<fftw_complex*>(cplx_buf.ptr),
                                     FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    impl->inv = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                     static_cast<fftw_complex*>(cplx_buf.ptr),
                                     static_cast<double*>(real_buf.ptr),
                                     FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    if (impl->fwd == nullptr || impl->inv == nullptr)
      throw UnsupportedLength("make_plan: FFTW refused length " +
                              std::to_string(n));
    save_wisdom_locked();
  }
  return std::shared_ptr<const ConvolutionPlan>(
      new ConvolutionPlan(std::move(impl)));
}

namespace {

// Transform workspace reused across calls on the same thread; allocating
// (and first-touching) multi-megabyte FFTW buffers per call costs more than
// the transforms themselves at large lengths.
struct TransformScratch {
  FftwBuffer ra_buf;
  FftwBuffer rb_buf;
  FftwBuffer ca_buf;
  FftwBuffer cb_buf;
  // The real buffers carry one spare slot past n: length-(n+1) staging is
  // exactly what the product pipelines need, and the transforms ignore it.
  explicit TransformScratch(std::size_t n)
      : ra_buf(sizeof(double) * (n + 1)),
        rb_buf(sizeof(double) * (n + 1)),
        ca_buf(sizeof(fftw_complex) * (n / 2 + 1)),
        cb_buf(sizeof(fftw_complex) * (n / 2 + 1)) {}
};

TransformScratch& thread_scratch(std::size_t n) {
  thread_local std::map<std::size_t, TransformScratch> pool;
  auto it = pool.find(n);
  if (it == pool.end()) {
    if (pool.size() >= 8) pool.clear();
    it = pool.try_emplace(n, n).first;
  }
  return it->second;
}

void require_fft(const ConvolutionPlan::Impl& impl, const char* fn) {
  if (impl.backend != Backend::kFft)
    throw PlanMismatch(std::string(fn) + ": plan is not an FFT plan");
}

}  // namespace

CyclicF64Workspace cyclic_f64_workspace(const ConvolutionPlan& plan) {
  const auto& impl = *plan.impl_;
  require_fft(impl, "cyclic_f64_workspace");
  TransformScratch& ws = thread_scratch(static_cast<std::size_t>(impl.n));
  return {static_cast<double*>(ws.ra_buf.ptr),
          static_cast<double*>(ws.rb_buf.ptr)};
}

void cyclic_convolve_f64_prepared(const ConvolutionPlan& plan) {
  const auto& impl = *plan.impl_;
  require_fft(impl, "cyclic_convolve_f64_prepared");
  const std::size_t n = static_cast<std::size_t>(impl.n);
  const std::size_t nc = n / 2 + 1;
  TransformScratch& ws = thread_scratch(n);
  auto* ra = static_cast<double*>(ws.ra_buf.ptr);
  auto* rb = static_cast<double*>(ws.rb_buf.ptr);
  auto* ca = static_cast<fftw_complex*>(ws.ca_buf.ptr);
  auto* cb = static_cast<fftw_complex*>(ws.cb_buf.ptr);
  fftw_execute_dft_r2c(impl.fwd, ra, ca);
  fftw_execute_dft_r2c(impl.fwd, rb, cb);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < nc; ++i) {
    const double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
    const double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
    ca[i][0] = re * scale;
    ca[i][1] = im * scale;
  }
  fftw_execute_dft_c2r(impl.inv, ca, ra);
}

void cyclic_convolve_f64(const ConvolutionPlan& plan, const double* f,
                         const double* g, double* out) {
  const auto& impl = *plan.impl_;
  require_fft(impl, "cyclic_convolve_f64");
  const std::size_t n = static_cast<std::size_t>(impl.n);
  CyclicF64Workspace ws = cyclic_f64_workspace(plan);
  for (std::size_t i = 0; i < n; ++i) ws.a[i] = f[i];
  for (std::size_t i = 0; i < n; ++i) ws.b[i] = g[i];
  cyclic_convolve_f64_prepared(plan);
  for (std::size_t i = 0; i < n; ++i) out[i] = ws.a[i];
}

namespace {

void check_operand(const ConvolutionPlan& plan, const FixedPolynomial& f,
                   const char* side) {
  if (f.tag().kind != ModulusTag::Kind::kCyclic ||
      f.tag().N != plan.length())
    throw PlanMismatch(std::string("cyclic_convolve: ") + side +
                       " operand is " + f.tag().describe() +
                       ", plan length " + std::to_string(plan.length()));
  if (f.precision() != plan.precision())
    throw PlanMismatch(std::string("cyclic_convolve: ") + side +
                       " operand precision " + std::to_string(f.precision()) +
                       " differs from plan precision " +
                       std::to_string(plan.precision()));
}

FixedPolynomial convolve_exact(const ConvolutionPlan& plan,
                               const FixedPolynomial& f,
                               const FixedPolynomial& g) {
  std::int64_t n = plan.length();
  std::int32_t p = plan.precision();
  std::int32_t lg = lg_ceil(static_cast<std::uint64_t>(n));
  std::int32_t shift = p + lg;
  FixedPolynomial out(f.tag(), p, f.exponent() + g.exponent() + lg);
  bool small = p <= 62 && 2 * p + lg <= 126;
  if (small) {
    std::vector<std::int64_t> fm(static_cast<std::size_t>(n));
    std::vector<std::int64_t> gm(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      fm[static_cast<std::size_t>(i)] = f.mant(i).to_int64();
      gm[static_cast<std::size_t>(i)] = g.mant(i).to_int64();
    }
    std::vector<i128> acc(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      std::int64_t fi = fm[i];
      if (fi == 0) continue;
      std::size_t wrap = static_cast<std::size_t>(n) - i;
      for (std::size_t j = 0; j < wrap; ++j)
        acc[i + j] += static_cast<i128>(fi) * gm[j];
      for (std::size_t j = wrap; j < static_cast<std::size_t>(n); ++j)
        acc[i + j - static_cast<std::size_t>(n)] += static_cast<i128>(fi) * gm[j];
    }
    for (std::int64_t k = 0; k < n; ++k)
      out.mant(k) = BigInt::from_int64(
          round_shift_even_i128(acc[static_cast<std::size_t>(k)], shift));
  } else {
    std::vector<BigInt> acc(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      const BigInt& fi = f.mant(static_cast<std::int64_t>(i));
      if (fi.is_zero()) continue;
      std::size_t wrap = static_cast<std::size_t>(n) - i;
      for (std::size_t j = 0; j < wrap; ++j)
        acc[i + j].add_product(fi, g.mant(static_cast<std::int64_t>(j)));
      for (std::size_t j = wrap; j < static_cast<std::size_t>(n); ++j)
        acc[i + j - static_cast<std::size_t>(n)].add_product(
            fi, g.mant(static_cast<std::int64_t>(j)));
    }
    for (std::int64_t k = 0; k < n; ++k)
      out.mant(k) = BigInt::round_shift_even(acc[static_cast<std::size_t>(k)],
                                             shift);
  }
  out.check_mantissa_range();
  return out;
}

FixedPolynomial convolve_fft(const ConvolutionPlan& plan,
                             const FixedPolynomial& f,
                             const FixedPolynomial& g) {
  std::int64_t n = plan.length();
  std::int32_t p = plan.precision();
  std::int32_t lg = lg_ceil(static_cast<std::uint64_t>(n));
  FixedPolynomial out(f.tag(), p, f.exponent() + g.exponent() + lg);
  std::vector<double> fa(static_cast<std::size_t>(n));
  std::vector<double> fb(static_cast<std::size_t>(n));
  std::vector<double> fo(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    fa[static_cast<std::size_t>(i)] = static_cast<double>(f.mant(i).to_int64());
    fb[static_cast<std::size_t>(i)] = static_cast<double>(g.mant(i).to_int64());
  }
  cyclic_convolve_f64(plan, fa.data(), fb.data(), fo.data());
  std::int64_t cap = std::int64_t(1) << p;
  for (std::int64_t k = 0; k < n; ++k) {
    double scaled = std::ldexp(fo[static_cast<std::size_t>(k)], -(p + lg));
    double rounded = std::nearbyint(scaled);
    auto m = static_cast<std::int64_t>(rounded);
    if (m > cap) m = cap;
    if (m < -cap) m = -cap;
    out.mant(k) = BigInt::from_int64(m);
  }
  return out;
}

}  // namespace

FixedPolynomial cyclic_convolve(const ConvolutionPlan& plan,
                                const FixedPolynomial& f,
                                const FixedPolynomial& g) {
  check_operand(plan, f, "left");
  check_operand(plan, g, "right");
  if (plan.backend() == Backend::kExact) return convolve_exact(plan, f, g);
  return convolve_fft(plan, f, g);
}

std::vector<std::complex<double>> real_dft_forward(
    const std::vector<double>& in) {
  if (in.empty()) throw UnsupportedLength("real_dft_forward: empty input");
  std::size_t n = in.size();
  std::size_t nc = n / 2 + 1;
  FftwBuffer real_buf(sizeof(double) * n);
  FftwBuffer cplx_buf(sizeof(fftw_complex) * nc);
  auto* rb = static_cast<double*>(real_buf.ptr);
  auto* cb = static_cast<fftw_complex*>(cplx_buf.ptr);
  for (std::size_t i = 0; i < n; ++i) rb[i] = in[i];
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    load_wisdom_once_locked();
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), rb, cb,
                                FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  if (plan == nullptr)
    throw UnsupportedLength("real_dft_forward: FFTW refused length " +
                            std::to_string(n));
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<std::complex<double>> out(nc);
  for (std::size_t i = 0; i < nc; ++i) out[i] = {cb[i][0], cb[i][1]};
  return out;
}

std::vector<double> real_dft_inverse(
    const std::vector<std::complex<double>>& spectrum, std::int64_t n) {
  if (n < 1 || spectrum.size() != static_cast<std::size_t>(n / 2 + 1))
    throw UnsupportedLength("real_dft_inverse: spectrum size must be n/2+1");
  std::size_t nc = spectrum.size();
  FftwBuffer real_buf(sizeof(double) * static_cast<std::size_t>(n));
  FftwBuffer cplx_buf(sizeof(fftw_complex) * nc);
  auto* rb = static_cast<double*>(real_buf.ptr);
  auto* cb = static_cast<fftw_complex*>(cplx_buf.ptr);
  for (std::size_t i = 0; i < nc; ++i) {
    cb[i][0] = spectrum[i].real();
    cb[i][1] = spectrum[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    load_wisdom_once_locked();
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), cb, rb,
                                FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  }
  if (plan == nullptr)
    throw UnsupportedLength("real_dft_inverse: FFTW refused length " +
                            std::to_string(n));
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        rb[static_cast<std::size_t>(i)] / static_cast<double>(n);
  return out;
}

}  // namespace truncmul
