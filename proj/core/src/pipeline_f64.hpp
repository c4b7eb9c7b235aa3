#pragma once

#include <cstdint>
#include <memory>

#include "truncmul/bigint.hpp"
#include "truncmul/convolution.hpp"
#include "truncmul/maps_f64.hpp"
#include "truncmul/products.hpp"

namespace truncmul::detail {

// Process-wide caches shared by the exact and float pipelines; read-mostly,
// guarded by a shared mutex inside.
std::shared_ptr<const ConvolutionPlan> shared_plan(std::int64_t length,
                                                   std::int32_t p,
                                                   Backend backend);
std::shared_ptr<const MapTablesF64> shared_tables_f64(std::int64_t N,
                                                      std::int32_t b,
                                                      std::int64_t lambda,
                                                      bool low, bool high);

// Transform precision used to key FFT plans for the float pipeline, which
// carries raw doubles rather than fixed-point coefficients.
inline constexpr std::int32_t kF64PlanPrecision = 40;

// Split-to-double fast paths for the float pipeline: identical chunk values
// to split_low_i64 / split_high_i64, stored straight into a caller buffer.
// split_low_f64 writes params.N chunks and zero-fills out to out_len;
// split_high_f64 writes exactly params.N + 1 chunks.
void split_low_f64(const BigInt& u, const Params& params, double* out,
                   std::int64_t out_len);
void split_high_f64(const BigInt& u, const Params& params, double* out);

BigInt full_product_f64(const BigInt& u, const BigInt& v, const Params& params);
BigInt low_product_f64(const BigInt& u, const BigInt& v, const Params& params);
BigInt high_product_f64(const BigInt& u, const BigInt& v, const Params& params);

}  // namespace truncmul::detail
