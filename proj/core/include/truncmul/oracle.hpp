#pragma once

#include <cstdint>
#include <vector>

#include "truncmul/bigint.hpp"

namespace truncmul {

// Reference implementations used to cross-check the main pipelines.  The
// multiplication here is hand-rolled on 64-bit limbs precisely so that it
// shares no code path with the library's own arithmetic: when the two agree,
// each vouches for the other.

// Product computed by schoolbook/Karatsuba limb multiplication.  Never calls
// into the multiplication routines of the underlying bignum backend.
BigInt limb_mul(const BigInt& a, const BigInt& b);

// Full product u*v.
BigInt oracle_full(const BigInt& u, const BigInt& v);

// Low product: (u*v) mod 2^n.
BigInt oracle_low(const BigInt& u, const BigInt& v, std::uint64_t n);

// Every w with |u*v - 2^n*w| < 2^n and 0 <= w <= 2^n, ascending.  For
// u, v in [0, 2^n) this is {floor(uv/2^n)} or {floor, floor+1}.
std::vector<BigInt> oracle_high_set(const BigInt& u, const BigInt& v,
                                    std::uint64_t n);

// True iff w is an acceptable high product for (u, v, n).
bool is_valid_high(const BigInt& u, const BigInt& v, std::uint64_t n,
                   const BigInt& w);

// Dense integer polynomial, coefficient i belongs to X^i.
struct IntPolynomial {
  std::vector<BigInt> coeffs;

  IntPolynomial() = default;
  explicit IntPolynomial(std::size_t size) : coeffs(size) {}

  std::int64_t degree() const;  // -1 for the zero polynomial
  // Sum of coeffs[i] * 2^(i*b); shift-and-add only.
  BigInt eval_pow2(std::int32_t b) const;
};

// Exact product, coefficient products via limb_mul.
IntPolynomial poly_mul_exact(const IntPolynomial& f, const IntPolynomial& g);

// 2^b * (W mod (X^N + 2^(-b)X - 1)), which is integral because every
// coefficient of W is folded down at most once.  Requires deg W <= 2N-2.
// Result has N coefficients.
IntPolynomial reduce_mod_A_scaled(const IntPolynomial& w, std::int64_t N,
                                  std::int32_t b);

// 2^b * ((1 - 2^(-b)X) * W mod (X^(N+1) - 2^b X^N + 2^b)); the scaled
// computation stays in Z[X] throughout.  Requires deg W <= 2N.  Result has
// N+1 coefficients.
IntPolynomial reduce_mod_B_scaled(const IntPolynomial& w, std::int64_t N,
                                  std::int32_t b);

// Test operand generator.  All kinds are deterministic in (n, count, kind,
// seed, chunk_bits, signed_mode).
enum class InputKind {
  kUniform,      // uniform in [0, 2^n)
  kAdversarial,  // chunk patterns that maximise convolution magnitudes
  kStructured,   // boundary values: 0, 1, powers of two, all-ones, ...
};

// Returns `count` values in [0, 2^n).  For kAdversarial the values are built
// from b-bit chunks (b = chunk_bits, defaulting to 8 when 0) chosen near the
// top of the chunk range, or near the balanced-split boundary 2^(b-1) when
// signed_mode is set.  For kStructured the fixed boundary list is cycled.
std::vector<BigInt> gen_inputs(std::uint64_t n, std::size_t count,
                               InputKind kind, std::uint64_t seed,
                               std::int32_t chunk_bits = 0,
                               bool signed_mode = false);

}  // namespace truncmul
