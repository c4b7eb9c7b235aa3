#include "truncmul/oracle.hpp"

#include <algorithm>
#include <cstddef>

#include "truncmul/errors.hpp"

namespace truncmul {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::size_t kKaratsubaCutoff = 24;  // limbs

void trim(std::vector<u64>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// r = a + b
std::vector<u64> vec_add(const std::vector<u64>& a, const std::vector<u64>& b) {
  const std::vector<u64>& lo = a.size() <= b.size() ? a : b;
  const std::vector<u64>& hi = a.size() <= b.size() ? b : a;
  std::vector<u64> r(hi.size() + 1, 0);
  u64 carry = 0;
  for (std::size_t i = 0; i < hi.size(); ++i) {
    u128 cur = static_cast<u128>(hi[i]) + (i < lo.size() ? lo[i] : 0) + carry;
    r[i] = static_cast<u64>(cur);
    carry = static_cast<u64>(cur >> 64);
  }
  r[hi.size()] = carry;
  trim(r);
  return r;
}

// a -= b, requires a >= b
void vec_sub_inplace(std::vector<u64>& a, const std::vector<u64>& b) {
  u64 borrow = 0;
  for (std::size_t i = 0; i < b.size() || borrow; ++i) {
    u64 bi = i < b.size() ? b[i] : 0;
    u128 cur = static_cast<u128>(a[i]) - bi - borrow;
    a[i] = static_cast<u64>(cur);
    borrow = (cur >> 64) ? 1 : 0;
  }
  trim(a);
}

// acc += src << (64 * offset)
void add_shifted(std::vector<u64>& acc, const std::vector<u64>& src,
                 std::size_t offset) {
  if (src.empty()) return;
  if (acc.size() < offset + src.size() + 1)
    acc.resize(offset + src.size() + 1, 0);
  u64 carry = 0;
  std::size_t i = 0;
  for (; i < src.size(); ++i) {
    u128 cur = static_cast<u128>(acc[offset + i]) + src[i] + carry;
    acc[offset + i] = static_cast<u64>(cur);
    carry = static_cast<u64>(cur >> 64);
  }
  for (; carry; ++i) {
    u128 cur = static_cast<u128>(acc[offset + i]) + carry;
    acc[offset + i] = static_cast<u64>(cur);
    carry = static_cast<u64>(cur >> 64);
  }
}

std::vector<u64> school_mul(const std::vector<u64>& a,
                            const std::vector<u64>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    u64 carry = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      u128 cur = static_cast<u128>(a[i]) * b[j] + r[i + j] + carry;
      r[i + j] = static_cast<u64>(cur);
      carry = static_cast<u64>(cur >> 64);
    }
    std::size_t k = i + b.size();
    while (carry) {
      u128 cur = static_cast<u128>(r[k]) + carry;
      r[k] = static_cast<u64>(cur);
      carry = static_cast<u64>(cur >> 64);
      ++k;
    }
  }
  trim(r);
  return r;
}

std::vector<u64> kara_mul(const std::vector<u64>& a,
                          const std::vector<u64>& b) {
  if (a.size() < kKaratsubaCutoff || b.size() < kKaratsubaCutoff)
    return school_mul(a, b);
  std::size_t h = std::max(a.size(), b.size()) / 2;
  auto split = [h](const std::vector<u64>& v, std::vector<u64>& lo,
                   std::vector<u64>& hi) {
    std::size_t cut = std::min(h, v.size());
    lo.assign(v.begin(), v.begin() + cut);
    hi.assign(v.begin() + cut, v.end());
    trim(lo);
    trim(hi);
  };
  std::vector<u64> a0, a1, b0, b1;
  split(a, a0, a1);
  split(b, b0, b1);
  std::vector<u64> z0 = kara_mul(a0, b0);
  std::vector<u64> z2 = kara_mul(a1, b1);
  std::vector<u64> z1 = kara_mul(vec_add(a0, a1), vec_add(b0, b1));
  vec_sub_inplace(z1, z0);
  vec_sub_inplace(z1, z2);
  std::vector<u64> r;
  add_shifted(r, z0, 0);
  add_shifted(r, z1, h);
  add_shifted(r, z2, 2 * h);
  trim(r);
  return r;
}

}  // namespace

BigInt limb_mul(const BigInt& a, const BigInt& b) {
  if (a.is_zero() || b.is_zero()) return BigInt();
  std::vector<u64> limbs = kara_mul(a.to_limbs(), b.to_limbs());
  BigInt r = BigInt::from_limbs(limbs);
  if (a.sign() * b.sign() < 0) r = -r;
  return r;
}

BigInt oracle_full(const BigInt& u, const BigInt& v) { return limb_mul(u, v); }

BigInt oracle_low(const BigInt& u, const BigInt& v, std::uint64_t n) {
  return limb_mul(u, v).low_bits(n);
}

std::vector<BigInt> oracle_high_set(const BigInt& u, const BigInt& v,
                                    std::uint64_t n) {
  BigInt p = limb_mul(u, v);
  BigInt q = p >> n;
  BigInt r = p.low_bits(n);
  std::vector<BigInt> out;
  BigInt cap = BigInt::pow2(n);
  if (q.sign() >= 0 && q <= cap) out.push_back(q);
  if (!r.is_zero()) {
    BigInt q1 = q + BigInt(1);
    if (q1 <= cap) out.push_back(q1);
  }
  return out;
}

bool is_valid_high(const BigInt& u, const BigInt& v, std::uint64_t n,
                   const BigInt& w) {
  if (w.sign() < 0 || BigInt::pow2(n) < w) return false;
  BigInt resid = limb_mul(u, v) - (w << n);
  return resid.compare_abs(BigInt::pow2(n)) < 0;
}

std::int64_t IntPolynomial::degree() const {
  for (std::size_t i = coeffs.size(); i-- > 0;)
    if (!coeffs[i].is_zero()) return static_cast<std::int64_t>(i);
  return -1;
}

BigInt IntPolynomial::eval_pow2(std::int32_t b) const {
  BigInt acc;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = (acc << b) + coeffs[i];
  }
  return acc;
}

IntPolynomial poly_mul_exact(const IntPolynomial& f, const IntPolynomial& g) {
  if (f.coeffs.empty() || g.coeffs.empty()) return IntPolynomial();
  IntPolynomial r(f.coeffs.size() + g.coeffs.size() - 1);
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    if (f.coeffs[i].is_zero()) continue;
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
      if (g.coeffs[j].is_zero()) continue;
      r.coeffs[i + j] += limb_mul(f.coeffs[i], g.coeffs[j]);
    }
  }
  return r;
}

IntPolynomial reduce_mod_A_scaled(const IntPolynomial& w, std::int64_t N,
                                  std::int32_t b) {
  if (w.degree() > 2 * N - 2)
    throw DegreeTooLarge("reduce_mod_A_scaled: degree exceeds 2N-2");
  auto at = [&](std::int64_t i) -> BigInt {
    if (i < 0 || i >= static_cast<std::int64_t>(w.coeffs.size()))
      return BigInt();
    return w.coeffs[static_cast<std::size_t>(i)];
  };
  // Folding X^(N+j) -> X^j - 2^(-b) X^(j+1) touches each source coefficient
  // exactly once, so in the 2^b-scaled view every entry is an integer:
  //   2^b*L[j] = 2^b*(W[j] + W[j+N]) - W[j+N-1]  (last term only for j >= 1).
  IntPolynomial out(static_cast<std::size_t>(N));
  for (std::int64_t j = 0; j < N; ++j) {
    BigInt c = (at(j) + at(j + N)) << b;
    if (j >= 1) c -= at(j + N - 1);
    out.coeffs[static_cast<std::size_t>(j)] = std::move(c);
  }
  return out;
}

IntPolynomial reduce_mod_B_scaled(const IntPolynomial& w, std::int64_t N,
                                  std::int32_t b) {
  if (w.degree() > 2 * N)
    throw DegreeTooLarge("reduce_mod_B_scaled: degree exceeds 2N");
  // G = (2^b - X) * W, then fold X^(N+1) -> 2^b X^N - 2^b top-down; both the
  // premultiplication and the folding stay integral.
  std::size_t glen = static_cast<std::size_t>(2 * N + 2);
  std::vector<BigInt> g(glen);
  for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
    g[i] += w.coeffs[i] << b;
    g[i + 1] -= w.coeffs[i];
  }
  for (std::size_t m = glen; m-- > static_cast<std::size_t>(N + 1);) {
    if (g[m].is_zero()) continue;
    BigInt c = std::move(g[m]);
    g[m] = BigInt();
    g[m - 1] += c << b;
    g[m - static_cast<std::size_t>(N) - 1] -= c << b;
  }
  IntPolynomial out(static_cast<std::size_t>(N + 1));
  for (std::size_t i = 0; i <= static_cast<std::size_t>(N); ++i)
    out.coeffs[i] = std::move(g[i]);
  return out;
}

}  // namespace truncmul
