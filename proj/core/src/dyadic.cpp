#include "truncmul/dyadic.hpp"

#include <cmath>

namespace truncmul {

void DyadicRational::normalize() {
  if (num_.is_zero()) {
    shift_ = 0;
    return;
  }
  std::uint64_t tz = num_.trailing_zeros();
  if (tz > 0) {
    num_ = num_ >> tz;  // exact: the dropped bits are zero
    shift_ -= static_cast<std::int64_t>(tz);
  }
}

DyadicRational DyadicRational::operator+(const DyadicRational& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  // Align to the larger shift (finer grid).
  if (shift_ >= o.shift_) {
    BigInt on = o.num_ << static_cast<std::uint64_t>(shift_ - o.shift_);
    return DyadicRational(num_ + on, shift_);
  }
  BigInt tn = num_ << static_cast<std::uint64_t>(o.shift_ - shift_);
  return DyadicRational(tn + o.num_, o.shift_);
}

DyadicRational DyadicRational::operator-(const DyadicRational& o) const {
  return *this + (-o);
}

DyadicRational DyadicRational::operator*(const DyadicRational& o) const {
  return DyadicRational(num_ * o.num_, shift_ + o.shift_);
}

int DyadicRational::compare(const DyadicRational& o) const {
  int s = sign(), t = o.sign();
  if (s != t) return s < t ? -1 : 1;
  if (s == 0) return 0;
  if (shift_ >= o.shift_) {
    BigInt on = o.num_ << static_cast<std::uint64_t>(shift_ - o.shift_);
    return num_.compare(on);
  }
  BigInt tn = num_ << static_cast<std::uint64_t>(o.shift_ - shift_);
  return tn.compare(o.num_);
}

int DyadicRational::compare_abs(const DyadicRational& o) const {
  DyadicRational a = abs(), b = o.abs();
  return a.compare(b);
}

int DyadicRational::compare_abs_pow2(std::int64_t k) const {
  if (is_zero()) return -1;
  // |num| * 2^{-shift} vs 2^k: since num is odd (canonical), |x| = 2^k is
  // only possible when num = +-1; otherwise the bit length decides.
  std::int64_t value_log2_hi =
      static_cast<std::int64_t>(num_.bit_length()) - shift_;  // 2^{hi-1} <= |x| < 2^{hi}
  if (value_log2_hi - 1 > k) return 1;
  if (value_log2_hi - 1 < k) return -1;
  // 2^k <= |x| < 2^{k+1}; equality iff |x| is exactly the power of two.
  return (num_.bit_length() == 1) ? 0 : 1;
}

DyadicRational DyadicRational::round_to_signif(std::uint64_t bits) const {
  std::uint64_t len = num_.bit_length();
  if (len <= bits) return *this;
  std::int64_t drop = static_cast<std::int64_t>(len - bits);
  BigInt m = BigInt::round_shift_even(num_, drop);
  return DyadicRational(std::move(m), shift_ - drop);
}

DyadicRational DyadicRational::div_signif(const DyadicRational& a,
                                          const DyadicRational& b,
                                          std::uint64_t bits) {
  if (a.is_zero()) return DyadicRational();
  // Scale the numerator so the integer quotient carries bits+2 significant
  // bits, divide with ties-to-even, then trim back down.
  std::int64_t extra = static_cast<std::int64_t>(bits) + 2 +
                       static_cast<std::int64_t>(b.num_.bit_length()) -
                       static_cast<std::int64_t>(a.num_.bit_length());
  if (extra < 0) extra = 0;
  BigInt scaled = a.num_ << static_cast<std::uint64_t>(extra);
  BigInt q = BigInt::div_round_even(scaled, b.num_);
  DyadicRational r(std::move(q), a.shift_ - b.shift_ + extra);
  return r.round_to_signif(bits);
}

double DyadicRational::to_double() const {
  if (is_zero()) return 0.0;
  long ex = 0;
  double d = num_.to_double_2exp(&ex);
  std::int64_t e2 = static_cast<std::int64_t>(ex) - shift_;
  if (e2 > 3000) return sign() > 0 ? HUGE_VAL : -HUGE_VAL;
  if (e2 < -3000) return 0.0;
  return std::ldexp(d, static_cast<int>(e2));
}

}  // namespace truncmul
