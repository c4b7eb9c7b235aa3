#pragma once

#include <array>
#include <cstdint>

namespace truncmul {

// Factorisation over {2, 3, 5, 7}.  exps[i] is the exponent of the i-th prime;
// returns false (leaving exps unspecified) if a larger prime divides n.
inline bool factor_2357(std::uint64_t n, std::array<std::uint32_t, 4>& exps) {
  static constexpr std::array<std::uint64_t, 4> kPrimes = {2, 3, 5, 7};
  exps = {0, 0, 0, 0};
  if (n == 0) return false;
  for (std::size_t i = 0; i < kPrimes.size(); ++i) {
    while (n % kPrimes[i] == 0) {
      n /= kPrimes[i];
      ++exps[i];
    }
  }
  return n == 1;
}

inline bool is_2357_smooth(std::uint64_t n) {
  std::array<std::uint32_t, 4> e;
  return factor_2357(n, e);
}

inline std::uint64_t odd_part(std::uint64_t n) {
  while (n != 0 && n % 2 == 0) n /= 2;
  return n;
}

// Ceiling of log2; lg_ceil(1) = 0.  n must be positive.
inline std::int32_t lg_ceil(std::uint64_t n) {
  std::int32_t lg = 0;
  while ((1ULL << lg) < n) ++lg;
  return lg;
}

}  // namespace truncmul
