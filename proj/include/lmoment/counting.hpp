#pragma once

// Block decomposition of the off-diagonal congruence sum.
//
// u and v are grouped into e-adic blocks e^i <= u < e^{i+1}, 0 <= i <= J with
// J = floor(2 ln q), capped at q^2. T_{i,j} counts (m, n, u, v) with
// mu = nv (mod q), mu != nv, 1 <= m, n <= N, u in block i, v in block j.
// M2 is bounded by 2 phi(q) sum_{0 <= i <= j <= J} e^{-i-j} T_{i,j}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmoment/arith.hpp"
#include "lmoment/averages.hpp"
#include "lmoment/harmonic.hpp"
#include "lmoment/summation.hpp"

namespace lmoment {

struct BlockSpec {
  unsigned i;
  unsigned j;
};

/// Integers lo <= x < hi.
struct IntRange {
  u64 lo;
  u64 hi;
  u64 size() const { return hi > lo ? hi - lo : 0; }
  bool empty() const { return hi <= lo; }
};

/// floor(2 ln q), natural logarithm.
inline unsigned j_of(u64 q) {
  if (q < 2) throw std::out_of_range("lmoment::j_of: q must be >= 2");
  return static_cast<unsigned>(std::floor(2.0L * std::log(static_cast<long double>(q))));
}

namespace detail {

/// ceil(e^k). e^k is irrational for k >= 1, so no integer sits on a block
/// boundary; the check rejects a computed value too close to an integer.
inline u64 ceil_exp(unsigned k) {
  if (k == 0) return 1;
  const long double x = std::exp(static_cast<long double>(k));
  const long double nearest = std::round(x);
  // long double carries ~19 digits; 1e-15 relative is far above its rounding.
  if (std::fabs(x - nearest) <= 1e-15L * x) {
    throw std::logic_error("lmoment: e^" + std::to_string(k) + " too close to an integer");
  }
  return static_cast<u64>(std::ceil(x));
}

}  // namespace detail

/// Integers u with e^i <= u < e^{i+1} and u <= cap.
inline IntRange block_range(unsigned i, u64 cap) {
  IntRange r{detail::ceil_exp(i), detail::ceil_exp(i + 1)};
  r.hi = std::min(r.hi, cap + 1);
  return r;
}

inline constexpr u64 kBruteForceVolume = 1'000'000'000;

/// Quadruple-loop count.
inline u64 t_bruteforce(u64 q, u64 N, BlockSpec spec) {
  if (q < 2 || N < 1) throw std::out_of_range("lmoment::t_bruteforce: need q >= 2, N >= 1");
  const u64 cap = checked_mul(q, q);
  const IntRange us = block_range(spec.i, cap);
  const IntRange vs = block_range(spec.j, cap);
  const long double volume = static_cast<long double>(N) * N * us.size() * vs.size();
  if (volume > kBruteForceVolume) {
    throw std::out_of_range("lmoment::t_bruteforce: loop volume above 1e9, use t_divisor");
  }
  u64 count = 0;
  for (u64 m = 1; m <= N; ++m) {
    for (u64 u = us.lo; u < us.hi; ++u) {
      const u64 mu = m * u;
      for (u64 n = 1; n <= N; ++n) {
        for (u64 v = vs.lo; v < vs.hi; ++v) {
          const u64 nv = n * v;
          if (mu != nv && (mu > nv ? mu - nv : nv - mu) % q == 0) ++count;
        }
      }
    }
  }
  return count;
}

/// Largest |k| searched for solutions mu = nv + kq:
/// floor(e^{max(i,j)+1} N / q) + 1, plus an optional widening.
inline u64 k_window(u64 q, u64 N, BlockSpec spec, u64 extra = 0) {
  const long double top = std::exp(static_cast<long double>(std::max(spec.i, spec.j) + 1));
  return static_cast<u64>(std::floor(top * N / q)) + 1 + extra;
}

/// Counts solutions by writing mu = nv + kq: for each m, u in block i and
/// 1 <= |k| <= k_window, the product s = mu - kq >= 1 is split as n v with
/// n <= N and v in block j.
inline u64 t_divisor(u64 q, u64 N, BlockSpec spec, u64 k_extra = 0) {
  if (q < 2 || N < 1) throw std::out_of_range("lmoment::t_divisor: need q >= 2, N >= 1");
  const u64 cap = checked_mul(q, q);
  const IntRange us = block_range(spec.i, cap);
  const IntRange vs = block_range(spec.j, cap);
  if (us.empty() || vs.empty()) return 0;
  const auto K = static_cast<std::int64_t>(k_window(q, N, spec, k_extra));
  const auto qs = static_cast<std::int64_t>(q);
  u64 count = 0;
  for (u64 m = 1; m <= N; ++m) {
    for (u64 u = us.lo; u < us.hi; ++u) {
      const auto mu = static_cast<std::int64_t>(m * u);
      for (std::int64_t k = -K; k <= K; ++k) {
        if (k == 0) continue;
        const std::int64_t s = mu - k * qs;
        if (s < 1) continue;
        count += divisor_pairs_in_box(static_cast<u64>(s), N, vs.lo, vs.hi);
      }
    }
  }
  return count;
}

struct BlockCount {
  unsigned i;
  unsigned j;
  u64 count;
};

struct BlockSumBound {
  double bound;
  double m2_value;
  bool holds;
  std::vector<BlockCount> table;  // 0 <= i <= j <= J
};

/// Rough number of inner steps of t_divisor over the whole i <= j table.
inline long double block_table_work(u64 q, u64 N) {
  const unsigned J = j_of(q);
  const u64 cap = q * q;
  long double work = 0;
  for (unsigned j = 0; j <= J; ++j) {
    const long double k2 = 2.0L * k_window(q, N, {0, j});
    for (unsigned i = 0; i <= j; ++i) work += static_cast<long double>(N) * block_range(i, cap).size() * k2;
  }
  return work;
}

inline constexpr long double kBlockTableWorkLimit = 2e9L;

/// 2 phi(q) sum_{i <= j} e^{-i-j} T_{i,j} against M2.
inline BlockSumBound block_sum_bound(u64 q, u64 N, const HarmonicClassTable& h) {
  if (q < 2 || N < 1) throw std::out_of_range("lmoment::block_sum_bound: need q >= 2, N >= 1");
  if (block_table_work(q, N) > kBlockTableWorkLimit) {
    throw std::out_of_range("lmoment::block_sum_bound: (q, N) too large for the full T table");
  }
  const unsigned J = j_of(q);
  const u64 cap = checked_mul(q, q);
  if (block_range(J, cap).hi <= cap) throw std::logic_error("lmoment: blocks do not cover [1, q^2]");

  BlockSumBound out{};
  CompensatedSum weighted;
  for (unsigned i = 0; i <= J; ++i) {
    for (unsigned j = i; j <= J; ++j) {
      const u64 t = t_divisor(q, N, {i, j});
      out.table.push_back({i, j, t});
      weighted.add(std::exp(-static_cast<double>(i + j)) * static_cast<double>(t));
    }
  }
  out.bound = 2.0 * static_cast<double>(euler_phi(factorize(q))) * weighted.value();
  out.m2_value = m2(q, N, h);
  out.holds = out.bound >= out.m2_value;
  return out;
}

}  // namespace lmoment
