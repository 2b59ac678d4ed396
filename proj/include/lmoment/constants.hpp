#pragma once

// zeta(3), beta_q, gamma_q and the leading constant
//   alpha_q = (beta_q + gamma_q) phi(q)^2 / q^2,
//   beta_q  = (pi^2/6) prod_{p | q} (1 - 1/p^2),
//   gamma_q = (pi^2 / (3 zeta(3))) prod_{p | q} (1 - 1/(p^2 + p + 1))
//             * sum_{m,n >= 1, gcd(nm(n+m), q) = 1} 1/(nm(n+m)).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lmoment/arith.hpp"
#include "lmoment/lvalues.hpp"
#include "lmoment/summation.hpp"

namespace lmoment {

inline constexpr u64 kDefaultTruncation = 100'000;

constexpr double zeta3() { return 1.2020569031595942854; }

/// A truncated positive series over the simplex m + n <= cutoff.
struct TruncatedSeriesValue {
  double partial_sum;
  u64 cutoff;
  double tail_bound;
};

/// A value together with an absolute error bound.
struct BoundedValue {
  double value;
  double error_bound;
};

/// Upper bound on sum_{s > T} sum_{m=1}^{s-1} 1/(m (s-m) s) = sum_{s > T} 2 H_{s-1}/s^2.
/// Uses H_{s-1} < ln s + gamma and (ln x + gamma)/x^2 decreasing, so the tail
/// is below the integral 2 (ln T + 1 + gamma)/T.
inline double double_series_tail_bound(u64 T) {
  const double t = static_cast<double>(T);
  return (2.0 * std::log(t) + 2.0 + 2.0 * kEulerGamma) / t;
}

namespace detail {

inline void require_modulus(const Factorization& f, const char* where) {
  if (f.value() < 2) throw std::out_of_range(std::string(where) + ": q must be >= 2");
}

/// sum over 2 <= s <= T, gcd(s, r) = 1 of (2/s^2) sum_{m < s, gcd(m(s-m), r) = 1} 1/m,
/// where r is the product of `primes` (empty means no restriction).
///
/// For fixed s the condition on m excludes the classes 0 and s modulo each
/// p | r. Inclusion-exclusion over squarefree d | r turns the inner sum into
/// sum_{d | r} mu(d) sum_{S subset of primes(d)} P_d(c_{d,S}(s)), where
/// P_d(c) = sum_{m < s, m = c (mod d)} 1/m is a running prefix sum and
/// c_{d,S}(s) is the CRT residue equal to s mod p for p in S and 0 mod the
/// other primes of d.
inline double simplex_double_sum(const std::vector<u64>& primes, u64 T) {
  if (T < 2) throw std::out_of_range("lmoment: truncation T must be >= 2");
  for (u64 p : primes) {
    // Classes 0 and s cover Z/2Z, so no m survives.
    if (p == 2) return 0.0;
  }

  struct Divisor {
    u64 d;
    int mobius;
    std::vector<u64> offsets;  // E_{d,S} for every subset S of primes(d)
    bool tabulated;            // d <= T: running class sums are kept
    std::vector<CompensatedSum> prefix;
  };
  std::vector<Divisor> divisors;
  const std::size_t w = primes.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << w); ++mask) {
    Divisor dv{1, 1, {}, false, {}};
    std::vector<u64> ps;
    for (std::size_t k = 0; k < w; ++k) {
      if (mask >> k & 1) {
        dv.d = checked_mul(dv.d, primes[k]);
        dv.mobius = -dv.mobius;
        ps.push_back(primes[k]);
      }
    }
    // CRT idempotents e_p = 1 (mod p), 0 (mod d/p).
    std::vector<u64> idem;
    for (u64 p : ps) {
      const u64 rest = dv.d / p;
      const u64 inv = rest % p == 0 ? 0 : mod_inverse(static_cast<std::int64_t>(rest % p), p);
      idem.push_back(mul_mod(rest, inv, dv.d));
    }
    for (std::size_t sub = 0; sub < (std::size_t{1} << ps.size()); ++sub) {
      u64 e = 0;
      for (std::size_t k = 0; k < ps.size(); ++k) {
        if (sub >> k & 1) e = (e + idem[k]) % dv.d;
      }
      dv.offsets.push_back(e);
    }
    dv.tabulated = dv.d <= T;
    if (dv.tabulated) dv.prefix.assign(dv.d, CompensatedSum{});
    divisors.push_back(std::move(dv));
  }

  const u64 r = [&] {
    u64 x = 1;
    for (u64 p : primes) x = checked_mul(x, p);
    return x;
  }();

  CompensatedSum total;
  for (u64 s = 2; s <= T; ++s) {
    const double inv_prev = 1.0 / static_cast<double>(s - 1);
    for (auto& dv : divisors) {
      if (dv.tabulated) dv.prefix[(s - 1) % dv.d].add(inv_prev);
    }
    if (std::gcd(s, r) != 1) continue;

    CompensatedSum inner;
    for (const auto& dv : divisors) {
      const u64 sd = s % dv.d;
      CompensatedSum part;
      for (u64 e : dv.offsets) {
        const u64 c = mul_mod(sd, e, dv.d);
        if (dv.tabulated) {
          part.add(dv.prefix[c].value());
        } else if (c >= 1 && c < s) {
          // d > T >= s: the only m < s in class c is m = c.
          part.add(1.0 / static_cast<double>(c));
        }
      }
      inner.add(dv.mobius * part.value());
    }
    const double sd = static_cast<double>(s);
    total.add(2.0 * inner.value() / (sd * sd));
  }
  return total.value();
}

}  // namespace detail

inline double beta(const Factorization& f) {
  detail::require_modulus(f, "lmoment::beta");
  double prod = std::numbers::pi * std::numbers::pi / 6.0;
  for (u64 p : f.primes()) {
    const double pd = static_cast<double>(p);
    prod *= 1.0 - 1.0 / (pd * pd);
  }
  return prod;
}

/// sum of 1/(nm(n+m)) over m + n <= T with gcd(nm(n+m), q) = 1.
inline TruncatedSeriesValue gamma_double_sum(const Factorization& f, u64 T) {
  detail::require_modulus(f, "lmoment::gamma_double_sum");
  return {detail::simplex_double_sum(f.primes(), T), T, double_series_tail_bound(T)};
}

inline TruncatedSeriesValue gamma_double_sum(u64 q, u64 T) { return gamma_double_sum(factorize(q), T); }

/// Testing hook: the same simplex sum with no gcd condition. It tends to
/// 2 zeta(3) and corresponds to no modulus.
inline TruncatedSeriesValue gamma_double_sum_unrestricted(u64 T) {
  return {detail::simplex_double_sum({}, T), T, double_series_tail_bound(T)};
}

/// pi^2/(3 zeta(3)) prod_{p | q} (1 - 1/(p^2 + p + 1)).
inline double gamma_prefactor(const Factorization& f) {
  double prod = std::numbers::pi * std::numbers::pi / (3.0 * zeta3());
  for (u64 p : f.primes()) {
    const double pd = static_cast<double>(p);
    prod *= 1.0 - 1.0 / (pd * pd + pd + 1.0);
  }
  return prod;
}

inline BoundedValue gamma(const Factorization& f, u64 T = kDefaultTruncation) {
  const auto series = gamma_double_sum(f, T);
  const double pre = gamma_prefactor(f);
  // For even q the series has no terms at all, so nothing is truncated.
  if (f.value() % 2 == 0) return {0.0, 0.0};
  return {pre * series.partial_sum, pre * series.tail_bound};
}

inline BoundedValue alpha(const Factorization& f, u64 T = kDefaultTruncation) {
  const double q = static_cast<double>(f.value());
  const double ratio = static_cast<double>(euler_phi(f)) / q;
  const auto g = gamma(f, T);
  return {(beta(f) + g.value) * ratio * ratio, g.error_bound * ratio * ratio};
}

inline BoundedValue alpha(u64 q, u64 T = kDefaultTruncation) { return alpha(factorize(q), T); }

}  // namespace lmoment
