#pragma once

// The weighted second moment
//   S(q, N) = sum_{chi != chi_0} |sum_{n <= N} chi(n)|^2 |L(1, chi)|^2,
// its proxy with L(1, chi) replaced by B(chi) = sum_{u <= q^2} chi(u)/u, and
// the congruence-side terms
//   M1 = phi(q) sum_{m,n <= N} sum_{u,v <= q^2, mu = nv} 1/(uv),
//   M2 = phi(q) sum_{m,n <= N} sum_{u,v <= q^2, mu = nv (mod q), mu != nv} 1/(uv),
// both restricted to gcd(mnuv, q) = 1. Row orthogonality gives the exact
// identity  sum_{all chi} |A(chi)|^2 |B(chi)|^2 = M1 + M2.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmoment/arith.hpp"
#include "lmoment/characters.hpp"
#include "lmoment/constants.hpp"
#include "lmoment/harmonic.hpp"
#include "lmoment/lvalues.hpp"
#include "lmoment/parallel.hpp"
#include "lmoment/summation.hpp"

namespace lmoment {

struct ProxyMoment {
  double s_proxy;
  double principal_term;
};

struct MomentBreakdown {
  u64 q;
  u64 N;
  double s_direct;
  double s_proxy;
  double m1;
  double m2;
  double principal_term;
  double alpha;
  double alpha_error_bound;
  /// s_direct / (alpha q N); set only when q > N and phi(q) > 1.
  std::optional<double> ratio;
  /// N >= q lies outside the range q > N >= 1 covered by the asymptotic.
  bool beyond_theorem_range;
};

struct IdentityReport {
  double character_side;    // S_proxy + principal_term
  double congruence_side;   // M1 + M2
  double residual;          // relative
};

namespace detail {

inline void require_q_n(u64 q, u64 N, const char* where) {
  if (q < 2) throw std::out_of_range(std::string(where) + ": q must be >= 2");
  if (N < 1) throw std::out_of_range(std::string(where) + ": N must be >= 1");
}

/// Partial sums Z(x) = sum_{s <= x} 1/s^2: tabulated for small x, otherwise
/// zeta(2) minus the Euler-Maclaurin tail
///   1/x - 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7),
/// whose truncation error is below 1/(30 x^9) < 1e-25 for x > 1000.
class InverseSquarePartialSums {
 public:
  InverseSquarePartialSums() : table_(kTabulated + 1, 0.0) {
    CompensatedSum s;
    for (u64 k = 1; k <= kTabulated; ++k) {
      const double kd = static_cast<double>(k);
      s.add(1.0 / (kd * kd));
      table_[k] = s.value();
    }
  }

  double operator()(u64 x) const {
    if (x <= kTabulated) return table_[x];
    const double t = static_cast<double>(x);
    const double inv = 1.0 / t;
    const double inv2 = inv * inv;
    // Horner form of the tail series.
    const double tail = inv * (1.0 - inv * (0.5 - inv * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0))));
    return std::numbers::pi * std::numbers::pi / 6.0 - tail;
  }

 private:
  static constexpr u64 kTabulated = 1000;
  std::vector<double> table_;
};

/// sum_{t <= L, gcd(t, q) = 1} 1/t^2 via Moebius over squarefree d | rad(q).
inline double coprime_inverse_square_sum(u64 L, std::span<const SignedDivisor> divisors,
                                         const InverseSquarePartialSums& Z) {
  CompensatedSum s;
  for (const auto& [d, mu] : divisors) {
    if (d > L) continue;
    const double dd = static_cast<double>(d);
    s.add(mu * Z(L / d) / (dd * dd));
  }
  return s.value();
}

}  // namespace detail

/// |A(chi, N)|^2, |L(1, chi)|^2 and |B(chi)|^2 for every nonprincipal
/// character (enumeration order) and a list of N values.
struct CharacterSide {
  std::vector<u64> Ns;
  std::vector<double> l_abs2;
  std::vector<double> b_abs2;
  std::vector<std::vector<double>> a_abs2;  // [k][character]
  double principal_b_abs2 = 0.0;
  std::vector<double> principal_a_abs2;     // [k]
};

/// Evaluates the per-character quantities in parallel; each character is
/// written to its own slot, so the later ordered reductions are independent
/// of the thread count. digamma or harmonic may be null to skip L or B.
inline CharacterSide character_side(const CharacterGroup& group, const DigammaTable* digamma,
                                    const HarmonicClassTable* harmonic, std::span<const u64> Ns,
                                    unsigned threads = 1) {
  const u64 q = group.modulus();
  const auto chars = enumerate_all(group);
  const std::size_t count = chars.size() - 1;
  CharacterSide out;
  out.Ns.assign(Ns.begin(), Ns.end());
  out.l_abs2.assign(count, 0.0);
  out.b_abs2.assign(count, 0.0);
  out.a_abs2.assign(Ns.size(), std::vector<double>(count, 0.0));
  out.principal_a_abs2.assign(Ns.size(), 0.0);

  std::vector<std::size_t> order(Ns.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return Ns[a] < Ns[b]; });
  const u64 n_max = Ns.empty() ? 0 : Ns[order.back()];

  auto per_character = [&](std::size_t idx, std::vector<double>& a_out) -> std::pair<double, double> {
    const auto vals = values(chars[idx]);
    double l2 = 0.0, b2 = 0.0;
    if (digamma != nullptr && idx != 0) l2 = std::norm(detail::l_one_from_values(vals, *digamma));
    if (harmonic != nullptr) b2 = std::norm(detail::class_pairing(vals, *harmonic));
    CompensatedComplexSum a;
    std::size_t next = 0;
    for (u64 n = 1; n <= n_max && next < order.size(); ++n) {
      a.add(vals[n % q]);
      while (next < order.size() && Ns[order[next]] == n) {
        a_out[order[next]] = std::norm(a.value());
        ++next;
      }
    }
    return {l2, b2};
  };

  parallel_for(chars.size(), threads, [&](std::size_t idx) {
    std::vector<double> a_vals(Ns.size(), 0.0);
    const auto [l2, b2] = per_character(idx, a_vals);
    if (idx == 0) {
      out.principal_b_abs2 = b2;
      out.principal_a_abs2 = a_vals;
      return;
    }
    out.l_abs2[idx - 1] = l2;
    out.b_abs2[idx - 1] = b2;
    for (std::size_t k = 0; k < Ns.size(); ++k) out.a_abs2[k][idx - 1] = a_vals[k];
  });
  return out;
}

/// sum over nonprincipal chi of weight[k][chi] * factor[chi], ascending chi.
inline double ordered_weighted_sum(std::span<const double> weights, std::span<const double> factor) {
  CompensatedSum s;
  for (std::size_t i = 0; i < weights.size(); ++i) s.add(weights[i] * factor[i]);
  return s.value();
}

/// S(q, N) from the definition. N >= q is accepted (the caller may warn).
inline double s_direct(u64 q, u64 N, unsigned threads = 1) {
  detail::require_q_n(q, N, "lmoment::s_direct");
  const CharacterGroup group(q);
  const DigammaTable digamma(q, threads);
  const u64 ns[] = {N};
  const auto side = character_side(group, &digamma, nullptr, ns, threads);
  return ordered_weighted_sum(side.a_abs2[0], side.l_abs2);
}

inline ProxyMoment s_proxy(u64 q, u64 N, const HarmonicClassTable& h, unsigned threads = 1) {
  detail::require_q_n(q, N, "lmoment::s_proxy");
  if (h.modulus() != q) throw std::domain_error("lmoment::s_proxy: table modulus mismatch");
  const CharacterGroup group(q);
  const u64 ns[] = {N};
  const auto side = character_side(group, nullptr, &h, ns, threads);
  return {ordered_weighted_sum(side.a_abs2[0], side.b_abs2),
          side.principal_a_abs2[0] * side.principal_b_abs2};
}

/// M1 in closed form over pairs (m, n) coprime to q: with g = gcd(m, n) the
/// solutions of mu = nv are u = (n/g) t, v = (m/g) t, so the inner sum is
/// (g^2/(mn)) sum_{t <= q^2 g / max(m, n), gcd(t, q) = 1} 1/t^2.
inline double m1(u64 q, u64 N) {
  detail::require_q_n(q, N, "lmoment::m1");
  const auto f = factorize(q);
  const auto divisors = squarefree_divisors(f);
  const detail::InverseSquarePartialSums Z;
  const u64 q2 = checked_mul(q, q);
  CompensatedSum s;
  for (u64 m = 1; m <= N; ++m) {
    if (std::gcd(m, q) != 1) continue;
    for (u64 n = 1; n <= N; ++n) {
      if (std::gcd(n, q) != 1) continue;
      const u64 g = std::gcd(m, n);
      const u64 limit = checked_mul(q2, g) / std::max(m, n);
      const double weight = static_cast<double>(g * g) / (static_cast<double>(m) * static_cast<double>(n));
      s.add(weight * detail::coprime_inverse_square_sum(limit, divisors, Z));
    }
  }
  return static_cast<double>(euler_phi(f)) * s.value();
}

/// D[r] = sum_{m <= N, gcd(m, q) = 1} H[m^{-1} r mod q]
///      = sum over (m, u), m <= N, u <= q^2, mu = r (mod q), coprime to q, of 1/u.
inline std::vector<double> residue_profile(u64 q, u64 N, const HarmonicClassTable& h, unsigned threads = 1) {
  detail::require_q_n(q, N, "lmoment::residue_profile");
  if (h.modulus() != q) throw std::domain_error("lmoment::residue_profile: table modulus mismatch");
  std::vector<u64> inverses;
  for (u64 m = 1; m <= N; ++m) {
    if (std::gcd(m, q) == 1) inverses.push_back(mod_inverse(static_cast<std::int64_t>(m % q), q) % q);
  }
  std::vector<double> profile(q, 0.0);
  parallel_for(q, threads, [&](std::size_t r) {
    if (std::gcd<u64, u64>(r, q) != 1) return;
    CompensatedSum s;
    for (u64 inv : inverses) s.add(h[mul_mod(inv, r, q)]);
    profile[r] = s.value();
  });
  return profile;
}

namespace detail {

inline double m2_from_parts(double total, double m1_value) {
  const double m2 = total - m1_value;
  if (m2 >= 0.0) return m2;
  if (-m2 <= 1e-9 * std::abs(total)) return 0.0;
  throw std::logic_error("lmoment::m2: negative beyond rounding (" + std::to_string(m2) + ")");
}

}  // namespace detail

/// phi(q) sum_r D[r]^2, i.e. M1 + M2.
inline double congruence_total(u64 q, std::span<const double> profile) {
  CompensatedSum s;
  for (double d : profile) s.add(d * d);
  return static_cast<double>(euler_phi(factorize(q))) * s.value();
}

/// M2 = phi(q) sum_r D[r]^2 - M1, clamped to 0 when rounding drives it
/// negative by at most 1e-9 of the total.
inline double m2(u64 q, u64 N, const HarmonicClassTable& h, unsigned threads = 1) {
  const auto profile = residue_profile(q, N, h, threads);
  return detail::m2_from_parts(congruence_total(q, profile), m1(q, N));
}

inline constexpr u64 kIdentityMaxQ = 200;
inline constexpr u64 kIdentityMaxN = 50;

/// Relative residual of S_proxy + principal_term = M1 + M2.
inline IdentityReport identity_check(u64 q, u64 N, unsigned threads = 1) {
  detail::require_q_n(q, N, "lmoment::identity_check");
  if (q > kIdentityMaxQ || N > kIdentityMaxN) {
    throw std::out_of_range("lmoment::identity_check: limited to q <= 200 and N <= 50");
  }
  const auto h = harmonic_class_table(q, threads);
  const auto proxy = s_proxy(q, N, h, threads);
  const double rhs = m1(q, N) + m2(q, N, h, threads);
  const double lhs = proxy.s_proxy + proxy.principal_term;
  return {lhs, rhs, std::abs(lhs - rhs) / rhs};
}

/// All quantities for one q and a list of N, sharing the per-q tables.
inline std::vector<MomentBreakdown> moment_scan(u64 q, std::span<const u64> Ns,
                                                u64 truncation = kDefaultTruncation,
                                                unsigned threads = 1) {
  for (u64 N : Ns) detail::require_q_n(q, N, "lmoment::moment_scan");
  const auto f = factorize(q);
  const u64 phi = euler_phi(f);
  const CharacterGroup group(q);
  const DigammaTable digamma(q, threads);
  const auto h = harmonic_class_table(q, threads);
  const auto side = character_side(group, &digamma, &h, Ns, threads);
  const auto a = alpha(f, truncation);

  std::vector<MomentBreakdown> rows;
  rows.reserve(Ns.size());
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    const u64 N = Ns[k];
    MomentBreakdown row{};
    row.q = q;
    row.N = N;
    row.s_direct = ordered_weighted_sum(side.a_abs2[k], side.l_abs2);
    row.s_proxy = ordered_weighted_sum(side.a_abs2[k], side.b_abs2);
    row.principal_term = side.principal_a_abs2[k] * side.principal_b_abs2;
    row.m1 = m1(q, N);
    row.m2 = detail::m2_from_parts(congruence_total(q, residue_profile(q, N, h, threads)), row.m1);
    row.alpha = a.value;
    row.alpha_error_bound = a.error_bound;
    row.beyond_theorem_range = N >= q;
    if (q > N && phi > 1) {
      row.ratio = row.s_direct / (a.value * static_cast<double>(q) * static_cast<double>(N));
    }
    rows.push_back(row);
  }
  return rows;
}

/// S(q, N) / (alpha_q q N) for q > N >= 1.
inline double ratio(u64 q, u64 N, u64 truncation = kDefaultTruncation, unsigned threads = 1) {
  detail::require_q_n(q, N, "lmoment::ratio");
  if (q <= N) {
    throw std::domain_error("lmoment::ratio: requires q > N >= 1 (got q=" + std::to_string(q) +
                            ", N=" + std::to_string(N) + ")");
  }
  if (euler_phi(factorize(q)) <= 1) {
    throw std::domain_error("lmoment::ratio: no nonprincipal characters modulo " + std::to_string(q));
  }
  const double s = s_direct(q, N, threads);
  return s / (alpha(q, truncation).value * static_cast<double>(q) * static_cast<double>(N));
}

}  // namespace lmoment
