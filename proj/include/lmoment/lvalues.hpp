#pragma once

// L(1, chi) for nonprincipal characters.
//
// The production route is Gauss's finite digamma formula
//   psi(a/q) = -gamma - ln(2q) - (pi/2) cot(pi a/q)
//              + 2 sum_{k=1}^{floor((q-1)/2)} cos(2 pi k a/q) ln sin(pi k/q)
// combined with L(1, chi) = -(1/q) sum_{a=1}^{q-1} chi(a) psi(a/q), which
// holds for every nonprincipal chi, primitive or not. The independent route
// sums chi(n)/n directly up to a cutoff M, with tail at most q/M.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmoment/characters.hpp"
#include "lmoment/harmonic.hpp"
#include "lmoment/parallel.hpp"
#include "lmoment/summation.hpp"

namespace lmoment {

inline constexpr double kEulerGamma = 0.57721566490153286061;

enum class LMethod { Digamma, PartialSum };

struct LValue {
  cplx value;
  LMethod method;
  double error_bound;
};

/// psi(a/q) for 1 <= a <= q-1, stored as the constant -gamma - ln(2q) plus
/// the a-dependent part. The a-dependent part is what L(1, chi) needs, since
/// the constant is annihilated by sum_a chi(a) = 0.
class DigammaTable {
 public:
  explicit DigammaTable(u64 q, unsigned threads = 1) : q_(q) {
    if (q < 2) throw std::out_of_range("lmoment::DigammaTable: q must be >= 2");
    const u64 half = (q - 1) / 2;
    const double qd = static_cast<double>(q);

    log_sin_.assign(half + 1, 0.0);
    for (u64 k = 1; k <= half; ++k) {
      log_sin_[k] = std::log(std::sin(std::numbers::pi * static_cast<double>(k) / qd));
    }
    std::vector<double> cos_table(q);
    for (u64 j = 0; 2 * j <= q; ++j) {
      cos_table[j] = std::cos(2.0 * std::numbers::pi * static_cast<double>(j) / qd);
      cos_table[(q - j) % q] = cos_table[j];
    }

    constant_ = -kEulerGamma - std::log(2.0 * qd);
    varying_.assign(q, 0.0);
    // The cosine sum is symmetric under a -> q - a and the cotangent is odd,
    // so only a <= q/2 is summed.
    parallel_for(q / 2, threads, [&](std::size_t i) {
      const u64 a = i + 1;
      CompensatedSum s;
      u64 idx = 0;
      for (u64 k = 1; k <= half; ++k) {
        idx += a;
        if (idx >= q) idx -= q;
        s.add(2.0 * cos_table[idx] * log_sin_[k]);
      }
      const double cosines = s.value();
      // cot(pi/2) = 0 exactly at a = q/2.
      const double cot_term =
          2 * a == q ? 0.0 : 0.5 * std::numbers::pi / std::tan(std::numbers::pi * static_cast<double>(a) / qd);
      varying_[a] = cosines - cot_term;
      if (q - a != a) varying_[q - a] = cosines + cot_term;
    });
  }

  u64 modulus() const { return q_; }

  double psi(u64 a) const {
    check(a);
    return constant_ + varying_[a];
  }

  /// psi(a/q) minus the a-independent constant -gamma - ln(2q).
  double varying_part(u64 a) const {
    check(a);
    return varying_[a];
  }

  double constant_part() const { return constant_; }

 private:
  void check(u64 a) const {
    if (a < 1 || a >= q_) {
      throw std::out_of_range("lmoment::DigammaTable: a must lie in [1, q-1]");
    }
  }

  u64 q_;
  double constant_ = 0.0;
  std::vector<double> log_sin_;
  std::vector<double> varying_;
};

/// psi(a/q) by Gauss's formula, computed on its own in O(q).
inline double digamma_rational(u64 a, u64 q) {
  if (q < 2 || a < 1 || a >= q) {
    throw std::out_of_range("lmoment::digamma_rational: need 1 <= a <= q-1, got a=" +
                            std::to_string(a) + ", q=" + std::to_string(q));
  }
  const double qd = static_cast<double>(q);
  const double pi = std::numbers::pi;
  CompensatedSum s(-kEulerGamma);
  s.add(-std::log(2.0 * qd));
  // cot(pi a/q) = -cot(pi (q-a)/q); the smaller argument keeps tan accurate.
  if (2 * a < q) s.add(-0.5 * pi / std::tan(pi * static_cast<double>(a) / qd));
  if (2 * a > q) s.add(0.5 * pi / std::tan(pi * static_cast<double>(q - a) / qd));
  for (u64 k = 1; 2 * k <= q - 1; ++k) {
    const u64 ka = k * a % q;
    s.add(2.0 * std::cos(2.0 * pi * static_cast<double>(ka) / qd) *
          std::log(std::sin(pi * static_cast<double>(k) / qd)));
  }
  return s.value();
}

namespace detail {

inline void require_nonprincipal(const Character& chi, const char* where) {
  if (chi.is_principal()) {
    throw std::domain_error(std::string(where) + ": L(1, chi_0) diverges");
  }
}

}  // namespace detail

namespace detail {

/// -(1/q) sum_a chi(a) (psi(a/q) + gamma + ln 2q), ascending a, from a
/// table of character values.
inline cplx l_one_from_values(std::span<const cplx> chi_values, const DigammaTable& table) {
  const u64 q = table.modulus();
  CompensatedComplexSum s;
  for (u64 a = 1; a < q; ++a) {
    if (chi_values[a] != cplx{0.0, 0.0}) s.add(chi_values[a] * table.varying_part(a));
  }
  // Adding +0 turns a -0 imaginary part of a real character into +0.
  return -s.value() / static_cast<double>(q) + cplx{0.0, 0.0};
}

/// sum_c chi(c) table[c], ascending c.
inline cplx class_pairing(std::span<const cplx> chi_values, const HarmonicClassTable& table) {
  const u64 q = table.modulus();
  CompensatedComplexSum s;
  for (u64 c = 1; c < q; ++c) {
    if (chi_values[c] != cplx{0.0, 0.0}) s.add(chi_values[c] * table[c]);
  }
  return s.value();
}

inline double l_one_error_estimate(u64 q) {
  const double qd = static_cast<double>(q);
  return 4.0 * std::numeric_limits<double>::epsilon() * qd * (1.0 + std::log(qd));
}

}  // namespace detail

/// L(1, chi) via the digamma table; O(q).
inline LValue l_one(const Character& chi, const DigammaTable& table) {
  detail::require_nonprincipal(chi, "lmoment::l_one");
  const u64 q = chi.modulus();
  if (table.modulus() != q) throw std::domain_error("lmoment::l_one: table modulus mismatch");
  const auto vals = values(chi);
  return {detail::l_one_from_values(vals, table), LMethod::Digamma, detail::l_one_error_estimate(q)};
}

inline LValue l_one(const Character& chi) { return l_one(chi, DigammaTable(chi.modulus())); }

/// sum_{n <= M} chi(n)/n regrouped by residue class: sum_c chi(c) G[c] with
/// G the class harmonic sums up to M. The discarded tail is at most q/M.
inline LValue l_one_oracle(const Character& chi, const HarmonicClassTable& partial) {
  detail::require_nonprincipal(chi, "lmoment::l_one_oracle");
  const CharacterGroup& g = chi.group();
  const u64 q = g.modulus();
  if (partial.modulus() != q) throw std::domain_error("lmoment::l_one_oracle: table modulus mismatch");
  if (partial.cutoff() < q * q) throw std::out_of_range("lmoment::l_one_oracle: cutoff must be >= q^2");
  return {detail::class_pairing(values(chi), partial), LMethod::PartialSum,
          static_cast<double>(q) / static_cast<double>(partial.cutoff())};
}

inline LValue l_one_oracle(const Character& chi, u64 cutoff, unsigned threads = 1) {
  const u64 q = chi.modulus();
  if (cutoff < q * q) throw std::out_of_range("lmoment::l_one_oracle: cutoff must be >= q^2");
  return l_one_oracle(chi, harmonic_class_table(q, cutoff, threads));
}

/// Default oracle cutoff max(q^2, 10^6).
inline u64 default_oracle_cutoff(u64 q) { return std::max<u64>(q * q, 1'000'000); }

/// B(chi) = sum_{u <= q^2} chi(u)/u = sum_c chi(c) H[c].
inline cplx b_trunc(const Character& chi, const HarmonicClassTable& h) {
  const CharacterGroup& g = chi.group();
  const u64 q = g.modulus();
  if (h.modulus() != q) throw std::domain_error("lmoment::b_trunc: table modulus mismatch");
  return detail::class_pairing(values(chi), h);
}

}  // namespace lmoment
