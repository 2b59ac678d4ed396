#pragma once

// Dirichlet characters modulo q.
//
// A CharacterGroup stores the CRT generators of (Z/qZ)^*, a discrete-log
// table for every residue and one table of L-th roots of unity, where L is
// the exponent of the unit group. A character is an exponent tuple t with
// 0 <= t_j < order_j; its value at a unit a is the root of unity with index
// sum_j t_j d_j(a) (L / order_j) mod L.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmoment/arith.hpp"
#include "lmoment/summation.hpp"

namespace lmoment {

using cplx = std::complex<double>;

class Character;

class CharacterGroup {
 public:
  /// Builds the group for q >= 2. Uses O(q * omega(q)) memory, so q is
  /// limited to 2^31.
  explicit CharacterGroup(u64 q) : q_(q) {
    if (q < 2) throw std::out_of_range("lmoment::CharacterGroup: q must be >= 2");
    if (q > (u64{1} << 31)) {
      throw std::out_of_range("lmoment::CharacterGroup: q above 2^31 is not supported");
    }
    factorization_ = factorize(q);
    components_ = crt_unit_group(factorization_);
    phi_ = euler_phi(factorization_);

    exponent_ = 1;
    for (const auto& c : components_) exponent_ = std::lcm(exponent_, c.order);
    for (const auto& c : components_) scale_.push_back(exponent_ / c.order);

    build_dlog();
    build_roots();
  }

  u64 modulus() const { return q_; }
  u64 phi() const { return phi_; }
  /// Exponent of the unit group (lcm of the component orders).
  u64 exponent() const { return exponent_; }
  const Factorization& factorization() const { return factorization_; }
  const std::vector<UnitGenerator>& components() const { return components_; }
  std::size_t rank() const { return components_.size(); }

  bool is_unit(u64 a) const { return unit_[a % q_] != 0; }

  /// Exponent of a (reduced mod q) with respect to component j. a must be a
  /// unit.
  u64 dlog(u64 a, std::size_t j) const { return dlog_[(a % q_) * rank() + j]; }

  /// exp(2 pi i k / L).
  const cplx& root(u64 k) const { return roots_[k % exponent_]; }

  /// Root-table index of chi(a) for a unit a, given the per-component
  /// weights w_j = t_j * (L / order_j) mod L.
  u64 root_index(const std::vector<u64>& weights, u64 a) const {
    const std::uint32_t* d = &dlog_[(a % q_) * rank()];
    u64 idx = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) idx += weights[j] * d[j];
    return idx % exponent_;
  }

  std::vector<u64> weights(const std::vector<u64>& exponents) const {
    std::vector<u64> w(exponents.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = exponents[j] % components_[j].order * scale_[j];
    return w;
  }

  Character principal() const;
  Character character(std::vector<u64> exponents) const;

 private:
  void build_dlog() {
    const std::size_t r = rank();
    unit_.assign(q_, 0);
    dlog_.assign(q_ * r, 0);

    // Expand the products of generator powers component by component.
    std::vector<u64> elems{1 % q_};
    std::vector<u64> exps;  // row-major, r entries per element
    exps.assign(r, 0);
    for (std::size_t j = 0; j < r; ++j) {
      const u64 g = components_[j].generator;
      const u64 ord = components_[j].order;
      std::vector<u64> next_elems;
      std::vector<u64> next_exps;
      next_elems.reserve(elems.size() * ord);
      next_exps.reserve(elems.size() * ord * r);
      u64 gk = 1 % q_;
      for (u64 k = 0; k < ord; ++k) {
        for (std::size_t i = 0; i < elems.size(); ++i) {
          next_elems.push_back(mul_mod(elems[i], gk, q_));
          for (std::size_t t = 0; t < r; ++t) next_exps.push_back(exps[i * r + t]);
          next_exps[next_exps.size() - r + j] = k;
        }
        gk = mul_mod(gk, g, q_);
      }
      elems = std::move(next_elems);
      exps = std::move(next_exps);
    }
    if (elems.size() != phi_) throw std::logic_error("lmoment: unit group size mismatch");
    for (std::size_t i = 0; i < elems.size(); ++i) {
      const u64 a = elems[i];
      if (unit_[a]) throw std::logic_error("lmoment: generators are not independent");
      unit_[a] = 1;
      for (std::size_t t = 0; t < r; ++t) dlog_[a * r + t] = static_cast<std::uint32_t>(exps[i * r + t]);
    }
  }

  void build_roots() {
    const u64 L = exponent_;
    roots_.assign(L, cplx{1.0, 0.0});
    for (u64 k = 1; 2 * k <= L; ++k) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(L);
      roots_[k] = {std::cos(angle), std::sin(angle)};
      roots_[L - k] = std::conj(roots_[k]);
    }
    if (L % 2 == 0) roots_[L / 2] = {-1.0, 0.0};
    if (L % 4 == 0) {
      roots_[L / 4] = {0.0, 1.0};
      roots_[3 * L / 4] = {0.0, -1.0};
    }
  }

  u64 q_;
  Factorization factorization_;
  std::vector<UnitGenerator> components_;
  u64 phi_ = 0;
  u64 exponent_ = 1;
  std::vector<u64> scale_;
  std::vector<std::uint8_t> unit_;
  std::vector<std::uint32_t> dlog_;
  std::vector<cplx> roots_;
};

/// One character of a CharacterGroup. Holds a non-owning pointer: the group
/// must outlive every Character built from it.
class Character {
 public:
  Character(const CharacterGroup& group, std::vector<u64> exponents)
      : group_(&group), exponents_(std::move(exponents)) {
    if (exponents_.size() != group.rank()) {
      throw std::invalid_argument("lmoment::Character: exponent tuple has wrong length");
    }
    for (std::size_t j = 0; j < exponents_.size(); ++j) {
      if (exponents_[j] >= group.components()[j].order) {
        throw std::out_of_range("lmoment::Character: exponent out of range");
      }
    }
    weights_ = group.weights(exponents_);
  }

  const CharacterGroup& group() const { return *group_; }
  u64 modulus() const { return group_->modulus(); }
  const std::vector<u64>& exponents() const { return exponents_; }
  const std::vector<u64>& weights() const { return weights_; }

  bool is_principal() const {
    return std::all_of(exponents_.begin(), exponents_.end(), [](u64 t) { return t == 0; });
  }

  /// chi(a) for any integer a (negative values allowed).
  cplx operator()(std::int64_t a) const {
    const auto q = static_cast<std::int64_t>(group_->modulus());
    std::int64_t r = a % q;
    if (r < 0) r += q;
    const auto ur = static_cast<u64>(r);
    if (!group_->is_unit(ur)) return {0.0, 0.0};
    return group_->root(group_->root_index(weights_, ur));
  }

  /// chi(-1) as +1 or -1.
  int parity() const {
    const u64 q = group_->modulus();
    return group_->root_index(weights_, q - 1) == 0 ? 1 : -1;
  }

  /// All exponents have order dividing 2.
  bool is_real() const {
    return std::all_of(weights_.begin(), weights_.end(),
                       [L = group_->exponent()](u64 w) { return (2 * w) % L == 0; });
  }

  friend bool operator==(const Character& a, const Character& b) {
    return a.group_ == b.group_ && a.exponents_ == b.exponents_;
  }

 private:
  const CharacterGroup* group_;
  std::vector<u64> exponents_;
  std::vector<u64> weights_;
};

inline Character CharacterGroup::principal() const {
  return Character(*this, std::vector<u64>(rank(), 0));
}

inline Character CharacterGroup::character(std::vector<u64> exponents) const {
  return Character(*this, std::move(exponents));
}

inline CharacterGroup build_group(u64 q) { return CharacterGroup(q); }

inline cplx eval(const Character& chi, std::int64_t a) { return chi(a); }

/// Every character in lexicographic exponent order (component 0 most
/// significant), principal first.
inline std::vector<Character> enumerate_all(const CharacterGroup& g) {
  std::vector<Character> out;
  out.reserve(g.phi());
  std::vector<u64> t(g.rank(), 0);
  for (;;) {
    out.emplace_back(g, t);
    std::size_t j = t.size();
    while (j > 0) {
      --j;
      if (++t[j] < g.components()[j].order) break;
      t[j] = 0;
      if (j == 0) return out;
    }
    if (t.empty()) return out;
  }
}

/// The phi(q) - 1 nonprincipal characters in lexicographic exponent order.
inline std::vector<Character> enumerate_nonprincipal(const CharacterGroup& g) {
  auto all = enumerate_all(g);
  all.erase(all.begin());
  return all;
}

inline Character conjugate(const Character& chi) {
  const auto& comps = chi.group().components();
  std::vector<u64> t = chi.exponents();
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = (comps[j].order - t[j]) % comps[j].order;
  return Character(chi.group(), std::move(t));
}

/// chi(a) for a = 0, ..., q-1.
inline std::vector<cplx> values(const Character& chi) {
  const CharacterGroup& g = chi.group();
  const u64 q = g.modulus();
  std::vector<cplx> out(q, cplx{0.0, 0.0});
  for (u64 a = 1; a < q; ++a) {
    if (g.is_unit(a)) out[a] = g.root(g.root_index(chi.weights(), a));
  }
  return out;
}

/// sum_{n=1}^{N} chi(n), compensated, ascending n.
inline cplx incomplete_sum(const Character& chi, u64 N) {
  if (N < 1) throw std::out_of_range("lmoment::incomplete_sum: N must be >= 1");
  const CharacterGroup& g = chi.group();
  const u64 q = g.modulus();
  CompensatedComplexSum s;
  for (u64 n = 1; n <= N; ++n) {
    const u64 r = n % q;
    if (g.is_unit(r)) s.add(g.root(g.root_index(chi.weights(), r)));
  }
  return s.value();
}

}  // namespace lmoment
