#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "lmoment/arith.hpp"
#include "lmoment/parallel.hpp"
#include "lmoment/summation.hpp"

namespace lmoment {

/// Class-restricted harmonic sums H[c] = sum_{u <= cutoff, u = c (mod q)} 1/u
/// for units c, and 0 for non-units. The default cutoff q^2 is the range of
/// the truncated series B(chi).
class HarmonicClassTable {
 public:
  HarmonicClassTable(u64 q, u64 cutoff, std::vector<double> values)
      : q_(q), cutoff_(cutoff), values_(std::move(values)) {}

  u64 modulus() const { return q_; }
  u64 cutoff() const { return cutoff_; }
  double operator[](u64 c) const { return values_[c % q_]; }
  const std::vector<double>& values() const { return values_; }

 private:
  u64 q_;
  u64 cutoff_;
  std::vector<double> values_;
};

/// Each class is summed in ascending u with compensation; classes are
/// independent, so the work is split over threads without affecting bits.
inline HarmonicClassTable harmonic_class_table(u64 q, u64 cutoff, unsigned threads = 1) {
  if (q < 2) throw std::out_of_range("lmoment::harmonic_class_table: q must be >= 2");
  std::vector<double> h(q, 0.0);
  parallel_for(q, threads, [&](std::size_t c) {
    if (c == 0 || std::gcd<u64, u64>(c, q) != 1) return;
    CompensatedSum s;
    for (u64 u = c; u <= cutoff; u += q) s.add(1.0 / static_cast<double>(u));
    h[c] = s.value();
  });
  return HarmonicClassTable(q, cutoff, std::move(h));
}

inline HarmonicClassTable harmonic_class_table(u64 q, unsigned threads = 1) {
  return harmonic_class_table(q, checked_mul(q, q), threads);
}

}  // namespace lmoment
