#pragma once

// Compensated accumulation used by every reduction in the library.
//
// All sums are taken in a fixed index order. Parallel callers compute
// per-index partials into a buffer and reduce that buffer sequentially, so
// results do not depend on the thread count.

#include <cmath>
#include <complex>
#include <span>

namespace lmoment {

/// Neumaier's variant of Kahan summation (robust when an addend exceeds the
/// running sum).
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  constexpr explicit CompensatedSum(double init) : sum_(init) {}

  constexpr void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }

  constexpr double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  CompensatedComplexSum& operator+=(std::complex<double> z) {
    add(z);
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

inline double compensated_total(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

inline std::complex<double> compensated_total(std::span<const std::complex<double>> xs) {
  CompensatedComplexSum s;
  for (auto z : xs) s.add(z);
  return s.value();
}

}  // namespace lmoment
