#pragma once

// Exact 64-bit integer arithmetic: factorization, multiplicative functions,
// divisor counting in boxes, modular inverses and the CRT decomposition of
// the unit group (Z/qZ)^*.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace lmoment {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxFactorInput = (u64{1} << 63) - 1;

/// Overflow-checked multiply.
inline u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("lmoment: 64-bit overflow in " + std::to_string(a) + " * " +
                              std::to_string(b));
  }
  return r;
}

inline u64 checked_add(u64 a, u64 b) {
  u64 r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("lmoment: 64-bit overflow in addition");
  }
  return r;
}

constexpr u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

namespace detail {

constexpr bool miller_rabin_witness(u64 n, u64 a, u64 d, int r) {
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the first twelve primes as witnesses are
/// sufficient for every n < 3.3e24, hence for all 64-bit inputs.
constexpr bool is_prime(u64 n) {
  if (n < 2) return false;
  constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : small) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : small) {
    if (!detail::miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

struct PrimePower {
  u64 prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime-power decomposition, primes strictly ascending. The empty list
/// factors 1.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> parts) : parts_(std::move(parts)) {
    std::sort(parts_.begin(), parts_.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  }

  const std::vector<PrimePower>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  auto begin() const { return parts_.begin(); }
  auto end() const { return parts_.end(); }

  /// The factored integer, recomputed with overflow checks.
  u64 value() const {
    u64 n = 1;
    for (const auto& [p, e] : parts_) {
      for (unsigned i = 0; i < e; ++i) n = checked_mul(n, p);
    }
    return n;
  }

  /// Distinct primes, ascending.
  std::vector<u64> primes() const {
    std::vector<u64> ps;
    ps.reserve(parts_.size());
    for (const auto& pp : parts_) ps.push_back(pp.prime);
    return ps;
  }

  /// Product of the distinct primes.
  u64 radical() const {
    u64 r = 1;
    for (const auto& pp : parts_) r = checked_mul(r, pp.prime);
    return r;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> parts_;
};

namespace detail {

inline u64 pollard_rho(u64 n) {
  if (n % 2 == 0) return 2;
  // Brent's cycle detection with batched gcds.
  for (u64 c = 1;; ++c) {
    auto f = [n, c](u64 x) { return (mul_mod(x, x, n) + c) % n; };
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    constexpr u64 batch = 128;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        for (u64 i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_rho(n);
  factor_large(d, out);
  factor_large(n / d, out);
}

}  // namespace detail

/// Trial division to 10^6, then Miller-Rabin and Pollard rho on the cofactor.
inline Factorization factorize(u64 n) {
  if (n < 1 || n > kMaxFactorInput) {
    throw std::out_of_range("lmoment::factorize: n must lie in [1, 2^63 - 1], got " +
                            std::to_string(n));
  }
  std::vector<PrimePower> parts;
  auto strip = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) parts.push_back({p, e});
  };
  strip(2);
  constexpr u64 kTrialLimit = 1'000'000;
  for (u64 p = 3; p <= kTrialLimit && p * p <= n; p += 2) strip(p);
  if (n > 1) {
    if (n <= kTrialLimit * kTrialLimit || is_prime(n)) {
      parts.push_back({n, 1});
    } else {
      std::vector<u64> primes;
      detail::factor_large(n, primes);
      std::sort(primes.begin(), primes.end());
      for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        parts.push_back({primes[i], static_cast<unsigned>(j - i)});
        i = j;
      }
    }
  }
  return Factorization(std::move(parts));
}

/// Euler's totient, prod p^(e-1) (p - 1).
inline u64 euler_phi(const Factorization& f) {
  u64 phi = 1;
  for (const auto& [p, e] : f) {
    phi = checked_mul(phi, p - 1);
    for (unsigned i = 1; i < e; ++i) phi = checked_mul(phi, p);
  }
  return phi;
}

/// Number of distinct prime divisors.
inline unsigned omega(const Factorization& f) { return static_cast<unsigned>(f.size()); }

/// Number of positive divisors.
inline u64 tau(const Factorization& f) {
  u64 t = 1;
  for (const auto& pp : f) t = checked_mul(t, pp.exponent + 1);
  return t;
}

/// Squarefree divisors d of rad(f) with their Moebius signs, in ascending
/// subset order (bit k of the subset index selects the k-th prime).
struct SignedDivisor {
  u64 divisor;
  int mobius;
};

inline std::vector<SignedDivisor> squarefree_divisors(const Factorization& f) {
  std::vector<SignedDivisor> out{{1, 1}};
  for (const auto& pp : f) {
    const std::size_t n = out.size();
    for (std::size_t k = 0; k < n; ++k) {
      out.push_back({checked_mul(out[k].divisor, pp.prime), -out[k].mobius});
    }
  }
  return out;
}

/// Counts pairs (n, v) with n * v = s, 1 <= n <= n_max and v_lo <= v < v_hi.
///
/// The admissible n form the interval (s / v_hi, min(n_max, s / v_lo)]; when
/// that interval is shorter than sqrt(s) it is scanned directly, otherwise
/// the divisors of s up to sqrt(s) are enumerated.
inline u64 divisor_pairs_in_box(u64 s, u64 n_max, u64 v_lo, u64 v_hi) {
  if (s == 0 || v_lo >= v_hi || n_max == 0) return 0;
  if (v_lo == 0) v_lo = 1;
  // v >= v_lo  <=>  n <= s / v_lo ; v < v_hi  <=>  n > s / v_hi  (n | s).
  const u64 n_hi = std::min(n_max, s / v_lo);
  const u64 n_lo = s / v_hi + 1;
  if (n_lo > n_hi) return 0;

  auto admissible = [&](u64 n) {
    if (n < n_lo || n > n_hi) return false;
    const u64 v = s / n;
    return v >= v_lo && v < v_hi;
  };

  u64 count = 0;
  auto scan_window = [&] {
    for (u64 n = n_lo; n <= n_hi; ++n) {
      if (s % n == 0 && admissible(n)) ++count;
    }
    return count;
  };
  if (n_hi - n_lo < 64) return scan_window();

  u64 root = static_cast<u64>(std::sqrt(static_cast<long double>(s)));
  while (root * root > s) --root;
  while ((root + 1) * (root + 1) <= s) ++root;
  if (n_hi - n_lo < root) return scan_window();
  for (u64 d = 1; d <= root; ++d) {
    if (s % d != 0) continue;
    const u64 e = s / d;
    if (admissible(d)) ++count;
    if (e != d && admissible(e)) ++count;
  }
  return count;
}

/// a^{-1} mod q via the extended Euclidean algorithm.
inline u64 mod_inverse(std::int64_t a, u64 q) {
  if (q < 2) throw std::domain_error("lmoment::mod_inverse: modulus must be >= 2");
  const auto qs = static_cast<std::int64_t>(q);
  std::int64_t r0 = a % qs;
  if (r0 < 0) r0 += qs;
  std::int64_t r1 = qs;
  std::int64_t s0 = 1, s1 = 0;
  while (r1 != 0) {
    const std::int64_t t = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - t * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - t * s1};
  }
  if (r0 != 1) {
    throw std::domain_error("lmoment::mod_inverse: " + std::to_string(a) +
                            " is not invertible modulo " + std::to_string(q));
  }
  s0 %= qs;
  if (s0 < 0) s0 += qs;
  return static_cast<u64>(s0);
}

/// Smallest g >= 2 generating (Z/p^e Z)^* for an odd prime p.
inline u64 primitive_root_odd_prime_power(u64 p, unsigned e) {
  u64 pe = 1;
  for (unsigned i = 0; i < e; ++i) pe = checked_mul(pe, p);
  const u64 phi = pe / p * (p - 1);
  const auto ells = factorize(phi).primes();
  for (u64 g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    bool primitive = true;
    for (u64 ell : ells) {
      if (pow_mod(g, phi / ell, pe) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
  throw std::logic_error("lmoment: no primitive root found");
}

/// One cyclic factor of the unit group: `generator` is a residue mod q that
/// is congruent to a generator of (Z/prime_power Z)^* and to 1 modulo the
/// other prime-power factors.
struct UnitGenerator {
  u64 generator;
  u64 order;
  u64 prime_power;
  friend bool operator==(const UnitGenerator&, const UnitGenerator&) = default;
};

/// CRT decomposition of (Z/qZ)^* into cyclic factors, primes ascending. For
/// 2^e (e >= 3) the factors are -1 (order 2) followed by 5 (order 2^(e-2)).
inline std::vector<UnitGenerator> crt_unit_group(const Factorization& f) {
  const u64 q = f.value();
  if (q < 2) throw std::out_of_range("lmoment::crt_unit_group: q must be >= 2");

  // Lift g mod pe to the residue mod q that is 1 modulo q / pe.
  auto lift = [q](u64 g, u64 pe) -> u64 {
    const u64 rest = q / pe;
    if (rest == 1) return g % q;
    // x = 1 + rest * t, with 1 + rest * t = g (mod pe).
    const u64 rest_inv = mod_inverse(static_cast<std::int64_t>(rest % pe), pe);
    const u64 t = mul_mod((g + pe - 1) % pe, rest_inv, pe);
    return (1 + static_cast<u64>(static_cast<u128>(rest) * t % q)) % q;
  };

  std::vector<UnitGenerator> out;
  for (const auto& [p, e] : f) {
    u64 pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;
      out.push_back({lift(pe - 1, pe), 2, pe});
      if (e >= 3) out.push_back({lift(5, pe), pe / 4, pe});
    } else {
      out.push_back({lift(primitive_root_odd_prime_power(p, e), pe), pe / p * (p - 1), pe});
    }
  }
  return out;
}

}  // namespace lmoment
