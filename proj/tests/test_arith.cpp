#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "lmoment/arith.hpp"
#include "oracles.hpp"

namespace lm = lmoment;

TEST(Factorize, SmallExamples) {
  EXPECT_TRUE(lm::factorize(1).empty());
  EXPECT_EQ(lm::factorize(12).parts(), (std::vector<lm::PrimePower>{{2, 2}, {3, 1}}));
  EXPECT_EQ(lm::factorize(10007).parts(), (std::vector<lm::PrimePower>{{10007, 1}}));
  EXPECT_EQ(lm::factorize(1024).parts(), (std::vector<lm::PrimePower>{{2, 10}}));
}

TEST(Factorize, AgreesWithTrialDivision) {
  for (lm::u64 n = 1; n <= 3000; ++n) {
    const auto f = lm::factorize(n);
    const auto ref = oracle::factor(n);
    ASSERT_EQ(f.size(), ref.size()) << n;
    for (std::size_t k = 0; k < ref.size(); ++k) {
      EXPECT_EQ(f.parts()[k].prime, ref[k].first);
      EXPECT_EQ(f.parts()[k].exponent, ref[k].second);
    }
    EXPECT_EQ(f.value(), n);
  }
}

TEST(Factorize, LargeSemiprimeUsesRho) {
  const lm::u64 p = 1'000'000'007, r = 998'244'353;
  const auto f = lm::factorize(p * r);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.parts()[0].prime, r);
  EXPECT_EQ(f.parts()[1].prime, p);
}

TEST(Factorize, LargePrimeAndPrimePower) {
  const lm::u64 m61 = (lm::u64{1} << 61) - 1;
  EXPECT_EQ(lm::factorize(m61).parts(), (std::vector<lm::PrimePower>{{m61, 1}}));
  const lm::u64 p = 2'147'483'647;
  EXPECT_EQ(lm::factorize(p * p).parts(), (std::vector<lm::PrimePower>{{p, 2}}));
}

TEST(Factorize, RejectsOutOfRange) {
  EXPECT_THROW(lm::factorize(0), std::out_of_range);
  EXPECT_THROW(lm::factorize(lm::u64{1} << 63), std::out_of_range);
}

TEST(IsPrime, MatchesSieve) {
  const lm::u64 n = 20000;
  std::vector<bool> composite(n + 1, false);
  for (lm::u64 i = 2; i * i <= n; ++i)
    if (!composite[i])
      for (lm::u64 j = i * i; j <= n; j += i) composite[j] = true;
  for (lm::u64 k = 0; k <= n; ++k) EXPECT_EQ(lm::is_prime(k), k >= 2 && !composite[k]) << k;
  EXPECT_FALSE(lm::is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Multiplicative, PhiOmegaTauExamples) {
  EXPECT_EQ(lm::euler_phi(lm::factorize(1)), 1u);
  EXPECT_EQ(lm::euler_phi(lm::factorize(12)), 4u);
  EXPECT_EQ(lm::euler_phi(lm::factorize(10007)), 10006u);
  EXPECT_EQ(lm::omega(lm::factorize(30)), 3u);
  EXPECT_EQ(lm::tau(lm::factorize(36)), 9u);
}

TEST(Multiplicative, AgreeWithCounting) {
  for (lm::u64 n = 1; n <= 600; ++n) {
    const auto f = lm::factorize(n);
    EXPECT_EQ(lm::euler_phi(f), oracle::phi(n)) << n;
    EXPECT_EQ(lm::tau(f), oracle::tau(n)) << n;
  }
}

TEST(Multiplicative, SquarefreeDivisorsAndMobius) {
  const auto ds = lm::squarefree_divisors(lm::factorize(60));
  std::set<std::pair<lm::u64, int>> got;
  for (const auto& d : ds) got.insert({d.divisor, d.mobius});
  const std::set<std::pair<lm::u64, int>> want{{1, 1}, {2, -1}, {3, -1}, {5, -1},
                                                {6, 1}, {10, 1}, {15, 1}, {30, -1}};
  EXPECT_EQ(got, want);
  // sum_{d | n} mu(d) = 0 for n > 1.
  for (lm::u64 n = 2; n < 300; ++n) {
    int s = 0;
    for (const auto& d : lm::squarefree_divisors(lm::factorize(n))) s += d.mobius;
    EXPECT_EQ(s, 0) << n;
  }
}

TEST(DivisorPairs, MatchesScan) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    const lm::u64 s = 1 + rng() % 50000;
    const lm::u64 n_max = 1 + rng() % 400;
    const lm::u64 lo = 1 + rng() % 2000;
    const lm::u64 hi = lo + rng() % 5000;
    EXPECT_EQ(lm::divisor_pairs_in_box(s, n_max, lo, hi), oracle::divisor_pairs(s, n_max, lo, hi))
        << s << " " << n_max << " " << lo << " " << hi;
  }
  EXPECT_EQ(lm::divisor_pairs_in_box(0, 5, 1, 10), 0u);
  EXPECT_EQ(lm::divisor_pairs_in_box(12, 12, 1, 13), 6u);
}

TEST(ModInverse, ProductIsOne) {
  for (lm::u64 q = 2; q < 200; ++q)
    for (std::int64_t a = -q; a < static_cast<std::int64_t>(q); ++a) {
      if (std::gcd<lm::u64, lm::u64>(static_cast<lm::u64>(a < 0 ? -a : a), q) != 1) {
        EXPECT_THROW(lm::mod_inverse(a, q), std::domain_error);
        continue;
      }
      const lm::u64 inv = lm::mod_inverse(a, q);
      const auto r = ((a % static_cast<std::int64_t>(q)) + static_cast<std::int64_t>(q)) % static_cast<std::int64_t>(q);
      EXPECT_EQ(lm::mul_mod(static_cast<lm::u64>(r), inv, q), 1u % q);
    }
}

TEST(PrimitiveRoot, SmallestGenerator) {
  EXPECT_EQ(lm::primitive_root_odd_prime_power(3, 1), 2u);
  EXPECT_EQ(lm::primitive_root_odd_prime_power(7, 1), 3u);
  EXPECT_EQ(lm::primitive_root_odd_prime_power(9, 1), 2u);
  EXPECT_EQ(lm::primitive_root_odd_prime_power(5, 2), 2u);
}

// The listed generators must generate the whole unit group and have the
// stated orders.
TEST(CrtUnitGroup, GeneratesUnits) {
  for (lm::u64 q = 2; q <= 500; ++q) {
    const auto f = lm::factorize(q);
    const auto comps = lm::crt_unit_group(f);
    lm::u64 prod = 1;
    std::vector<lm::u64> group{1 % q};
    for (const auto& c : comps) {
      EXPECT_EQ(lm::pow_mod(c.generator, c.order, q), 1u % q) << q;
      for (lm::u64 d = 1; d < c.order; ++d) {
        if (c.order % d == 0) {
          EXPECT_NE(lm::pow_mod(c.generator, d, q), 1u) << q;
        }
      }
      prod *= c.order;
      std::vector<lm::u64> next;
      for (lm::u64 x : group)
        for (lm::u64 k = 0, y = x; k < c.order; ++k, y = y * c.generator % q) next.push_back(y);
      group = next;
    }
    EXPECT_EQ(prod, lm::euler_phi(f)) << q;
    std::set<lm::u64> distinct(group.begin(), group.end());
    EXPECT_EQ(distinct.size(), lm::euler_phi(f)) << q;
  }
}
