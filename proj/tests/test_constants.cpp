#include <gtest/gtest.h>

#include <numbers>

#include "lmoment/constants.hpp"
#include "oracles.hpp"

namespace lm = lmoment;

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
}

TEST(Zeta3, MatchesSeriesOracle) { EXPECT_NEAR(lm::zeta3(), oracle::zeta3(), 1e-15); }

TEST(Beta, Examples) {
  EXPECT_NEAR(lm::beta(lm::factorize(2)), kPi2 / 8, 1e-15);
  EXPECT_NEAR(lm::beta(lm::factorize(3)), 4 * kPi2 / 27, 1e-15);
  EXPECT_NEAR(lm::beta(lm::factorize(6)), 1.096622711232151, 1e-14);
  // Depends only on the radical.
  EXPECT_DOUBLE_EQ(lm::beta(lm::factorize(12)), lm::beta(lm::factorize(6)));
  EXPECT_THROW(lm::beta(lm::factorize(1)), std::out_of_range);
}

TEST(Prefactor, ClosedForm) {
  EXPECT_NEAR(lm::gamma_prefactor(lm::Factorization{}), kPi2 / (3 * lm::zeta3()), 1e-15);
  EXPECT_NEAR(lm::gamma_prefactor(lm::factorize(3)), kPi2 / (3 * lm::zeta3()) * 12.0 / 13.0, 1e-15);
}

TEST(DoubleSum, EvenModulusVanishesExactly) {
  for (lm::u64 q : {2u, 4u, 6u, 10u, 30u, 1024u}) {
    EXPECT_EQ(lm::gamma_double_sum(q, 5000).partial_sum, 0.0) << q;
    const auto g = lm::gamma(lm::factorize(q), 5000);
    EXPECT_EQ(g.value, 0.0);
    EXPECT_EQ(g.error_bound, 0.0);
  }
}

TEST(DoubleSum, MatchesQuadraticLoop) {
  for (lm::u64 q : {1u, 3u, 5u, 9u, 15u, 21u, 105u, 1155u, 10007u}) {
    for (lm::u64 T : {2u, 3u, 10u, 97u, 500u, 1500u}) {
      const double fast = q == 1 ? lm::gamma_double_sum_unrestricted(T).partial_sum
                                 : lm::gamma_double_sum(q, T).partial_sum;
      const double ref = oracle::double_sum(q, T);
      EXPECT_NEAR(fast, ref, 1e-12 * std::max(1.0, ref)) << q << " " << T;
    }
  }
}

TEST(DoubleSum, TailBoundIsSound) {
  const double target = 2 * lm::zeta3();
  for (lm::u64 T : {10u, 100u, 1000u, 10000u}) {
    const auto s = lm::gamma_double_sum_unrestricted(T);
    EXPECT_GT(target - s.partial_sum, 0.0);
    EXPECT_LE(target - s.partial_sum, s.tail_bound) << T;
    EXPECT_EQ(s.cutoff, T);
  }
}

TEST(DoubleSum, MonotoneInTruncation) {
  double prev = 0;
  for (lm::u64 T = 2; T < 400; T += 7) {
    const double v = lm::gamma_double_sum(7, T).partial_sum;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(DoubleSum, RejectsTinyTruncation) {
  EXPECT_THROW(lm::gamma_double_sum(3, 1), std::out_of_range);
  EXPECT_THROW(lm::gamma_double_sum(1, 100), std::out_of_range);
}

TEST(Alpha, EvenModulusIsBetaOnly) {
  const auto a = lm::alpha(2, 1000);
  EXPECT_NEAR(a.value, kPi2 / 32, 1e-15);
  EXPECT_EQ(a.error_bound, 0.0);
  EXPECT_DOUBLE_EQ(lm::alpha(4, 1000).value, a.value);
}

TEST(Alpha, ModThreeBracketsTheLimit) {
  const auto a = lm::alpha(3, lm::kDefaultTruncation);
  const auto g = lm::gamma(lm::factorize(3), lm::kDefaultTruncation);
  EXPECT_NEAR(a.value, (4 * kPi2 / 27 + g.value) * 4 / 9, 1e-15);
  EXPECT_LT(g.error_bound, 3e-4 * lm::gamma_prefactor(lm::factorize(3)));
  // Raising T moves gamma up by less than the earlier bound.
  const auto g2 = lm::gamma(lm::factorize(3), 4 * lm::kDefaultTruncation);
  EXPECT_GE(g2.value, g.value);
  EXPECT_LE(g2.value - g.value, g.error_bound);
}

TEST(Alpha, PositiveAndBounded) {
  for (lm::u64 q = 2; q < 200; ++q) {
    const auto a = lm::alpha(q, 2000);
    EXPECT_GT(a.value, 0.0);
    EXPECT_LT(a.value, kPi2 / 6 + 2 * kPi2 / 3) << q;
  }
}
