#include <gtest/gtest.h>

#include <numbers>

#include "lmoment/harmonic.hpp"
#include "lmoment/lvalues.hpp"
#include "oracles.hpp"

namespace lm = lmoment;

namespace {

constexpr double kPi = std::numbers::pi;

lm::Character first_nonprincipal(const lm::CharacterGroup& g) { return lm::enumerate_nonprincipal(g).front(); }

}  // namespace

TEST(Digamma, ClassicalValues) {
  // psi(1/2) = -gamma - 2 ln 2, psi(1/4) = -gamma - pi/2 - 3 ln 2.
  EXPECT_NEAR(lm::digamma_rational(1, 2), -1.9635100260214235, 1e-14);
  EXPECT_NEAR(lm::digamma_rational(1, 4), -4.2274535333762655, 1e-14);
  EXPECT_NEAR(lm::digamma_rational(3, 4), -lm::kEulerGamma + kPi / 2 - 3 * std::log(2.0), 1e-14);
  EXPECT_THROW(lm::digamma_rational(0, 5), std::out_of_range);
  EXPECT_THROW(lm::digamma_rational(5, 5), std::out_of_range);
}

TEST(Digamma, TableMatchesSeriesOracle) {
  for (lm::u64 q : {2u, 3u, 7u, 10u, 64u, 101u, 360u}) {
    const lm::DigammaTable t(q);
    for (lm::u64 a = 1; a < q; ++a) {
      const double ref = oracle::digamma(static_cast<double>(a) / static_cast<double>(q));
      EXPECT_NEAR(t.psi(a), ref, 1e-12 * (1 + std::abs(ref))) << q << " " << a;
      EXPECT_NEAR(lm::digamma_rational(a, q), t.psi(a), 1e-12 * (1 + std::abs(ref)));
    }
    EXPECT_THROW(t.psi(0), std::out_of_range);
    EXPECT_THROW(t.psi(q), std::out_of_range);
  }
}

// psi(1 - x) - psi(x) = pi cot(pi x).
TEST(Digamma, Reflection) {
  const lm::u64 q = 97;
  const lm::DigammaTable t(q);
  for (lm::u64 a = 1; a < q; ++a) {
    const double x = static_cast<double>(a) / q;
    EXPECT_NEAR(t.psi(q - a) - t.psi(a), kPi / std::tan(kPi * x), 1e-11);
  }
}

TEST(LOne, ClassicalAnchors) {
  const lm::CharacterGroup g3(3), g4(4), g5(5);
  EXPECT_NEAR(lm::l_one(first_nonprincipal(g3)).value.real(), kPi / (3 * std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(lm::l_one(first_nonprincipal(g4)).value.real(), kPi / 4, 1e-12);
  // Real character mod 5: L = 2 ln(golden ratio)/sqrt 5.
  const auto chi5 = g5.character({2});
  const double golden = (1 + std::sqrt(5.0)) / 2;
  EXPECT_NEAR(lm::l_one(chi5).value.real(), 2 * std::log(golden) / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(lm::l_one(chi5).value.imag(), 0.0, 1e-14);
  EXPECT_EQ(lm::l_one(chi5).method, lm::LMethod::Digamma);
}

TEST(LOne, PrincipalRejected) {
  const lm::CharacterGroup g(7);
  EXPECT_THROW(lm::l_one(g.principal()), std::domain_error);
  EXPECT_THROW(lm::l_one_oracle(g.principal(), 100), std::domain_error);
}

TEST(LOne, MatchesIndependentDigammaOracle) {
  for (lm::u64 q : {3u, 8u, 12u, 15u, 16u, 21u}) {
    const lm::CharacterGroup g(q);
    for (const auto& chi : lm::enumerate_nonprincipal(g)) {
      const auto ref = oracle::l_one(lm::values(chi));
      EXPECT_LT(std::abs(lm::l_one(chi).value - ref), 1e-12) << q;
    }
  }
}

TEST(LOne, ConjugateSymmetryAndRealCharacters) {
  for (lm::u64 q : {11u, 20u, 63u}) {
    const lm::CharacterGroup g(q);
    const lm::DigammaTable t(q);
    for (const auto& chi : lm::enumerate_nonprincipal(g)) {
      const auto l = lm::l_one(chi, t).value;
      EXPECT_LT(std::abs(lm::l_one(lm::conjugate(chi), t).value - std::conj(l)), 1e-13);
      if (chi.is_real()) {
        EXPECT_NEAR(l.imag(), 0.0, 1e-13);
        EXPECT_GT(l.real(), 0.0);
      }
      EXPECT_GT(std::abs(l), 0.0);
    }
  }
}

TEST(LOne, TableModulusMismatch) {
  const lm::CharacterGroup g(7);
  EXPECT_THROW(lm::l_one(first_nonprincipal(g), lm::DigammaTable(9)), std::domain_error);
}

TEST(Oracle, AgreesWithinTailBound) {
  for (lm::u64 q = 3; q <= 40; ++q) {
    const lm::CharacterGroup g(q);
    const auto h = lm::harmonic_class_table(q, lm::default_oracle_cutoff(q));
    const lm::DigammaTable t(q);
    for (const auto& chi : lm::enumerate_nonprincipal(g)) {
      const auto orc = lm::l_one_oracle(chi, h);
      EXPECT_EQ(orc.method, lm::LMethod::PartialSum);
      EXPECT_DOUBLE_EQ(orc.error_bound, static_cast<double>(q) / 1e6);
      EXPECT_LE(std::abs(orc.value - lm::l_one(chi, t).value), orc.error_bound) << q;
    }
  }
}

TEST(Oracle, CutoffGuard) {
  const lm::CharacterGroup g(11);
  EXPECT_THROW(lm::l_one_oracle(first_nonprincipal(g), 120), std::out_of_range);
  EXPECT_NO_THROW(lm::l_one_oracle(first_nonprincipal(g), 121));
}

TEST(HarmonicTable, ClassSums) {
  const auto h = lm::harmonic_class_table(6);
  EXPECT_EQ(h.cutoff(), 36u);
  EXPECT_EQ(h[0], 0.0);
  EXPECT_EQ(h[2], 0.0);
  double s1 = 0, s5 = 0;
  for (int u = 1; u <= 36; u += 6) s1 += 1.0 / u;
  for (int u = 5; u <= 36; u += 6) s5 += 1.0 / u;
  EXPECT_NEAR(h[1], s1, 1e-15);
  EXPECT_NEAR(h[5], s5, 1e-15);
  EXPECT_EQ(h[7], h[1]);
}

TEST(HarmonicTable, ThreadCountDoesNotChangeBits) {
  const auto a = lm::harmonic_class_table(997, 997 * 997, 1);
  const auto b = lm::harmonic_class_table(997, 997 * 997, 4);
  EXPECT_EQ(a.values(), b.values());
}

TEST(BTrunc, ModThreeIsClassDifference) {
  const lm::CharacterGroup g(3);
  const auto h = lm::harmonic_class_table(3);
  const auto b = lm::b_trunc(first_nonprincipal(g), h);
  EXPECT_NEAR(b.real(), h[1] - h[2], 1e-15);
  // 1 - 1/2 + 1/4 - 1/5 + 1/7 - 1/8.
  EXPECT_NEAR(b.real(), 1 - 0.5 + 0.25 - 0.2 + 1.0 / 7 - 0.125, 1e-15);
}

TEST(BTrunc, LinearInTable) {
  const lm::u64 q = 13;
  const lm::CharacterGroup g(q);
  const auto h = lm::harmonic_class_table(q);
  std::vector<double> doubled = h.values();
  for (double& x : doubled) x *= 2;
  const lm::HarmonicClassTable h2(q, h.cutoff(), doubled);
  for (const auto& chi : lm::enumerate_all(g)) {
    EXPECT_LT(std::abs(lm::b_trunc(chi, h2) - 2.0 * lm::b_trunc(chi, h)), 1e-14);
  }
  EXPECT_THROW(lm::b_trunc(g.principal(), lm::harmonic_class_table(5)), std::domain_error);
}

TEST(BTrunc, ApproachesLOneAtRateOneOverQ) {
  const lm::u64 q = 101;
  const lm::CharacterGroup g(q);
  const auto h = lm::harmonic_class_table(q);
  for (const auto& chi : lm::enumerate_nonprincipal(g)) {
    EXPECT_LE(std::abs(lm::b_trunc(chi, h) - lm::l_one(chi).value), 1.0 / q);
  }
}
