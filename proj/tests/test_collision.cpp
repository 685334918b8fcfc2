#include "cvhbac/collision.hpp"
#include "cvhbac/errors.hpp"
#include "cvhbac/gaussian.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cvhbac;

namespace {

CollisionParams occupations(int p, double chi_t, double ns, double nm) {
  return CollisionParams::from_occupations(p, 1.0, chi_t, ns, nm);
}

}  // namespace

TEST(Collision, ParamsFromOccupations) {
  const CollisionParams c = occupations(2, 5e-3, 2.0, 1.5);
  EXPECT_EQ(c.beta, 1.0);
  EXPECT_NEAR(bose_occupation(c.omega0), 2.0, 1e-14);
  EXPECT_NEAR(bose_occupation(c.omega1), 1.5, 1e-14);
  EXPECT_THROW(occupations(0, 1e-2, 2.0, 1.5), DomainError);
  EXPECT_THROW(occupations(1, 1e-2, -2.0, 1.5), DomainError);
}

TEST(Collision, Coefficients) {
  const IterationCoefficients k = iteration_coefficients(occupations(2, 0.1, 2.0, 1.5));
  const double pre = 0.01 * 2.0;
  EXPECT_NEAR(k.a, pre * (6.25 - 2.25), 1e-15);
  EXPECT_NEAR(k.b, pre * 2.25, 1e-15);
  EXPECT_NEAR(k.c_fano, pre * (6.25 + 3 * 2.25), 1e-15);
  EXPECT_NEAR(k.fixed_point(), 0.5625, 1e-15);
}

TEST(Collision, ShortTimeUpdate) {
  const CollisionParams c = occupations(3, 0.02, 2.0, 1.5);
  const double pre = 4e-4 * 6.0;
  const double expect = 2.0 - pre * (std::pow(2.5, 3) * 2.0 - std::pow(1.5, 3) * 3.0);
  EXPECT_NEAR(short_time_update(c), expect, 1e-14);
  EXPECT_NEAR(short_time_delta(c), expect - 2.0, 1e-14);
}

TEST(Collision, CoolingCondition) {
  EXPECT_FALSE(cooling_condition(1, 1.0, 1.0));
  EXPECT_TRUE(cooling_condition(2, 1.0, 0.6));
  EXPECT_FALSE(cooling_condition(2, 1.0, 0.5));
  EXPECT_NEAR(cooling_threshold_nbar(2, 1.5), 0.5625, 1e-15);
  // Equals 1/(e^{p beta omega1} - 1) when nM comes from (beta, omega1).
  const double nm = bose_occupation(0.7);
  EXPECT_NEAR(cooling_threshold_nbar(3, nm), bose_occupation(2.1), 1e-13);
}

TEST(Collision, CrossingTime) {
  EXPECT_EQ(crossing_time(occupations(1, 1e-2, 1.5, 1.5)), 0.0);
  const auto tc = crossing_time(occupations(1, 1e-2, 2.0, 1.5));
  ASSERT_TRUE(tc.has_value());
  EXPECT_NEAR(*tc, 1.0, 1e-14);
  EXPECT_FALSE(crossing_time(occupations(2, 1e-2, 1.0, 1.5)).has_value());
}

TEST(Collision, AsymptoteValues) {
  EXPECT_NEAR(asymptote(occupations(1, 5e-3, 2.0, 1.5)), 1.5, 1e-14);
  EXPECT_NEAR(asymptote(occupations(2, 5e-3, 2.0, 1.5)), 0.5625, 1e-14);
  EXPECT_NEAR(asymptote(occupations(3, 5e-3, 2.0, 1.5)), 3.375 / (15.625 - 3.375), 1e-14);
}

TEST(Collision, AsymptoticTemperatureEnhancement) {
  for (int p : {1, 2, 3}) {
    const CollisionParams c = CollisionParams::from_frequencies(p, 1.0, 5e-3, 0.8, 1.0, 0.7);
    EXPECT_NEAR(effective_beta(asymptote(c), c.omega0), p * 0.7 * 0.8, 1e-12);
    EXPECT_NEAR(asymptotic_beta(c), p * 0.7 * 0.8, 1e-15);
  }
}

TEST(Collision, AsymptoteIsFixedPointOfShortTimeUpdate) {
  for (int p : {1, 2, 3}) {
    CollisionParams c = occupations(p, 1e-2, 2.0, 1.5);
    c.nbar_s0 = asymptote(c);
    EXPECT_NEAR(short_time_update(c), c.nbar_s0, 1e-14);
  }
}

TEST(Collision, ClosedFormMatchesIteration) {
  const CollisionParams c = occupations(2, 3e-2, 2.0, 1.5);
  const IterationCoefficients k = iteration_coefficients(c);
  double x = 2.0;
  for (long l = 1; l <= 300; ++l) {
    x = (1.0 - k.a) * x + k.b;
    if (l % 50 == 0) EXPECT_NEAR(iterate_closed_form(c, l), x, 1e-12) << l;
  }
  EXPECT_EQ(iterate_closed_form(c, 0), 2.0);
}

TEST(Collision, MonotoneApproach) {
  const CollisionParams c = occupations(2, 1e-2, 2.0, 1.5);
  double prev = iterate_closed_form(c, 0);
  for (long l = 100; l <= 20000; l += 100) {
    const double x = iterate_closed_form(c, l);
    EXPECT_LT(x, prev);
    EXPECT_GT(x, asymptote(c));
    prev = x;
  }
}

TEST(Collision, FanoClosedFormMatchesIteratedRecursion) {
  for (int p : {1, 2, 3}) {
    const CollisionParams c = occupations(p, 2e-2, 2.0, 1.5);
    for (long l : {0L, 1L, 7L, 250L, 4000L}) {
      const FanoPoint a = fano_closed_form(c, l);
      const FanoPoint b = fano_iterated(c, l);
      EXPECT_NEAR(a.mean_n, b.mean_n, 1e-11);
      EXPECT_NEAR(a.second_moment, b.second_moment, 1e-10);
    }
    EXPECT_NEAR(fano_closed_form(c, 0).q, 0.0, 1e-15);
  }
}

TEST(Collision, FanoAsymptoteIsThermal) {
  for (int p : {1, 2, 3}) {
    const FanoPoint f = fano_asymptote(occupations(p, 1e-2, 2.0, 1.5));
    EXPECT_NEAR(f.q, 0.0, 1e-12) << p;
  }
}

TEST(Collision, ZeroCouplingKeepsGibbsFano) {
  const CollisionParams c = occupations(2, 0.0, 2.0, 1.5);
  for (long l : {0L, 10L, 1000L}) EXPECT_EQ(fano_closed_form(c, l).q, 0.0);
}

TEST(Collision, RateScalesWithFactorial) {
  // a / [(1 + nM)^p - nM^p] = (chi t)^2 p!
  for (int p : {1, 2, 3}) {
    const double nm = 1.5;
    const double a = iteration_coefficients(occupations(p, 1e-2, 2.0, nm)).a;
    EXPECT_NEAR(a / (std::pow(1 + nm, p) - std::pow(nm, p)), 1e-4 * factorial(p), 1e-18);
  }
}

TEST(Collision, ValidityErrors) {
  const CollisionParams big = occupations(3, 1.0, 2.0, 1.5);
  EXPECT_THROW(iterate_closed_form(big, 10), ValidityError);
  EXPECT_THROW(asymptote(big), ValidityError);
  EXPECT_THROW(fano_closed_form(big, 10), ValidityError);
  EXPECT_FALSE(big.perturbative());
  EXPECT_TRUE(occupations(2, 5e-3, 2.0, 1.5).perturbative());
}
