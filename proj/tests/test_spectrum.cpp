#include "cvhbac/errors.hpp"
#include "cvhbac/hbac.hpp"
#include "cvhbac/spectrum.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cvhbac;

namespace {

double gap(double ga, double gb) {
  return relative_entropy_gibbs(bose_occupation(ga), bose_occupation(gb));
}

// Golden-section minimum of gap(g0, x) + gap(x, gN) over x in (g0, gN).
double golden_section_n2(double g0, double gN) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = g0, hi = gN;
  auto f = [&](double x) { return gap(g0, x) + gap(x, gN); };
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200; ++i) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo); f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Spectrum, ProblemValidation) {
  EXPECT_THROW(SpectrumProblem(1.0, 1.0, 2), DomainError);
  EXPECT_THROW(SpectrumProblem(0.0, 1.0, 2), DomainError);
  EXPECT_THROW(SpectrumProblem(1.0, 2.0, 0), ContractError);
  EXPECT_THROW(SpectrumProblem::from_lambda(10.0, 1.0, 2), DomainError);
  const SpectrumProblem p = SpectrumProblem::from_lambda(10.0, 3.0, 2);
  EXPECT_NEAR(p.g0, std::log(1.1), 1e-15);
  EXPECT_NEAR(p.gN, 3.0 * std::log(1.1), 1e-15);
}

TEST(Spectrum, SingleModeHasNoFreedom) {
  const SpectrumProblem p(0.5, 2.0, 1);
  const SpectrumSolution s = solve_stationarity(p);
  ASSERT_EQ(s.g.size(), 2);
  EXPECT_NEAR(s.sigma, gap(0.5, 2.0), 1e-14);
  EXPECT_TRUE(std::isinf(s.min_hessian_eigenvalue));
}

TEST(Spectrum, TwoModeOptimumMatchesGoldenSection) {
  for (double lambda : {1.5, 5.0, 20.0}) {
    const SpectrumProblem p = SpectrumProblem::from_lambda(10.0, lambda, 2);
    const SpectrumSolution s = solve_stationarity(p);
    const double x = golden_section_n2(p.g0, p.gN);
    EXPECT_NEAR(s.g(1), x, 1e-6 * x) << lambda;
    EXPECT_NEAR(s.sigma, gap(p.g0, x) + gap(x, p.gN), 1e-12);
    EXPECT_LT(s.residual, 1e-12);
    EXPECT_GT(s.min_hessian_eigenvalue, 0.0);
  }
}

TEST(Spectrum, PerturbingInteriorOccupationIncreasesSigma) {
  const SpectrumProblem p = SpectrumProblem::from_lambda(10.0, 8.0, 6);
  const SpectrumSolution s = solve_stationarity(p);
  for (int j = 1; j < p.N; ++j) {
    for (double sign : {-1.0, 1.0}) {
      Eigen::VectorXd g = s.g;
      const double n = bose_occupation(g(j)) + sign * 1e-4;
      g(j) = std::log1p(1.0 / n);
      EXPECT_GT(sigma_star_of_spectrum(g), s.sigma) << "j=" << j << " sign=" << sign;
    }
  }
}

TEST(Spectrum, SigmaOfSpectrumIsSwapChainSigma) {
  const Eigen::VectorXd g = (Eigen::VectorXd(4) << 0.3, 0.6, 1.1, 2.0).finished();
  const MachineSpec spec(1.0, 0.3, {0.6, 1.1, 2.0});
  EXPECT_NEAR(sigma_star_of_spectrum(g), entropy_production_star(spec), 1e-14);
}

TEST(Spectrum, LogTanhQuarterIsStable) {
  for (double g : {1e-3, 0.1, 1.0, 5.0, 30.0}) {
    EXPECT_NEAR(log_tanh_quarter(g), std::log(std::tanh(g / 4.0)), 1e-13) << g;
  }
  EXPECT_NEAR(log_tanh_quarter(1e-12), std::log(1e-12 / 4.0), 1e-9);
  EXPECT_NEAR(log_tanh_quarter(200.0), -2.0 * std::exp(-100.0), 1e-50);
}

TEST(Spectrum, AnalyticTrajectoryEndpointsAndMonotone) {
  const SpectrumProblem p = SpectrumProblem::from_lambda(10.0, 20.0, 10);
  const Eigen::VectorXd g = analytic_trajectory(p);
  EXPECT_NEAR(g(0), p.g0, 1e-13);
  EXPECT_NEAR(g(10), p.gN, 1e-12);
  for (int j = 0; j < 10; ++j) EXPECT_LT(g(j), g(j + 1));
  // ln tanh(g/4) is linear in j along the trajectory.
  const double step = (log_tanh_quarter(p.gN) - log_tanh_quarter(p.g0)) / 10.0;
  for (int j = 0; j <= 10; ++j) {
    EXPECT_NEAR(log_tanh_quarter(g(j)), log_tanh_quarter(p.g0) + j * step, 1e-12);
  }
}

TEST(Spectrum, LargeNFormula) {
  const SpectrumProblem p(0.2, 3.0, 8);
  const double len = std::log(std::tanh(3.0 / 4.0) / std::tanh(0.2 / 4.0));
  EXPECT_NEAR(sigma_large_n(p), len * len / 16.0, 1e-14);
}

TEST(Spectrum, MoreModesProduceLess) {
  double prev = INFINITY;
  for (int N : {1, 2, 4, 8, 16}) {
    const double s = solve_stationarity(SpectrumProblem::from_lambda(10.0, 6.0, N)).sigma;
    EXPECT_LT(s, prev) << N;
    prev = s;
  }
}

TEST(Spectrum, SweepIsSortedAndDeterministic) {
  const std::vector<double> lambdas = {4.0, 1.5, 2.0};
  const auto a = sweep_sigma_vs_lambda(10.0, lambdas, {2, 1}, 1);
  const auto b = sweep_sigma_vs_lambda(10.0, lambdas, {2, 1}, 3);
  ASSERT_EQ(a.size(), 6u);
  EXPECT_EQ(a.front().N, 1);
  EXPECT_EQ(a.front().lambda, 1.5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_TRUE(a[i].solution && b[i].solution);
    EXPECT_EQ(a[i].solution->sigma, b[i].solution->sigma);
  }
}

TEST(Spectrum, LogSpaced) {
  const auto v = log_spaced(1.05, 20.0, 60);
  ASSERT_EQ(v.size(), 60u);
  EXPECT_DOUBLE_EQ(v.front(), 1.05);
  EXPECT_NEAR(v.back(), 20.0, 1e-13);
  EXPECT_NEAR(v[1] / v[0], v[59] / v[58], 1e-12);
}
