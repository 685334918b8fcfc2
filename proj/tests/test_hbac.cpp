#include "cvhbac/errors.hpp"
#include "cvhbac/hbac.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cvhbac;

namespace {

// sum_k p_k ln(p_k / q_k) over geometric laws, truncated once the tail is negligible.
double relative_entropy_by_sum(double a, double b) {
  double d = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double lp = k * std::log(a / (a + 1)) - std::log(a + 1);
    const double lq = k * std::log(b / (b + 1)) - std::log(b + 1);
    const double p = std::exp(lp);
    d += p * (lp - lq);
    if (p < 1e-30 && k > 10) break;
  }
  return d;
}

}  // namespace

TEST(Hbac, SpecValidation) {
  EXPECT_THROW(MachineSpec(1.0, 1.0, {}), ContractError);
  EXPECT_THROW(MachineSpec(1.0, 1.0, {2.0, 1.5}), ContractError);
  EXPECT_THROW(MachineSpec(0.0, 1.0, {2.0}), DomainError);
  EXPECT_THROW(MachineSpec(1.0, -1.0, {2.0}), DomainError);
  EXPECT_THROW(MachineSpec(1.0, 1.0, {0.0, 2.0}), DomainError);
}

TEST(Hbac, FirstCoolingMode) {
  EXPECT_EQ(MachineSpec(1.0, 1.0, {0.5, 1.0, 1.2, 3.0}).first_cooling_mode(), 2);
  EXPECT_EQ(MachineSpec(1.0, 1.0, {0.5, 1.0}).first_cooling_mode(), -1);
  const MachineSpec trimmed = MachineSpec(1.0, 1.0, {0.5, 1.2, 3.0}).without_inert_modes();
  EXPECT_EQ(trimmed.machine_modes(), 2);
  EXPECT_THROW(MachineSpec(1.0, 1.0, {0.5}).without_inert_modes(), ContractError);
}

TEST(Hbac, CoolingLimitSingleMachineMode) {
  const CoolingLimit lim = gaussian_cooling_limit(MachineSpec(1.0, 1.0, {2.0}));
  EXPECT_NEAR(lim.beta_star, 2.0, 1e-15);
  EXPECT_NEAR(lim.nth, 1.0 / (std::exp(2.0) - 1.0), 1e-15);
  EXPECT_FALSE(lim.no_cooling);
}

TEST(Hbac, NoCoolingKeepsReservoirTemperature) {
  const MachineSpec spec(1.3, 1.0, {0.5});
  const CoolingLimit lim = gaussian_cooling_limit(spec);
  EXPECT_TRUE(lim.no_cooling);
  EXPECT_DOUBLE_EQ(lim.beta_star, 1.3);
  const SwapChain chain = build_swap_chain(spec);
  EXPECT_TRUE(chain.no_cooling);
  EXPECT_TRUE(chain.machine_modes.empty());
  EXPECT_EQ(entropy_production_star(spec), 0.0);
}

TEST(Hbac, SwapChainSaturatesInOneRound) {
  const MachineSpec spec(0.7, 1.0, {0.4, 1.5, 2.2, 4.0});
  const SwapChain chain = build_swap_chain(spec);
  EXPECT_EQ(chain.machine_modes, (std::vector<int>{2, 3, 4}));
  const CoolingTrace trace = run_protocol(spec, chain.unitary, 4);
  for (int r = 1; r <= 4; ++r) {
    EXPECT_NEAR(trace.records[r].beta_eff / (0.7 * 4.0), 1.0, 1e-10) << "round " << r;
  }
  EXPECT_NEAR(trace.records[1].sigma, entropy_production_star(spec), 1e-12);
}

TEST(Hbac, SwapChainHeatAndEntropy) {
  const double beta = 1.0;
  const MachineSpec spec(beta, 1.0, {2.0, 3.0});
  const CoolingTrace trace = run_protocol(spec, build_swap_chain(spec).unitary, 1);
  const double n0 = bose_occupation(1.0), n1 = bose_occupation(2.0), n2 = bose_occupation(3.0);
  // The machine ends as (n2 <- n1, n1 <- n0): heat = 2 (n0 - n1) + 3 (n1 - n2).
  const double q = 2.0 * (n0 - n1) + 3.0 * (n1 - n2);
  EXPECT_NEAR(trace.records[1].heat, q, 1e-13);
  const double sigma = beta * q - (vn_entropy_single_mode(n0) - vn_entropy_single_mode(n2));
  EXPECT_NEAR(trace.records[1].sigma, sigma, 1e-12);
  EXPECT_NEAR(sigma, relative_entropy_by_sum(n0, n1) + relative_entropy_by_sum(n1, n2), 1e-12);
  EXPECT_NEAR(trace.records[1].mutual_info, 0.0, 1e-12);
}

TEST(Hbac, IdentityTraceIsFlat) {
  const MachineSpec spec(1.0, 1.0, {1.5, 3.0});
  const CoolingTrace trace = run_protocol(spec, GaussianUnitary::identity(3), 5);
  ASSERT_EQ(trace.records.size(), 6u);
  for (const RoundRecord& r : trace.records) {
    EXPECT_NEAR(r.nth, spec.system_nbar(), 1e-15);
    EXPECT_EQ(r.sigma, 0.0);
    EXPECT_EQ(r.heat, 0.0);
  }
}

TEST(Hbac, RandomRechargersObeyBookkeeping) {
  const MachineSpec spec(1.0, 1.0, {0.8, 1.7, 2.5});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CoolingTrace trace = run_protocol(spec, random_gaussian_unitary(4, seed, 0.5), 5);
    EXPECT_LT(trace.decomposition_residual, 1e-8);
    for (const RoundRecord& r : trace.records) {
      EXPECT_GE(r.round_sigma, -1e-10);
      EXPECT_GE(r.nth, bose_occupation(2.5) - 1e-12);
    }
  }
}

TEST(Hbac, RelativeEntropyGibbs) {
  for (auto [a, b] : {std::pair{0.5, 1.5}, {3.0, 0.2}, {1e-6, 2e-6}, {10.0, 10.0}}) {
    EXPECT_NEAR(relative_entropy_gibbs(a, b), relative_entropy_by_sum(a, b), 1e-12)
        << a << " " << b;
  }
  EXPECT_THROW(relative_entropy_gibbs(0.0, 1.0), DomainError);
}

TEST(Hbac, RejectsMismatchedRecharger) {
  const MachineSpec spec(1.0, 1.0, {2.0});
  EXPECT_THROW(run_protocol(spec, GaussianUnitary::identity(3), 1), ContractError);
  EXPECT_THROW(run_protocol(spec, GaussianUnitary::identity(2), -1), ContractError);
}
