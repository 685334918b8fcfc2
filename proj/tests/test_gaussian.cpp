#include "cvhbac/errors.hpp"
#include "cvhbac/gaussian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace cvhbac;

namespace {

GaussianState thermal(std::vector<double> nbars) {
  return thermal_state(std::span<const double>(nbars));
}

// sqrt(det V) - 1/2 for the quadrature covariance (vacuum = I/2).
double thermal_excitation_from_covariance(const GaussianState& s) {
  return std::sqrt(s.quadrature_covariance().determinant()) - 0.5;
}

}  // namespace

TEST(Gaussian, BoseOccupation) {
  EXPECT_NEAR(bose_occupation(std::log(2.0)), 1.0, 1e-15);
  EXPECT_NEAR(bose_occupation(std::log1p(1.0 / 1.5)), 1.5, 1e-14);
  EXPECT_NEAR(bose_occupation(50.0), std::exp(-50.0), 1e-35);
  EXPECT_THROW(bose_occupation(0.0), DomainError);
  EXPECT_THROW(bose_occupation(-1.0), DomainError);
}

TEST(Gaussian, GibbsStateMatchesOccupations) {
  const std::vector<GibbsMode> modes = {{1.0, 1.0}, {2.0, 0.5}, {3.0, 2.0}};
  const GaussianState s = gibbs_state(modes);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(s.mean_excitation(j), modes[j].nbar(), 1e-15);
    EXPECT_EQ(s.nu()(j, j), cplx(0.0));
  }
  EXPECT_NEAR(s.mu()(0, 0).real(), modes[0].nbar() + 0.5, 1e-15);
}

TEST(Gaussian, TinyOccupationsSurvive) {
  // 1/(e^40 - 1) would vanish next to 1/2 if mu were stored directly.
  const GaussianState s = thermal({bose_occupation(40.0)});
  EXPECT_NEAR(thermal_excitation(s) / std::exp(-40.0), 1.0, 1e-12);
  EXPECT_NEAR(effective_beta(thermal_excitation(s), 1.0), 40.0, 1e-9);
}

TEST(Gaussian, StateValidation) {
  EXPECT_THROW(GaussianState(VectorXcd::Zero(1), MatrixXcd::Constant(1, 1, -0.6),
                             MatrixXcd::Zero(1, 1)),
               InvalidStateError);
  MatrixXcd nu(1, 1);
  nu << 2.0;
  EXPECT_THROW(GaussianState(VectorXcd::Zero(1), MatrixXcd::Constant(1, 1, 1.0), nu),
               InvalidStateError);
  MatrixXcd e(2, 2);
  e << 1.0, cplx(0.0, 1.0), cplx(0.0, 1.0), 1.0;
  EXPECT_THROW(GaussianState(VectorXcd::Zero(2), e, MatrixXcd::Zero(2, 2)), InvalidStateError);
  EXPECT_THROW(GaussianState(VectorXcd::Zero(2), MatrixXcd::Zero(1, 1), MatrixXcd::Zero(2, 2)),
               ContractError);
  EXPECT_THROW(thermal({-0.1}), DomainError);
}

TEST(Gaussian, UnitaryValidation) {
  EXPECT_THROW(GaussianUnitary(VectorXcd::Zero(1), MatrixXcd::Constant(1, 1, 0.5),
                               MatrixXcd::Zero(1, 1)),
               ContractError);
  EXPECT_THROW(make_passive(MatrixXcd::Constant(2, 2, 1.0)), ContractError);
  EXPECT_THROW(make_beam_splitter(0, 0, 2, 0.3), ContractError);
  EXPECT_THROW(make_swap(0, 3, 2), ContractError);
  const GaussianUnitary bad = GaussianUnitary::unchecked(
      VectorXcd::Zero(1), MatrixXcd::Constant(1, 1, 0.5), MatrixXcd::Zero(1, 1));
  EXPECT_GT(bad.residuals().normalization, 0.5);
}

TEST(Gaussian, RandomUnitariesAreSymplectic) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const GaussianUnitary u = random_gaussian_unitary(4, seed);
    const auto r = u.residuals();
    EXPECT_LT(r.normalization, 1e-10);
    EXPECT_LT(r.symmetry, 1e-10);
    EXPECT_LT(r.determinant, 1e-8);
  }
  const GaussianUnitary a = random_gaussian_unitary(3, std::uint64_t{7});
  const GaussianUnitary b = random_gaussian_unitary(3, std::uint64_t{7});
  EXPECT_EQ(a.c(), b.c());
  EXPECT_EQ(a.s(), b.s());
  EXPECT_TRUE(random_gaussian_unitary(3, std::uint64_t{7}, 0.0).is_passive());
}

TEST(Gaussian, BeamSplitterMixesOccupations) {
  const double n0 = 0.7, n1 = 3.2, theta = 0.4;
  const GaussianState out = apply_unitary(thermal({n0, n1}), make_beam_splitter(0, 1, 2, theta));
  const double c2 = std::cos(theta) * std::cos(theta);
  EXPECT_NEAR(out.mean_excitation(0), c2 * n0 + (1 - c2) * n1, 1e-13);
  EXPECT_NEAR(out.mean_excitation(1), (1 - c2) * n0 + c2 * n1, 1e-13);
}

TEST(Gaussian, SwapExchangesModes) {
  const GaussianState out = apply_unitary(thermal({0.1, 2.0, 5.0}), make_swap(0, 2, 3));
  EXPECT_NEAR(out.mean_excitation(0), 5.0, 1e-15);
  EXPECT_NEAR(out.mean_excitation(1), 2.0, 1e-15);
  EXPECT_NEAR(out.mean_excitation(2), 0.1, 1e-15);
}

TEST(Gaussian, SqueezedThermalState) {
  const double n = 1.3, r = 0.8;
  const GaussianState out = apply_unitary(thermal({n}), make_squeezer(std::vector<double>{r}));
  // <a^+a> = n cosh 2r + sinh^2 r
  EXPECT_NEAR(out.mean_excitation(0), n * std::cosh(2 * r) + std::sinh(r) * std::sinh(r), 1e-12);
  EXPECT_NEAR(thermal_excitation(out), n, 1e-12);
  EXPECT_NEAR(thermal_excitation_from_covariance(out), n, 1e-12);
}

TEST(Gaussian, DisplacementShiftsMeanOnly) {
  const cplx alpha(0.3, -1.1);
  const GaussianState out =
      apply_unitary(thermal({0.5}), make_displacement(std::vector<cplx>{alpha}));
  EXPECT_NEAR(out.mean_excitation(0), 0.5 + std::norm(alpha), 1e-14);
  EXPECT_NEAR(thermal_excitation(out), 0.5, 1e-14);
  EXPECT_NEAR(std::abs(out.alpha()(0) - alpha), 0.0, 1e-15);
}

TEST(Gaussian, PhaseShiftRotatesAlpha) {
  const cplx alpha(1.0, 0.0);
  const GaussianState s = apply_unitary(GaussianState::vacuum(1),
                                        make_displacement(std::vector<cplx>{alpha}));
  const GaussianState out = apply_unitary(s, make_phase_shift(std::vector<double>{0.5}));
  EXPECT_NEAR(std::abs(out.alpha()(0) - std::polar(1.0, -0.5)), 0.0, 1e-15);
}

TEST(Gaussian, ThermalExcitationAgreesWithCovarianceDeterminant) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const GaussianState s =
        apply_unitary(thermal({0.2, 1.5, 4.0}), random_gaussian_unitary(3, rng, 1.0));
    for (int j = 0; j < 3; ++j) {
      const int keep[] = {j};
      const GaussianState m = reduce(s, keep);
      EXPECT_NEAR(thermal_excitation(m), thermal_excitation_from_covariance(m),
                  1e-9 * (1.0 + m.mean_excitation(0)));
    }
  }
}

TEST(Gaussian, ComposeMatchesSequentialApplication) {
  const GaussianUnitary u1 = random_gaussian_unitary(3, std::uint64_t{11});
  const GaussianUnitary u2 = random_gaussian_unitary(3, std::uint64_t{12});
  const cplx d[] = {0.2, cplx(0, 1), -0.5};
  const GaussianUnitary disp = make_displacement(d);
  const GaussianState s = thermal({0.3, 1.0, 2.0});
  const GaussianState seq = apply_unitary(apply_unitary(apply_unitary(s, disp), u1), u2);
  const GaussianState once = apply_unitary(s, compose(u2, compose(u1, disp)));
  EXPECT_LT((seq.alpha() - once.alpha()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((seq.excitation() - once.excitation()).cwiseAbs().maxCoeff(), 1e-11);
  EXPECT_LT((seq.nu() - once.nu()).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Gaussian, SymplecticEigenvaluesAreInvariant) {
  const GaussianState s = thermal({3.0, 0.25, 1.0, 1.0});
  const GaussianState out = apply_unitary(s, random_gaussian_unitary(4, std::uint64_t{5}));
  const VectorXd nu = symplectic_eigenvalues(out);
  const double expect[] = {0.75, 1.5, 1.5, 3.5};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(nu(k), expect[k], 1e-9);
  double s_sum = 0.0;
  for (double n : {3.0, 0.25, 1.0, 1.0}) s_sum += vn_entropy_single_mode(n);
  EXPECT_NEAR(gaussian_entropy(out), s_sum, 1e-8);
}

TEST(Gaussian, ReduceAndTensorProduct) {
  const GaussianState a = thermal({0.4});
  const GaussianState b = apply_unitary(thermal({1.0, 2.0}), make_beam_splitter(0, 1, 2, 0.3));
  const GaussianState ab = tensor_product(a, b);
  ASSERT_EQ(ab.modes(), 3);
  const int keep[] = {2, 1};
  const GaussianState r = reduce(ab, keep);
  EXPECT_NEAR(r.mean_excitation(0), b.mean_excitation(1), 1e-15);
  EXPECT_NEAR(std::abs(r.excitation()(0, 1) - b.excitation()(1, 0)), 0.0, 1e-15);
  const int dup[] = {1, 1};
  EXPECT_THROW(reduce(ab, dup), ContractError);
}

TEST(Gaussian, EffectiveBetaAndEntropy) {
  EXPECT_NEAR(effective_beta(bose_occupation(2.5 * 0.8), 0.8), 2.5, 1e-13);
  EXPECT_TRUE(std::isinf(effective_beta(0.0, 1.0)));
  EXPECT_THROW(effective_beta(-0.1, 1.0), DomainError);
  EXPECT_NEAR(vn_entropy_single_mode(1.0), 2.0 * std::log(2.0), 1e-15);
  EXPECT_EQ(vn_entropy_single_mode(0.0), 0.0);
}

TEST(Gaussian, QuadratureCovarianceOfVacuum) {
  const MatrixXd v = GaussianState::vacuum(2).quadrature_covariance();
  EXPECT_LT((v - 0.5 * MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}
