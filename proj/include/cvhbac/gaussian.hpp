#pragma once

// Bosonic Gaussian states and unitaries in the complex (a, a^dagger) moment
// representation.
//
// A J-mode state is described by the first moments alpha_j = <a_j> and the
// second-moment blocks
//   mu_jk = <a_j^dagger a_k> - alpha_j^* alpha_k + delta_jk / 2   (Hermitian)
//   nu_jk = <a_j a_k> - alpha_j alpha_k                          (symmetric)
// assembled as r = (alpha, alpha^*) and M = [[mu^*, nu], [nu^*, mu]].
//
// A Gaussian unitary (d, C, S) acts as r -> G r + d, M -> G M G^dagger with
// G = [[C^*, S], [S^*, C]], i.e. alpha -> C^* alpha + S alpha^* + alpha_d.
// Symplecticity is C C^dagger - (S S^dagger)^* = I and (S C^dagger)^T = S C^dagger.
//
// Units: hbar = k_B = 1.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace cvhbac {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kSymplectic = 1e-10;
inline constexpr double kDeterminant = 1e-8;
inline constexpr double kUncertainty = 1e-10;
inline constexpr double kDerived = 1e-8;
}  // namespace tol

// Mean occupation 1 / (e^x - 1) of a Gibbs mode with x = beta * omega.
double bose_occupation(double beta_omega);

struct GibbsMode {
  GibbsMode(double omega, double beta);

  double omega;
  double beta;
  double nbar() const { return bose_occupation(beta * omega); }
};

class GaussianState {
 public:
  // `excitation` is mu - I/2 (the normally ordered block). Storing it instead
  // of mu keeps occupations far below 1/2 representable.
  GaussianState(VectorXcd alpha, MatrixXcd excitation, MatrixXcd nu);

  static GaussianState from_moments(VectorXcd alpha, const MatrixXcd& mu, MatrixXcd nu);
  static GaussianState vacuum(int modes);

  int modes() const { return static_cast<int>(alpha_.size()); }
  const VectorXcd& alpha() const { return alpha_; }
  const MatrixXcd& excitation() const { return excitation_; }
  const MatrixXcd& nu() const { return nu_; }
  MatrixXcd mu() const;

  VectorXcd first_moments() const;   // r, length 2J
  MatrixXcd second_moments() const;  // M, 2J x 2J

  // |alpha_j|^2 + mu_jj - 1/2
  double mean_excitation(int mode) const;
  VectorXd mean_excitations() const;

  // Debug helper: covariance of (x_1..x_J, p_1..p_J) with x = (a + a^dagger)/sqrt(2),
  // normalized so the vacuum has covariance I/2.
  MatrixXd quadrature_covariance() const;

 private:
  VectorXcd alpha_;
  MatrixXcd excitation_;
  MatrixXcd nu_;
};

class GaussianUnitary {
 public:
  // `displacement` is alpha_d (length J); d = (alpha_d, alpha_d^*).
  GaussianUnitary(VectorXcd displacement, MatrixXcd c, MatrixXcd s);

  // Skips the symplectic check. Only for failure-injection harnesses.
  static GaussianUnitary unchecked(VectorXcd displacement, MatrixXcd c, MatrixXcd s);
  static GaussianUnitary identity(int modes);

  int modes() const { return static_cast<int>(displacement_.size()); }
  const VectorXcd& displacement() const { return displacement_; }
  const MatrixXcd& c() const { return c_; }
  const MatrixXcd& s() const { return s_; }

  VectorXcd d() const;
  MatrixXcd matrix() const;  // G

  bool is_passive() const;

  struct Residuals {
    double normalization;  // max |C C^dagger - (S S^dagger)^* - I|
    double symmetry;       // max |(S C^dagger)^T - S C^dagger|
    double determinant;    // | |det G| - 1 |
  };
  Residuals residuals() const;

 private:
  struct NoCheck {};
  GaussianUnitary(VectorXcd displacement, MatrixXcd c, MatrixXcd s, NoCheck);

  VectorXcd displacement_;
  MatrixXcd c_;
  MatrixXcd s_;
};

GaussianState gibbs_state(std::span<const GibbsMode> modes);
GaussianState thermal_state(std::span<const double> nbars);

GaussianState apply_unitary(const GaussianState& state, const GaussianUnitary& u);

// u2 after u1.
GaussianUnitary compose(const GaussianUnitary& u2, const GaussianUnitary& u1);

GaussianUnitary make_passive(const MatrixXcd& c_unitary);
GaussianUnitary make_squeezer(std::span<const double> r);
GaussianUnitary make_phase_shift(std::span<const double> phi);
GaussianUnitary make_displacement(std::span<const cplx> alpha);
GaussianUnitary make_swap(int i, int j, int modes);
GaussianUnitary make_beam_splitter(int i, int j, int modes, double theta);

// Haar-distributed J x J unitary (QR of a complex Ginibre matrix, phases fixed).
MatrixXcd haar_unitary(int n, std::mt19937_64& rng);

inline constexpr double kDefaultMaxSqueeze = 1.5;

// passive * single-mode squeeze * passive, squeeze magnitudes uniform on
// [0, max_squeeze]. Deterministic in the seed.
GaussianUnitary random_gaussian_unitary(int modes, std::uint64_t seed,
                                        double max_squeeze = kDefaultMaxSqueeze);
GaussianUnitary random_gaussian_unitary(int modes, std::mt19937_64& rng,
                                        double max_squeeze = kDefaultMaxSqueeze);

// Partial trace: keep the listed modes in the listed order.
GaussianState reduce(const GaussianState& state, std::span<const int> keep);

GaussianState tensor_product(const GaussianState& a, const GaussianState& b);

// sqrt(mu^2 - |nu|^2) - 1/2 for a single-mode state; independent of alpha.
double thermal_excitation(const GaussianState& single_mode);

// (1/omega) ln((n + 1)/n). Returns +infinity for n == 0 (pure state).
double effective_beta(double thermal_excitation, double omega);

// (n + 1) ln(n + 1) - n ln n, entropy of a Gibbs mode with mean occupation n.
double vn_entropy_single_mode(double thermal_excitation);

// Symplectic eigenvalues (all >= 1/2), ascending; the positive half of the spectrum of Z M.
VectorXd symplectic_eigenvalues(const GaussianState& state);

// von Neumann entropy of a multi-mode Gaussian state.
double gaussian_entropy(const GaussianState& state);

}  // namespace cvhbac
