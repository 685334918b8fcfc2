#include "cvhbac/gaussian.hpp"

#include "cvhbac/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cvhbac {

namespace {

double max_abs(const MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

MatrixXcd block_matrix(const MatrixXcd& tl, const MatrixXcd& tr, const MatrixXcd& bl,
                       const MatrixXcd& br) {
  const Eigen::Index n = tl.rows();
  MatrixXcd out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = tl;
  out.topRightCorner(n, n) = tr;
  out.bottomLeftCorner(n, n) = bl;
  out.bottomRightCorner(n, n) = br;
  return out;
}

void require_mode(int mode, int modes, const char* what) {
  if (mode < 0 || mode >= modes) {
    throw ContractError(std::string(what) + ": mode index " + std::to_string(mode) +
                        " out of range for " + std::to_string(modes) + " modes");
  }
}

}  // namespace

double bose_occupation(double beta_omega) {
  if (!(beta_omega > 0.0)) {
    throw DomainError("bose_occupation: beta * omega must be positive");
  }
  return 1.0 / std::expm1(beta_omega);
}

GibbsMode::GibbsMode(double omega_in, double beta_in) : omega(omega_in), beta(beta_in) {
  if (!(omega > 0.0) || !(beta > 0.0)) {
    throw DomainError("GibbsMode: omega and beta must be positive");
  }
}

// ---------------------------------------------------------------------------
// GaussianState

GaussianState::GaussianState(VectorXcd alpha, MatrixXcd excitation, MatrixXcd nu)
    : alpha_(std::move(alpha)), excitation_(std::move(excitation)), nu_(std::move(nu)) {
  const Eigen::Index n = alpha_.size();
  if (n == 0) throw ContractError("GaussianState: at least one mode required");
  if (excitation_.rows() != n || excitation_.cols() != n || nu_.rows() != n || nu_.cols() != n) {
    throw ContractError("GaussianState: moment blocks must be J x J");
  }
  if (max_abs(excitation_ - excitation_.adjoint()) > tol::kHermitian) {
    throw InvalidStateError("GaussianState: mu is not Hermitian");
  }
  if (max_abs(nu_ - nu_.transpose()) > tol::kHermitian) {
    throw InvalidStateError("GaussianState: nu is not symmetric");
  }
  // M + Z = [[E^*, nu], [nu^*, E]] + diag(I, 0)
  MatrixXcd mz = block_matrix(excitation_.conjugate(), nu_, nu_.conjugate(), excitation_);
  mz.topLeftCorner(n, n).diagonal().array() += 1.0;
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(mz, Eigen::EigenvaluesOnly);
  // Rounding in the eigenvalues grows with the size of the moments.
  const double scale = std::max(1.0, max_abs(mz));
  if (es.eigenvalues().minCoeff() < -tol::kUncertainty * scale) {
    throw InvalidStateError("GaussianState: uncertainty relation M + Z >= 0 violated");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (mean_excitation(static_cast<int>(j)) < -tol::kUncertainty) {
      throw InvalidStateError("GaussianState: negative mean excitation");
    }
  }
}

GaussianState GaussianState::from_moments(VectorXcd alpha, const MatrixXcd& mu, MatrixXcd nu) {
  MatrixXcd excitation = mu;
  excitation.diagonal().array() -= 0.5;
  return GaussianState(std::move(alpha), std::move(excitation), std::move(nu));
}

GaussianState GaussianState::vacuum(int modes) {
  if (modes <= 0) throw ContractError("GaussianState::vacuum: modes must be positive");
  return GaussianState(VectorXcd::Zero(modes), MatrixXcd::Zero(modes, modes),
                       MatrixXcd::Zero(modes, modes));
}

MatrixXcd GaussianState::mu() const {
  MatrixXcd m = excitation_;
  m.diagonal().array() += 0.5;
  return m;
}

VectorXcd GaussianState::first_moments() const {
  VectorXcd r(2 * alpha_.size());
  r << alpha_, alpha_.conjugate();
  return r;
}

MatrixXcd GaussianState::second_moments() const {
  const MatrixXcd m = mu();
  return block_matrix(m.conjugate(), nu_, nu_.conjugate(), m);
}

double GaussianState::mean_excitation(int mode) const {
  require_mode(mode, modes(), "mean_excitation");
  return std::norm(alpha_(mode)) + excitation_(mode, mode).real();
}

VectorXd GaussianState::mean_excitations() const {
  VectorXd out(modes());
  for (int j = 0; j < modes(); ++j) out(j) = mean_excitation(j);
  return out;
}

MatrixXd GaussianState::quadrature_covariance() const {
  const Eigen::Index n = modes();
  const double s = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  MatrixXcd t = MatrixXcd::Zero(2 * n, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    t(j, j) = s;
    t(j, j + n) = s;
    t(j + n, j) = -i * s;
    t(j + n, j + n) = i * s;
  }
  return (t * second_moments() * t.adjoint()).real();
}

// ---------------------------------------------------------------------------
// GaussianUnitary

GaussianUnitary::GaussianUnitary(VectorXcd displacement, MatrixXcd c, MatrixXcd s, NoCheck)
    : displacement_(std::move(displacement)), c_(std::move(c)), s_(std::move(s)) {
  const Eigen::Index n = displacement_.size();
  if (n == 0) throw ContractError("GaussianUnitary: at least one mode required");
  if (c_.rows() != n || c_.cols() != n || s_.rows() != n || s_.cols() != n) {
    throw ContractError("GaussianUnitary: C and S must be J x J");
  }
}

GaussianUnitary::GaussianUnitary(VectorXcd displacement, MatrixXcd c, MatrixXcd s)
    : GaussianUnitary(std::move(displacement), std::move(c), std::move(s), NoCheck{}) {
  const Residuals res = residuals();
  if (res.normalization > tol::kSymplectic || res.symmetry > tol::kSymplectic) {
    throw ContractError("GaussianUnitary: symplectic constraints violated (normalization " +
                        std::to_string(res.normalization) + ", symmetry " +
                        std::to_string(res.symmetry) + ")");
  }
  if (res.determinant > tol::kDeterminant) {
    throw ContractError("GaussianUnitary: |det G| deviates from 1");
  }
}

GaussianUnitary GaussianUnitary::unchecked(VectorXcd displacement, MatrixXcd c, MatrixXcd s) {
  return GaussianUnitary(std::move(displacement), std::move(c), std::move(s), NoCheck{});
}

GaussianUnitary GaussianUnitary::identity(int modes) {
  if (modes <= 0) throw ContractError("GaussianUnitary::identity: modes must be positive");
  return GaussianUnitary(VectorXcd::Zero(modes), MatrixXcd::Identity(modes, modes),
                         MatrixXcd::Zero(modes, modes));
}

VectorXcd GaussianUnitary::d() const {
  VectorXcd d(2 * displacement_.size());
  d << displacement_, displacement_.conjugate();
  return d;
}

MatrixXcd GaussianUnitary::matrix() const {
  return block_matrix(c_.conjugate(), s_, s_.conjugate(), c_);
}

bool GaussianUnitary::is_passive() const { return max_abs(s_) == 0.0; }

GaussianUnitary::Residuals GaussianUnitary::residuals() const {
  const Eigen::Index n = modes();
  const MatrixXcd norm = c_ * c_.adjoint() - (s_ * s_.adjoint()).conjugate() -
                         MatrixXcd::Identity(n, n);
  const MatrixXcd sc = s_ * c_.adjoint();
  const double det = std::abs(matrix().determinant());
  return {max_abs(norm), max_abs(sc.transpose() - sc), std::abs(det - 1.0)};
}

// ---------------------------------------------------------------------------
// Operations

GaussianState gibbs_state(std::span<const GibbsMode> modes) {
  std::vector<double> nbars;
  nbars.reserve(modes.size());
  for (const auto& m : modes) nbars.push_back(m.nbar());
  return thermal_state(nbars);
}

GaussianState thermal_state(std::span<const double> nbars) {
  const auto n = static_cast<Eigen::Index>(nbars.size());
  if (n == 0) throw ContractError("thermal_state: at least one mode required");
  MatrixXcd excitation = MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!(nbars[j] >= 0.0)) throw DomainError("thermal_state: occupations must be >= 0");
    excitation(j, j) = nbars[j];
  }
  return GaussianState(VectorXcd::Zero(n), std::move(excitation), MatrixXcd::Zero(n, n));
}

GaussianState apply_unitary(const GaussianState& state, const GaussianUnitary& u) {
  if (state.modes() != u.modes()) {
    throw ContractError("apply_unitary: state has " + std::to_string(state.modes()) +
                        " modes, unitary acts on " + std::to_string(u.modes()));
  }
  const Eigen::Index n = state.modes();
  const MatrixXcd& c = u.c();
  const MatrixXcd& s = u.s();

  VectorXcd alpha = c.conjugate() * state.alpha() + s * state.alpha().conjugate() +
                    u.displacement();

  // G M G^dagger with M = M_E + I/2 and G G^dagger / 2 - I/2 = [[S S^+, S C^+], [., S^* S^T]].
  const MatrixXcd& e = state.excitation();
  const MatrixXcd& nu = state.nu();
  const MatrixXcd me = block_matrix(e.conjugate(), nu, nu.conjugate(), e);
  const MatrixXcd g = u.matrix();
  const MatrixXcd x = g * me * g.adjoint();

  MatrixXcd excitation = x.bottomRightCorner(n, n) + s.conjugate() * s.transpose();
  MatrixXcd nu_out = x.topRightCorner(n, n) + s * c.adjoint();
  excitation = (0.5 * (excitation + excitation.adjoint())).eval();
  nu_out = (0.5 * (nu_out + nu_out.transpose())).eval();
  return GaussianState(std::move(alpha), std::move(excitation), std::move(nu_out));
}

GaussianUnitary compose(const GaussianUnitary& u2, const GaussianUnitary& u1) {
  if (u1.modes() != u2.modes()) throw ContractError("compose: mode counts differ");
  const MatrixXcd& c1 = u1.c();
  const MatrixXcd& s1 = u1.s();
  const MatrixXcd& c2 = u2.c();
  const MatrixXcd& s2 = u2.s();
  VectorXcd disp = c2.conjugate() * u1.displacement() + s2 * u1.displacement().conjugate() +
                   u2.displacement();
  MatrixXcd c = c2 * c1 + s2.conjugate() * s1;
  MatrixXcd s = c2.conjugate() * s1 + s2 * c1;
  return GaussianUnitary(std::move(disp), std::move(c), std::move(s));
}

GaussianUnitary make_passive(const MatrixXcd& c_unitary) {
  const Eigen::Index n = c_unitary.rows();
  if (n == 0 || c_unitary.cols() != n) throw ContractError("make_passive: C must be square");
  if (max_abs(c_unitary * c_unitary.adjoint() - MatrixXcd::Identity(n, n)) > tol::kSymplectic) {
    throw ContractError("make_passive: C is not unitary");
  }
  return GaussianUnitary(VectorXcd::Zero(n), c_unitary, MatrixXcd::Zero(n, n));
}

GaussianUnitary make_squeezer(std::span<const double> r) {
  const auto n = static_cast<Eigen::Index>(r.size());
  if (n == 0) throw ContractError("make_squeezer: at least one mode required");
  MatrixXcd c = MatrixXcd::Zero(n, n);
  MatrixXcd s = MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    c(j, j) = std::cosh(r[j]);
    s(j, j) = std::sinh(r[j]);
  }
  return GaussianUnitary(VectorXcd::Zero(n), std::move(c), std::move(s));
}

GaussianUnitary make_phase_shift(std::span<const double> phi) {
  const auto n = static_cast<Eigen::Index>(phi.size());
  if (n == 0) throw ContractError("make_phase_shift: at least one mode required");
  MatrixXcd c = MatrixXcd::Zero(n, n);
  // exp(-i phi a^+a): alpha -> e^{-i phi} alpha, and alpha' = C^* alpha.
  for (Eigen::Index j = 0; j < n; ++j) c(j, j) = std::polar(1.0, phi[j]);
  return GaussianUnitary(VectorXcd::Zero(n), std::move(c), MatrixXcd::Zero(n, n));
}

GaussianUnitary make_displacement(std::span<const cplx> alpha) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  if (n == 0) throw ContractError("make_displacement: at least one mode required");
  VectorXcd d(n);
  for (Eigen::Index j = 0; j < n; ++j) d(j) = alpha[j];
  return GaussianUnitary(std::move(d), MatrixXcd::Identity(n, n), MatrixXcd::Zero(n, n));
}

GaussianUnitary make_swap(int i, int j, int modes) {
  if (modes <= 0) throw ContractError("make_swap: modes must be positive");
  require_mode(i, modes, "make_swap");
  require_mode(j, modes, "make_swap");
  MatrixXcd c = MatrixXcd::Identity(modes, modes);
  if (i != j) {
    c(i, i) = 0.0;
    c(j, j) = 0.0;
    c(i, j) = 1.0;
    c(j, i) = 1.0;
  }
  return GaussianUnitary(VectorXcd::Zero(modes), std::move(c), MatrixXcd::Zero(modes, modes));
}

GaussianUnitary make_beam_splitter(int i, int j, int modes, double theta) {
  if (modes <= 0) throw ContractError("make_beam_splitter: modes must be positive");
  require_mode(i, modes, "make_beam_splitter");
  require_mode(j, modes, "make_beam_splitter");
  if (i == j) throw ContractError("make_beam_splitter: modes must differ");
  MatrixXcd c = MatrixXcd::Identity(modes, modes);
  c(i, i) = std::cos(theta);
  c(j, j) = std::cos(theta);
  c(i, j) = -std::sin(theta);
  c(j, i) = std::sin(theta);
  return GaussianUnitary(VectorXcd::Zero(modes), std::move(c), MatrixXcd::Zero(modes, modes));
}

MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
  if (n <= 0) throw ContractError("haar_unitary: dimension must be positive");
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  MatrixXcd z(n, n);
  for (int col = 0; col < n; ++col) {
    for (int row = 0; row < n; ++row) z(row, col) = cplx(normal(rng), normal(rng));
  }
  const Eigen::HouseholderQR<MatrixXcd> qr(z);
  MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(n, n);
  const MatrixXcd& r = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    const cplx phase = mag > 0.0 ? r(k, k) / mag : cplx(1.0, 0.0);
    q.col(k) *= phase;
  }
  return q;
}

GaussianUnitary random_gaussian_unitary(int modes, std::mt19937_64& rng, double max_squeeze) {
  if (!(max_squeeze >= 0.0)) {
    throw DomainError("random_gaussian_unitary: max_squeeze must be >= 0");
  }
  const GaussianUnitary first = make_passive(haar_unitary(modes, rng));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> r(static_cast<std::size_t>(modes));
  for (auto& x : r) x = max_squeeze * uniform(rng);
  const GaussianUnitary second = make_passive(haar_unitary(modes, rng));
  if (max_squeeze == 0.0) return compose(second, first);
  return compose(second, compose(make_squeezer(r), first));
}

GaussianUnitary random_gaussian_unitary(int modes, std::uint64_t seed, double max_squeeze) {
  std::mt19937_64 rng(seed);
  return random_gaussian_unitary(modes, rng, max_squeeze);
}

GaussianState reduce(const GaussianState& state, std::span<const int> keep) {
  if (keep.empty()) throw ContractError("reduce: keep set is empty");
  std::vector<int> seen(keep.begin(), keep.end());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw ContractError("reduce: duplicate mode index");
  }
  for (int k : keep) require_mode(k, state.modes(), "reduce");

  const auto n = static_cast<Eigen::Index>(keep.size());
  VectorXcd alpha(n);
  MatrixXcd excitation(n, n);
  MatrixXcd nu(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    alpha(a) = state.alpha()(keep[a]);
    for (Eigen::Index b = 0; b < n; ++b) {
      excitation(a, b) = state.excitation()(keep[a], keep[b]);
      nu(a, b) = state.nu()(keep[a], keep[b]);
    }
  }
  return GaussianState(std::move(alpha), std::move(excitation), std::move(nu));
}

GaussianState tensor_product(const GaussianState& a, const GaussianState& b) {
  const Eigen::Index na = a.modes();
  const Eigen::Index nb = b.modes();
  VectorXcd alpha(na + nb);
  alpha << a.alpha(), b.alpha();
  MatrixXcd excitation = MatrixXcd::Zero(na + nb, na + nb);
  MatrixXcd nu = MatrixXcd::Zero(na + nb, na + nb);
  excitation.topLeftCorner(na, na) = a.excitation();
  excitation.bottomRightCorner(nb, nb) = b.excitation();
  nu.topLeftCorner(na, na) = a.nu();
  nu.bottomRightCorner(nb, nb) = b.nu();
  return GaussianState(std::move(alpha), std::move(excitation), std::move(nu));
}

double thermal_excitation(const GaussianState& single_mode) {
  if (single_mode.modes() != 1) {
    throw ContractError("thermal_excitation: single-mode state required");
  }
  const double n = single_mode.excitation()(0, 0).real();
  const double nu2 = std::norm(single_mode.nu()(0, 0));
  // sqrt((n + 1/2)^2 - |nu|^2) - 1/2 rewritten without cancellation near n = 0.
  const double num = n * n + n - nu2;
  const double scale = std::max({1.0, n * n, nu2});
  if (num < -tol::kUncertainty * scale) {
    throw InvalidStateError("thermal_excitation: mu^2 < |nu|^2");
  }
  if (num <= 0.0) return 0.0;
  return num / (std::sqrt((n + 0.5) * (n + 0.5) - nu2) + 0.5);
}

double effective_beta(double thermal_excitation, double omega) {
  if (!(omega > 0.0)) throw DomainError("effective_beta: omega must be positive");
  if (thermal_excitation < 0.0) throw DomainError("effective_beta: excitation must be >= 0");
  if (thermal_excitation == 0.0) return std::numeric_limits<double>::infinity();
  return std::log1p(1.0 / thermal_excitation) / omega;
}

double vn_entropy_single_mode(double thermal_excitation) {
  const double n = thermal_excitation;
  if (n < 0.0) throw DomainError("vn_entropy_single_mode: excitation must be >= 0");
  if (n == 0.0) return 0.0;
  return (n + 1.0) * std::log1p(n) - n * std::log(n);
}

VectorXd symplectic_eigenvalues(const GaussianState& state) {
  const Eigen::Index n = state.modes();
  // Z M is similar to the Hermitian M^1/2 Z M^1/2, which keeps degenerate
  // spectra real.
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> em(state.second_moments());
  if (em.eigenvalues().minCoeff() <= 0.0) {
    throw InvalidStateError("symplectic_eigenvalues: moment matrix is not positive definite");
  }
  const MatrixXcd root = em.operatorSqrt();
  MatrixXcd z = MatrixXcd::Identity(2 * n, 2 * n);
  z.bottomRightCorner(n, n) *= -1.0;
  const MatrixXcd k = root * z * root;
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(k, Eigen::EigenvaluesOnly);
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = std::max(0.5, es.eigenvalues()(n + i));
  return out;
}

double gaussian_entropy(const GaussianState& state) {
  const VectorXd nus = symplectic_eigenvalues(state);
  double s = 0.0;
  for (Eigen::Index i = 0; i < nus.size(); ++i) s += vn_entropy_single_mode(nus(i) - 0.5);
  return s;
}

}  // namespace cvhbac
