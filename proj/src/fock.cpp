#include "cvhbac/fock.hpp"

#include "cvhbac/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace cvhbac {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kPositivityTol = 1e-9;

void require_positive_dim(int d, const char* what) {
  if (d < 1) throw ContractError(std::string(what) + ": dimension must be positive");
}

}  // namespace

double gibbs_tail_mass(double nbar, int d) {
  if (!(nbar >= 0.0)) throw DomainError("gibbs_tail_mass: occupation must be >= 0");
  require_positive_dim(d, "gibbs_tail_mass");
  if (nbar == 0.0) return 0.0;
  return std::exp(-d * std::log1p(1.0 / nbar));
}

int gibbs_cutoff(double nbar, double tail_tol, int minimum) {
  if (!(nbar >= 0.0)) throw DomainError("gibbs_cutoff: occupation must be >= 0");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("gibbs_cutoff: tail_tol in (0, 1)");
  if (nbar == 0.0) return std::max(1, minimum);
  const double d = std::ceil(-std::log(tail_tol) / std::log1p(1.0 / nbar));
  int out = std::max(minimum, static_cast<int>(d));
  while (gibbs_tail_mass(nbar, out) >= tail_tol) ++out;
  return out;
}

Eigen::VectorXd gibbs_populations(double nbar, int d) {
  if (!(nbar >= 0.0)) throw DomainError("gibbs_populations: occupation must be >= 0");
  require_positive_dim(d, "gibbs_populations");
  Eigen::VectorXd p(d);
  if (nbar == 0.0) {
    p.setZero();
    p(0) = 1.0;
    return p;
  }
  const double r = nbar / (nbar + 1.0);
  double term = 1.0 / (nbar + 1.0);
  for (int k = 0; k < d; ++k) {
    p(k) = term;
    term *= r;
  }
  return p / p.sum();
}

FockCutoff FockCutoff::for_gibbs(double nbar_s, double nbar_m, int p, double tail_tol, int minimum) {
  if (p < 1) throw ContractError("FockCutoff::for_gibbs: p must be >= 1");
  const int floor = std::max(minimum, p + 2);
  FockCutoff c{gibbs_cutoff(nbar_s, tail_tol, floor), gibbs_cutoff(nbar_m, tail_tol, floor)};
  c.validate(p);
  return c;
}

void FockCutoff::validate(int p) const {
  if (d_s < p + 2 || d_m < p + 2) {
    throw ContractError("FockCutoff: dimensions must be at least p + 2 = " + std::to_string(p + 2));
  }
}

// ---------------------------------------------------------------------------
// FockDensity

FockDensity::FockDensity(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
  if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) {
    throw ContractError("FockDensity: matrix must be square and nonempty");
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw InvalidStateError("FockDensity: matrix is not Hermitian");
  }
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw InvalidStateError("FockDensity: trace deviates from 1 by " + std::to_string(tr - 1.0));
  }
  double min_eig;
  if (is_diagonal()) {
    min_eig = rho_.diagonal().real().minCoeff();
  } else {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    min_eig = es.eigenvalues().minCoeff();
  }
  if (min_eig < -kPositivityTol) {
    throw InvalidStateError("FockDensity: negative eigenvalue " + std::to_string(min_eig));
  }
}

FockDensity FockDensity::gibbs(double nbar, int d) { return from_populations(gibbs_populations(nbar, d)); }

FockDensity FockDensity::number_state(int n, int d) {
  require_positive_dim(d, "FockDensity::number_state");
  if (n < 0 || n >= d) throw ContractError("FockDensity::number_state: level outside cutoff");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  rho(n, n) = 1.0;
  return FockDensity(std::move(rho));
}

FockDensity FockDensity::from_populations(const Eigen::VectorXd& populations) {
  return FockDensity(populations.cast<cplx>().asDiagonal().toDenseMatrix());
}

double FockDensity::max_coherence() const {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < rho_.cols(); ++c) {
    for (Eigen::Index r = 0; r < rho_.rows(); ++r) {
      if (r != c) worst = std::max(worst, std::abs(rho_(r, c)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Hamiltonian

ExchangeHamiltonian::ExchangeHamiltonian(int p, double chi, double omega0, double omega1,
                                         FockCutoff cutoff)
    : p_(p), chi_(chi), omega0_(omega0), omega1_(omega1), cutoff_(cutoff) {
  if (p_ < 1) throw ContractError("ExchangeHamiltonian: p must be >= 1");
  if (!std::isfinite(chi_) || !std::isfinite(omega0_) || !std::isfinite(omega1_)) {
    throw DomainError("ExchangeHamiltonian: parameters must be finite");
  }
  cutoff_.validate(p_);

  auto sectors = std::make_shared<std::vector<Sector>>();
  const int k_max = p_ * (cutoff_.d_s - 1) + cutoff_.d_m - 1;
  sectors->reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) {
    Sector sec;
    sec.k = k;
    const int n_lo = std::max(0, (k - cutoff_.d_m + 1 + p_ - 1) / p_);
    const int n_hi = std::min(cutoff_.d_s - 1, k / p_);
    for (int n = n_lo; n <= n_hi; ++n) sec.states.emplace_back(n, k - p_ * n);
    sectors->push_back(std::move(sec));
  }
  sectors_ = sectors;
  for (std::size_t i = 0; i < sectors->size(); ++i) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sector_matrix(i));
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("ExchangeHamiltonian: eigendecomposition failed");
    }
    (*sectors)[i].energies = es.eigenvalues();
    (*sectors)[i].vectors = es.eigenvectors();
  }
}

double ExchangeHamiltonian::coupling(int n_s, int n_m) const {
  double f = 1.0;
  for (int j = 1; j <= p_; ++j) f *= n_m + j;
  return chi_ * std::sqrt(static_cast<double>(n_s) * f);
}

Eigen::MatrixXd ExchangeHamiltonian::sector_matrix(std::size_t i) const {
  const Sector& sec = sectors_->at(i);
  const auto k = static_cast<Eigen::Index>(sec.states.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    const auto [n, m] = sec.states[a];
    h(a, a) = omega0_ * n + omega1_ * m;
    // states[a - 1] = (n - 1, m + p)
    if (a > 0) {
      const double v = coupling(n, m);
      h(a - 1, a) = v;
      h(a, a - 1) = v;
    }
  }
  return h;
}

Eigen::MatrixXcd ExchangeHamiltonian::dense() const {
  const int dm = cutoff_.d_m;
  const int dim = cutoff_.joint_dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < cutoff_.d_s; ++n) {
    for (int m = 0; m < dm; ++m) {
      const int idx = n * dm + m;
      h(idx, idx) = omega0_ * n + omega1_ * m;
      if (n >= 1 && m + p_ < dm) {
        const int to = (n - 1) * dm + m + p_;
        const double v = coupling(n, m);
        h(to, idx) = v;
        h(idx, to) = v;
      }
    }
  }
  return h;
}

SectorUnitary::SectorUnitary(const ExchangeHamiltonian& h, double t)
    : p_(h.p()), cutoff_(h.cutoff()), t_(t), sectors_(h.shared_sectors()) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolve_unitary: t must be >= 0");
  blocks_.reserve(sectors_->size());
  for (const auto& sec : *sectors_) {
    const Eigen::VectorXcd phases =
        (sec.energies.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    const Eigen::MatrixXcd v = sec.vectors.cast<cplx>();
    blocks_.push_back(v * phases.asDiagonal() * v.transpose());
  }
}

Eigen::MatrixXcd SectorUnitary::dense() const {
  const int dm = cutoff_.d_m;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(cutoff_.joint_dim(), cutoff_.joint_dim());
  for (std::size_t s = 0; s < sectors_->size(); ++s) {
    const auto& states = (*sectors_)[s].states;
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = 0; j < states.size(); ++j) {
        u(states[i].first * dm + states[i].second, states[j].first * dm + states[j].second) =
            blocks_[s](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return u;
}

double SectorUnitary::unitarity_residual() const {
  double worst = 0.0;
  for (const auto& b : blocks_) {
    const Eigen::MatrixXcd r = b.adjoint() * b - Eigen::MatrixXcd::Identity(b.rows(), b.cols());
    worst = std::max(worst, r.cwiseAbs().maxCoeff());
  }
  return worst;
}

SectorUnitary evolve_unitary(const ExchangeHamiltonian& h, double t) { return SectorUnitary(h, t); }

Eigen::MatrixXcd evolve_unitary_dense(const ExchangeHamiltonian& h, double t) {
  if (!(t >= 0.0)) throw DomainError("evolve_unitary_dense: t must be >= 0");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("evolve_unitary_dense: eigendecomposition failed");
  }
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// Collisions

namespace {

Eigen::VectorXd machine_populations(double nbar_m, int d_m, double& tail) {
  tail = gibbs_tail_mass(nbar_m, d_m);
  if (tail > kGibbsTailTolerance) {
    throw CutoffError("machine Gibbs tail " + std::to_string(tail) + " exceeds tolerance at d_M = " +
                          std::to_string(d_m),
                      tail);
  }
  return gibbs_populations(nbar_m, d_m);
}

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

CollisionResult single_collision(const FockDensity& rho_s, double nbar_m, const SectorUnitary& u) {
  const FockCutoff& cut = u.cutoff();
  if (rho_s.dim() != cut.d_s) throw ContractError("single_collision: system dimension mismatch");
  double tail = 0.0;
  const Eigen::VectorXd tau = machine_populations(nbar_m, cut.d_m, tail);
  const int p = u.p();
  const int ds = cut.d_s;
  const auto& sectors = u.sectors();
  const auto& blocks = u.blocks();
  const Eigen::MatrixXcd& rho = rho_s.matrix();

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ds, ds);
  Eigen::VectorXcd w(ds);
  for (int b = 0; b < cut.d_m; ++b) {
    if (tau(b) == 0.0) continue;
    for (int m1 = b % p; m1 < cut.d_m; m1 += p) {
      const int shift = (m1 - b) / p;  // input level n = n1 + shift
      w.setZero();
      int lo = ds;
      int hi = -1;
      for (int n1 = std::max(0, -shift); n1 < ds && n1 + shift < ds; ++n1) {
        const auto& sec = sectors[static_cast<std::size_t>(p * n1 + m1)];
        const int base = sec.states.front().first;
        const int i = n1 - base;
        const int j = n1 + shift - base;
        if (j < 0 || j >= static_cast<int>(sec.states.size())) continue;
        w(n1) = blocks[static_cast<std::size_t>(p * n1 + m1)](i, j);
        lo = std::min(lo, n1);
        hi = std::max(hi, n1);
      }
      if (hi < lo) continue;
      const int len = hi - lo + 1;
      const Eigen::VectorXcd seg = w.segment(lo, len);
      out.block(lo, lo, len, len).array() +=
          tau(b) * ((seg * seg.adjoint()).array() * rho.block(lo + shift, lo + shift, len, len).array());
    }
  }
  const double boundary = out(ds - 1, ds - 1).real();
  return {FockDensity(hermitize(out)), tail, boundary};
}

FockDensity single_collision_dense(const FockDensity& rho_s, double nbar_m,
                                   const ExchangeHamiltonian& h, double t) {
  const FockCutoff& cut = h.cutoff();
  if (rho_s.dim() != cut.d_s) throw ContractError("single_collision_dense: system dimension mismatch");
  double tail = 0.0;
  const Eigen::VectorXd tau = machine_populations(nbar_m, cut.d_m, tail);
  const Eigen::MatrixXcd u = evolve_unitary_dense(h, t);
  const int dm = cut.d_m;
  Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(cut.joint_dim(), cut.joint_dim());
  for (int n = 0; n < cut.d_s; ++n) {
    for (int n2 = 0; n2 < cut.d_s; ++n2) {
      for (int m = 0; m < dm; ++m) joint(n * dm + m, n2 * dm + m) = rho_s.matrix()(n, n2) * tau(m);
    }
  }
  const Eigen::MatrixXcd evolved = u * joint * u.adjoint();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(cut.d_s, cut.d_s);
  for (int n = 0; n < cut.d_s; ++n) {
    for (int n2 = 0; n2 < cut.d_s; ++n2) {
      cplx acc = 0.0;
      for (int m = 0; m < cut.d_m; ++m) acc += evolved(n * cut.d_m + m, n2 * cut.d_m + m);
      out(n, n2) = acc;
    }
  }
  return FockDensity(hermitize(out));
}

Eigen::MatrixXd transfer_matrix(const SectorUnitary& u, double nbar_m) {
  const FockCutoff& cut = u.cutoff();
  double tail = 0.0;
  const Eigen::VectorXd tau = machine_populations(nbar_m, cut.d_m, tail);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(cut.d_s, cut.d_s);
  const auto& sectors = u.sectors();
  for (std::size_t s = 0; s < sectors.size(); ++s) {
    const auto& states = sectors[s].states;
    const Eigen::MatrixXd prob = u.blocks()[s].cwiseAbs2();
    for (std::size_t j = 0; j < states.size(); ++j) {
      const double weight = tau(states[j].second);
      for (std::size_t i = 0; i < states.size(); ++i) {
        t(states[i].first, states[j].first) +=
            weight * prob(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Moments

FockMoments moments(const FockDensity& rho) {
  const Eigen::MatrixXcd& r = rho.matrix();
  FockMoments m{0.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < rho.dim(); ++k) {
    const double pk = r(k, k).real();
    m.mean_n += k * pk;
    m.second_moment += static_cast<double>(k) * k * pk;
    if (k >= 1) m.a += std::sqrt(static_cast<double>(k)) * r(k, k - 1);
    if (k >= 2) m.a2 += std::sqrt(static_cast<double>(k) * (k - 1)) * r(k, k - 2);
  }
  return m;
}

double mean_excitation(const FockDensity& rho) { return moments(rho).mean_n; }
double second_moment(const FockDensity& rho) { return moments(rho).second_moment; }
cplx first_moment_a(const FockDensity& rho) { return moments(rho).a; }
cplx moment_a2(const FockDensity& rho) { return moments(rho).a2; }

double fano_factor(double mean_n, double second) {
  if (mean_n < 0.0) throw DomainError("fano_factor: negative mean occupation");
  if (mean_n == 0.0) return 0.0;
  return (second - mean_n * mean_n) / (mean_n * (mean_n + 1.0)) - 1.0;
}

double thermal_excitation(const FockDensity& rho) {
  const FockMoments m = moments(rho);
  VectorXcd alpha(1);
  alpha(0) = m.a;
  MatrixXcd excitation(1, 1);
  excitation(0, 0) = m.mean_n - std::norm(m.a);
  MatrixXcd nu(1, 1);
  nu(0, 0) = m.a2 - m.a * m.a;
  return thermal_excitation(GaussianState(alpha, excitation, nu));
}

// ---------------------------------------------------------------------------
// Iteration

namespace {

CollisionRecord record_of(long round, const Eigen::VectorXd& pops) {
  double mean = 0.0;
  double second = 0.0;
  for (Eigen::Index k = 0; k < pops.size(); ++k) {
    mean += k * pops(k);
    second += static_cast<double>(k) * k * pops(k);
  }
  return {round, mean, second, fano_factor(mean, second)};
}

}  // namespace

CollisionTrace iterate_collisions(const FockDensity& rho_s0, double nbar_m, const SectorUnitary& u,
                                  long rounds, long stride) {
  if (rounds < 1) throw ContractError("iterate_collisions: rounds must be >= 1");
  if (stride < 1) throw ContractError("iterate_collisions: stride must be >= 1");
  if (rho_s0.dim() != u.cutoff().d_s) {
    throw ContractError("iterate_collisions: system dimension mismatch");
  }
  const int ds = u.cutoff().d_s;
  std::vector<CollisionRecord> records;
  records.push_back(record_of(0, rho_s0.populations()));
  double tail = 0.0;
  double boundary = rho_s0.populations()(ds - 1);

  if (rho_s0.is_diagonal()) {
    const Eigen::MatrixXd t = transfer_matrix(u, nbar_m);
    tail = gibbs_tail_mass(nbar_m, u.cutoff().d_m);
    Eigen::VectorXd x = rho_s0.populations();
    Eigen::VectorXd next(ds);
    for (long l = 1; l <= rounds; ++l) {
      next.noalias() = t * x;
      x.swap(next);
      boundary = std::max(boundary, x(ds - 1));
      if (l % stride == 0 || l == rounds) records.push_back(record_of(l, x));
    }
    // Renormalize away accumulated rounding in the stochastic products.
    x /= x.sum();
    return {std::move(records), FockDensity::from_populations(x), tail, boundary};
  }

  FockDensity rho = rho_s0;
  for (long l = 1; l <= rounds; ++l) {
    CollisionResult r = single_collision(rho, nbar_m, u);
    tail = r.machine_tail;
    boundary = std::max(boundary, r.boundary_weight);
    rho = std::move(r.rho);
    if (l % stride == 0 || l == rounds) records.push_back(record_of(l, rho.populations()));
  }
  return {std::move(records), std::move(rho), tail, boundary};
}

Eigen::VectorXd stationary_state(const Eigen::MatrixXd& transfer) {
  const Eigen::Index d = transfer.rows();
  if (d == 0 || transfer.cols() != d) throw ContractError("stationary_state: square matrix required");
  Eigen::MatrixXd a = transfer - Eigen::MatrixXd::Identity(d, d);
  a.row(d - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  rhs(d - 1) = 1.0;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw InvalidStateError("stationary_state: transfer matrix has no unique fixed point");
  }
  Eigen::VectorXd x = lu.solve(rhs);
  return x / x.sum();
}

double geometric_tv_distance(const Eigen::VectorXd& populations) {
  double mean = 0.0;
  for (Eigen::Index k = 0; k < populations.size(); ++k) mean += k * populations(k);
  double tv = 0.0;
  double mass = 0.0;
  const double r = mean / (mean + 1.0);
  double geo = 1.0 / (mean + 1.0);
  for (Eigen::Index k = 0; k < populations.size(); ++k) {
    tv += std::abs(populations(k) - geo);
    mass += geo;
    geo *= r;
  }
  tv += std::max(0.0, 1.0 - mass);
  return 0.5 * tv;
}

}  // namespace cvhbac
