#pragma once

// Exact simulation of the p-excitation exchange H = w0 a^+a + w1 b^+b + chi (a b^+p + a^+ b^p)
// between a system mode a and a machine mode b on a truncated Fock space.
//
// The interaction conserves K = p n_S + n_M, so H is block diagonal in K. The
// truncated operators keep only couplings with both endpoints inside the box
// n_S < d_S, n_M < d_M; every block is then a finite real symmetric matrix.
// Joint basis index for the dense route is n_S * d_M + n_M.

#include "cvhbac/gaussian.hpp"

#include <Eigen/Dense>

#include <memory>
#include <utility>
#include <vector>

namespace cvhbac {

inline constexpr double kGibbsTailTolerance = 1e-10;
inline constexpr int kDefaultFockCutoff = 48;

// Mass of a Gibbs distribution beyond level d - 1: (n / (n + 1))^d.
double gibbs_tail_mass(double nbar, int d);

// Smallest d >= minimum whose Gibbs tail mass is below tail_tol.
int gibbs_cutoff(double nbar, double tail_tol = kGibbsTailTolerance,
                 int minimum = kDefaultFockCutoff);

// Truncated Gibbs populations p_k = n^k/(n+1)^{k+1}, k < d, renormalized.
Eigen::VectorXd gibbs_populations(double nbar, int d);

struct FockCutoff {
  int d_s;
  int d_m;

  // Both dimensions at least p + 2 and large enough that each Gibbs input has
  // tail mass below tail_tol; never below `minimum`.
  static FockCutoff for_gibbs(double nbar_s, double nbar_m, int p,
                              double tail_tol = kGibbsTailTolerance,
                              int minimum = kDefaultFockCutoff);

  void validate(int p) const;
  int joint_dim() const { return d_s * d_m; }
};

class FockDensity {
 public:
  explicit FockDensity(Eigen::MatrixXcd rho);

  static FockDensity gibbs(double nbar, int d);
  static FockDensity number_state(int n, int d);
  static FockDensity from_populations(const Eigen::VectorXd& populations);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  Eigen::VectorXd populations() const { return rho_.diagonal().real(); }
  double max_coherence() const;  // largest |rho(n, n')|, n != n'
  bool is_diagonal(double tol = 0.0) const { return max_coherence() <= tol; }

 private:
  Eigen::MatrixXcd rho_;
};

class ExchangeHamiltonian {
 public:
  struct Sector {
    int k;                                 // p n_S + n_M
    std::vector<std::pair<int, int>> states;  // (n_S, n_M), ascending n_S
    Eigen::VectorXd energies;  // eigenvalues of the block
    Eigen::MatrixXd vectors;   // eigenvectors of the block (columns)
  };

  ExchangeHamiltonian(int p, double chi, double omega0, double omega1, FockCutoff cutoff);

  int p() const { return p_; }
  double chi() const { return chi_; }
  double omega0() const { return omega0_; }
  double omega1() const { return omega1_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  const std::vector<Sector>& sectors() const { return *sectors_; }
  std::shared_ptr<const std::vector<Sector>> shared_sectors() const { return sectors_; }

  // Real symmetric block of sector index i.
  Eigen::MatrixXd sector_matrix(std::size_t i) const;

  // <n_S - 1, n_M + p| H_I |n_S, n_M> = chi sqrt(n_S) sqrt((n_M + p)! / n_M!)
  double coupling(int n_s, int n_m) const;

  // Full truncated matrix, d_S d_M square.
  Eigen::MatrixXcd dense() const;

 private:
  int p_;
  double chi_;
  double omega0_;
  double omega1_;
  FockCutoff cutoff_;
  std::shared_ptr<const std::vector<Sector>> sectors_;
};

// exp(-i H t) stored block by block.
class SectorUnitary {
 public:
  SectorUnitary(const ExchangeHamiltonian& h, double t);

  int p() const { return p_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  double t() const { return t_; }
  const std::vector<ExchangeHamiltonian::Sector>& sectors() const { return *sectors_; }
  const std::vector<Eigen::MatrixXcd>& blocks() const { return blocks_; }

  Eigen::MatrixXcd dense() const;
  double unitarity_residual() const;  // max |U^+U - I| over blocks

 private:
  int p_;
  FockCutoff cutoff_;
  double t_;
  std::shared_ptr<const std::vector<ExchangeHamiltonian::Sector>> sectors_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

SectorUnitary evolve_unitary(const ExchangeHamiltonian& h, double t);

// Independent dense route: eigendecomposition of the full truncated matrix.
Eigen::MatrixXcd evolve_unitary_dense(const ExchangeHamiltonian& h, double t);

struct CollisionResult {
  FockDensity rho;
  double machine_tail;    // Gibbs mass of tau_M beyond the cutoff, before renormalization
  double boundary_weight;  // output population on the top system level
};

// tr_M[U (rho_S x tau_M) U^+] with tau_M truncated and renormalized.
// Throws CutoffError when the machine tail exceeds kGibbsTailTolerance.
CollisionResult single_collision(const FockDensity& rho_s, double nbar_m,
                                 const SectorUnitary& u);

// Reference implementation through dense joint-space products.
FockDensity single_collision_dense(const FockDensity& rho_s, double nbar_m,
                                   const ExchangeHamiltonian& h, double t);

// T(n' | n) = sum_b tau(b) sum_m' |<n' m'| U |n b>|^2. Column-stochastic; maps
// diagonal system states to diagonal system states.
Eigen::MatrixXd transfer_matrix(const SectorUnitary& u, double nbar_m);

struct FockMoments {
  double mean_n;
  double second_moment;  // <n^2>
  cplx a;                // <a>
  cplx a2;               // <a^2>
};

FockMoments moments(const FockDensity& rho);
double mean_excitation(const FockDensity& rho);
double second_moment(const FockDensity& rho);
cplx first_moment_a(const FockDensity& rho);
cplx moment_a2(const FockDensity& rho);

// (<n^2> - <n>^2) / (<n>(<n> + 1)) - 1; zero for a Gibbs distribution.
double fano_factor(double mean_n, double second_moment);

// Thermal excitation of the Gaussian state with the same first and second moments.
double thermal_excitation(const FockDensity& rho);

struct CollisionRecord {
  long round;
  double mean_n;
  double second_moment;
  double fano_q;
};

struct CollisionTrace {
  std::vector<CollisionRecord> records;  // round 0 first
  FockDensity final_state;
  double machine_tail;
  double max_boundary_weight;
};

// L rounds of collision + machine reset. Diagonal inputs use the transfer
// matrix; others use the block formula each round. Records every `stride`
// rounds and always the last one.
CollisionTrace iterate_collisions(const FockDensity& rho_s0, double nbar_m, const SectorUnitary& u,
                                  long rounds, long stride = 1);

// Populations invariant under T, normalized to 1 (direct linear solve).
Eigen::VectorXd stationary_state(const Eigen::MatrixXd& transfer);

// Total-variation distance between populations and the geometric law with the same mean.
double geometric_tv_distance(const Eigen::VectorXd& populations);

}  // namespace cvhbac
