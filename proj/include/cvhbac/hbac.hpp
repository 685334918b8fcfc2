#pragma once

// Gaussian heat-bath algorithmic cooling: one system mode (index 0) coupled to
// N machine modes (indices 1..N) that are reset to their Gibbs state after
// every recharging unitary.

#include "cvhbac/gaussian.hpp"

#include <vector>

namespace cvhbac {

class MachineSpec {
 public:
  // omegas must be nondecreasing; all frequencies and beta strictly positive.
  MachineSpec(double beta, double omega0, std::vector<double> omegas);

  double beta() const { return beta_; }
  double omega0() const { return omega0_; }
  const std::vector<double>& omegas() const { return omegas_; }
  int machine_modes() const { return static_cast<int>(omegas_.size()); }
  int total_modes() const { return machine_modes() + 1; }
  double omega_max() const { return omegas_.back(); }
  double lambda() const { return omega_max() / omega0_; }

  // 0-based index into omegas() of the first mode with omega_j > omega0, -1 if none.
  int first_cooling_mode() const;
  bool can_cool() const { return first_cooling_mode() >= 0; }

  double system_nbar() const;
  std::vector<double> machine_nbars() const;

  GaussianState system_gibbs() const;
  GaussianState machine_gibbs() const;

  // Same spec with the inert modes (omega_j <= omega0) removed. Requires can_cool().
  MachineSpec without_inert_modes() const;

 private:
  double beta_;
  double omega0_;
  std::vector<double> omegas_;
};

struct CoolingLimit {
  double beta_star;  // reachable effective inverse temperature of the system
  double lambda;     // omega_N / omega0
  double nth;        // thermal excitation of the system at the limit
  bool no_cooling;   // no machine mode above omega0; identity is optimal
};

// beta* = (omega_N / omega0) beta when omega_N > omega0, otherwise beta.
CoolingLimit gaussian_cooling_limit(const MachineSpec& spec);

struct SwapChain {
  GaussianUnitary unitary;
  std::vector<int> machine_modes;  // 1-based mode indices swapped with the system, in order
  bool no_cooling;
};

// SWAP(S, M_N) o ... o SWAP(S, M_j0), j0 = first mode with omega_j > omega0.
SwapChain build_swap_chain(const MachineSpec& spec);

struct RoundRecord {
  int round;
  double nth;        // system thermal excitation after the round
  double beta_eff;   // system effective inverse temperature (+inf for a pure system)
  double mean_n;     // system mean excitation
  double heat;       // cumulative heat dumped into the machine, sum_j omega_j (n'_j - n_j)
  double sigma;      // cumulative entropy production
  double round_heat;
  double round_sigma;       // beta Q - (S(rho_S) - S(rho'_S)) for this round
  double machine_relative;  // D[rho'_M || tau_M] for this round
  double mutual_info;       // I(S:M) of the post-unitary state
};

struct CoolingTrace {
  std::vector<RoundRecord> records;  // records[0] is the initial state (round 0)
  // max over rounds of |round_sigma - (machine_relative + mutual_info)|
  double decomposition_residual = 0.0;
};

// Entropies are reported to roughly 1e-8 absolute precision; the two routes to
// the per-round entropy production agree to that level.
CoolingTrace run_protocol(const MachineSpec& spec, const GaussianUnitary& recharger, int rounds);

// Same protocol from an arbitrary initial system state.
CoolingTrace run_protocol(const MachineSpec& spec, const GaussianUnitary& recharger, int rounds,
                          const GaussianState& system0);

// D[tau_a || tau_b] for Gibbs modes with occupations a, b > 0.
double relative_entropy_gibbs(double nbar_a, double nbar_b);

// Minimal entropy production of the swap chain; 0 for a no-cooling spec.
double entropy_production_star(const MachineSpec& spec);

}  // namespace cvhbac
