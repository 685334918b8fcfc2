#include "cvhbac/hbac.hpp"

#include "cvhbac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cvhbac {

MachineSpec::MachineSpec(double beta, double omega0, std::vector<double> omegas)
    : beta_(beta), omega0_(omega0), omegas_(std::move(omegas)) {
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw DomainError("MachineSpec: beta must be positive");
  if (!(omega0_ > 0.0) || !std::isfinite(omega0_)) {
    throw DomainError("MachineSpec: omega0 must be positive");
  }
  if (omegas_.empty()) throw ContractError("MachineSpec: at least one machine mode required");
  for (std::size_t j = 0; j < omegas_.size(); ++j) {
    if (!(omegas_[j] > 0.0) || !std::isfinite(omegas_[j])) {
      throw DomainError("MachineSpec: machine frequencies must be positive");
    }
    if (j > 0 && omegas_[j] < omegas_[j - 1]) {
      throw ContractError("MachineSpec: machine frequencies must be nondecreasing");
    }
  }
}

int MachineSpec::first_cooling_mode() const {
  const auto it = std::upper_bound(omegas_.begin(), omegas_.end(), omega0_);
  return it == omegas_.end() ? -1 : static_cast<int>(it - omegas_.begin());
}

double MachineSpec::system_nbar() const { return bose_occupation(beta_ * omega0_); }

std::vector<double> MachineSpec::machine_nbars() const {
  std::vector<double> out;
  out.reserve(omegas_.size());
  for (double w : omegas_) out.push_back(bose_occupation(beta_ * w));
  return out;
}

GaussianState MachineSpec::system_gibbs() const {
  const double n = system_nbar();
  return thermal_state(std::span<const double>(&n, 1));
}

GaussianState MachineSpec::machine_gibbs() const {
  const std::vector<double> n = machine_nbars();
  return thermal_state(n);
}

MachineSpec MachineSpec::without_inert_modes() const {
  const int j0 = first_cooling_mode();
  if (j0 < 0) throw ContractError("without_inert_modes: no machine mode above omega0");
  return MachineSpec(beta_, omega0_, std::vector<double>(omegas_.begin() + j0, omegas_.end()));
}

CoolingLimit gaussian_cooling_limit(const MachineSpec& spec) {
  CoolingLimit out{};
  out.lambda = spec.lambda();
  out.no_cooling = !spec.can_cool();
  out.beta_star = out.no_cooling ? spec.beta() : out.lambda * spec.beta();
  out.nth = bose_occupation(out.beta_star * spec.omega0());
  return out;
}

SwapChain build_swap_chain(const MachineSpec& spec) {
  const int modes = spec.total_modes();
  const int j0 = spec.first_cooling_mode();
  if (j0 < 0) return {GaussianUnitary::identity(modes), {}, true};
  GaussianUnitary chain = GaussianUnitary::identity(modes);
  std::vector<int> order;
  for (int j = j0; j < spec.machine_modes(); ++j) {
    chain = compose(make_swap(0, j + 1, modes), chain);
    order.push_back(j + 1);
  }
  return {std::move(chain), std::move(order), false};
}

namespace {

RoundRecord initial_record(const GaussianState& system, double omega0) {
  RoundRecord r{};
  r.round = 0;
  r.nth = thermal_excitation(system);
  r.beta_eff = effective_beta(r.nth, omega0);
  r.mean_n = system.mean_excitation(0);
  return r;
}

}  // namespace

CoolingTrace run_protocol(const MachineSpec& spec, const GaussianUnitary& recharger, int rounds) {
  return run_protocol(spec, recharger, rounds, spec.system_gibbs());
}

CoolingTrace run_protocol(const MachineSpec& spec, const GaussianUnitary& recharger, int rounds,
                          const GaussianState& system0) {
  if (recharger.modes() != spec.total_modes()) {
    throw ContractError("run_protocol: recharger acts on " + std::to_string(recharger.modes()) +
                        " modes, spec has " + std::to_string(spec.total_modes()));
  }
  if (system0.modes() != 1) throw ContractError("run_protocol: system state must be single-mode");
  if (rounds < 0) throw ContractError("run_protocol: rounds must be >= 0");

  const int n_machine = spec.machine_modes();
  const GaussianState machine = spec.machine_gibbs();
  const std::vector<double> nbars = spec.machine_nbars();
  double machine_entropy = 0.0;
  double log_partition = 0.0;
  for (double n : nbars) {
    machine_entropy += vn_entropy_single_mode(n);
    log_partition += std::log1p(n);
  }
  std::vector<int> machine_idx(static_cast<std::size_t>(n_machine));
  std::iota(machine_idx.begin(), machine_idx.end(), 1);
  const int system_idx[] = {0};

  CoolingTrace trace;
  trace.records.reserve(static_cast<std::size_t>(rounds) + 1);
  trace.records.push_back(initial_record(system0, spec.omega0()));

  GaussianState system = system0;
  double s_system = vn_entropy_single_mode(trace.records[0].nth);
  for (int round = 1; round <= rounds; ++round) {
    const GaussianState joint = apply_unitary(tensor_product(system, machine), recharger);
    GaussianState next = reduce(joint, system_idx);
    const GaussianState machine_out = reduce(joint, machine_idx);

    double heat = 0.0;
    double beta_energy = 0.0;
    for (int j = 0; j < n_machine; ++j) {
      const double n_out = machine_out.mean_excitation(j);
      heat += spec.omegas()[j] * (n_out - nbars[j]);
      beta_energy += spec.beta() * spec.omegas()[j] * n_out;
    }

    RoundRecord r{};
    r.round = round;
    r.nth = thermal_excitation(next);
    r.beta_eff = effective_beta(r.nth, spec.omega0());
    r.mean_n = next.mean_excitation(0);
    const double s_next = vn_entropy_single_mode(r.nth);
    const double s_machine_out = gaussian_entropy(machine_out);
    r.round_heat = heat;
    r.round_sigma = spec.beta() * heat - (s_system - s_next);
    r.machine_relative = std::max(0.0, beta_energy + log_partition - s_machine_out);
    // S(rho'_SM) = S(rho_S) + S(tau_M) since the recharger is unitary.
    r.mutual_info = std::max(0.0, s_next + s_machine_out - s_system - machine_entropy);
    const RoundRecord& prev = trace.records.back();
    r.heat = prev.heat + heat;
    r.sigma = prev.sigma + r.round_sigma;
    trace.decomposition_residual =
        std::max(trace.decomposition_residual,
                 std::abs(r.round_sigma - (r.machine_relative + r.mutual_info)));
    trace.records.push_back(r);

    system = std::move(next);
    s_system = s_next;
  }
  return trace;
}

double relative_entropy_gibbs(double nbar_a, double nbar_b) {
  if (!(nbar_a > 0.0) || !(nbar_b > 0.0)) {
    throw DomainError("relative_entropy_gibbs: occupations must be positive");
  }
  // (a+1) ln((b+1)/(a+1)) + a ln(a/b), with log1p for nearby arguments.
  const double d = (nbar_a + 1.0) * std::log1p((nbar_b - nbar_a) / (nbar_a + 1.0)) +
                   nbar_a * std::log1p((nbar_a - nbar_b) / nbar_b);
  return std::max(0.0, d);
}

double entropy_production_star(const MachineSpec& spec) {
  const int j0 = spec.first_cooling_mode();
  if (j0 < 0) return 0.0;
  const std::vector<double> nbars = spec.machine_nbars();
  double sigma = relative_entropy_gibbs(spec.system_nbar(), nbars[j0]);
  for (int j = j0 + 1; j < spec.machine_modes(); ++j) {
    sigma += relative_entropy_gibbs(nbars[j - 1], nbars[j]);
  }
  return sigma;
}

}  // namespace cvhbac
