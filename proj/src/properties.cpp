#include "cvhbac/properties.hpp"

#include "cvhbac/errors.hpp"
#include "cvhbac/gaussian.hpp"
#include "cvhbac/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace cvhbac {

namespace {

struct TrialResult {
  bool checked = false;
  double margin = std::numeric_limits<double>::infinity();
};

PropertyReport run_suite(const std::string& name, double tolerance, const SuiteOptions& options,
                         const std::function<TrialResult(std::mt19937_64&)>& trial) {
  if (options.trials < 1) throw ContractError("property suite: trials must be >= 1");
  std::vector<TrialResult> results(static_cast<std::size_t>(options.trials));
  parallel_for(results.size(), options.jobs, [&](std::size_t i) {
    std::mt19937_64 rng(trial_seed(options.seed, i));
    results[i] = trial(rng);
  });
  PropertyReport report;
  report.name = name;
  report.trials = options.trials;
  report.tolerance = tolerance;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    if (!r.checked) continue;
    ++report.checked;
    report.worst_margin = std::min(report.worst_margin, r.margin);
    if (r.margin < -tolerance) ++report.violations;
  }
  return report;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// A contraction that is not a Gaussian unitary.
GaussianUnitary corrupted_unitary(int modes) {
  return GaussianUnitary::unchecked(VectorXcd::Zero(modes),
                                    0.5 * MatrixXcd::Identity(modes, modes),
                                    MatrixXcd::Zero(modes, modes));
}

GaussianUnitary sample_unitary(int modes, std::mt19937_64& rng, const SuiteOptions& options) {
  GaussianUnitary u = random_gaussian_unitary(modes, rng);
  if (options.inject_failure) return corrupted_unitary(modes);
  return u;
}

// Random single-mode Gaussian state with thermal excitation nth.
GaussianState random_single_mode(double nth, std::mt19937_64& rng) {
  const double n = nth;
  GaussianState s = thermal_state(std::span<const double>(&n, 1));
  const GaussianUnitary dress = random_gaussian_unitary(1, rng, 1.0);
  const cplx alpha(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0));
  return apply_unitary(apply_unitary(s, dress), make_displacement(std::span<const cplx>(&alpha, 1)));
}

MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXcd x(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) x(r, c) = cplx(normal(rng), normal(rng));
  }
  return 0.5 * (x + x.adjoint());
}

MatrixXcd unitary_exp(const MatrixXcd& hermitian, double epsilon) {
  const Eigen::SelfAdjointEigenSolver<MatrixXcd> es(hermitian);
  const VectorXcd phases =
      (es.eigenvalues().cast<cplx>() * cplx(0.0, epsilon)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

MachineSpec random_spec(std::mt19937_64& rng, int max_machine_modes, double lambda_lo,
                        double lambda_hi) {
  if (max_machine_modes < 1) throw ContractError("random_spec: need at least one machine mode");
  if (!(lambda_lo > 0.0) || !(lambda_hi >= lambda_lo)) {
    throw DomainError("random_spec: invalid lambda range");
  }
  const int n = std::uniform_int_distribution<int>(1, max_machine_modes)(rng);
  const double beta = uniform(rng, 0.2, 3.0);
  const double omega0 = uniform(rng, 0.2, 2.0);
  const double lambda = std::exp(uniform(rng, std::log(lambda_lo), std::log(lambda_hi)));
  const double top = lambda * omega0;
  std::vector<double> omegas;
  for (int j = 0; j + 1 < n; ++j) omegas.push_back(uniform(rng, 0.3 * omega0, top));
  omegas.push_back(top);
  std::sort(omegas.begin(), omegas.end());
  return MachineSpec(beta, omega0, std::move(omegas));
}

PropertyReport symplectic_suite(const SuiteOptions& options, int modes) {
  return run_suite("symplectic-constraints", tol::kSymplectic, options, [&](std::mt19937_64& rng) {
    const GaussianUnitary u = sample_unitary(modes, rng, options);
    const auto res = u.residuals();
    const double worst = std::max({res.normalization, res.symmetry, res.determinant});
    return TrialResult{true, -worst};
  });
}

PropertyReport lemma1_suite(const SuiteOptions& options, int modes) {
  if (modes < 2) throw ContractError("lemma1_suite: need at least two modes");
  return run_suite("thermal-excitation-minimum", 1e-9, options, [&](std::mt19937_64& rng) {
    double min_in = uniform(rng, 0.0, 5.0);
    GaussianState input = random_single_mode(min_in, rng);
    for (int j = 1; j < modes; ++j) {
      const double nth = uniform(rng, 0.0, 5.0);
      min_in = std::min(min_in, nth);
      input = tensor_product(input, random_single_mode(nth, rng));
    }
    const GaussianState out = apply_unitary(input, sample_unitary(modes, rng, options));
    const int keep[] = {0};
    return TrialResult{true, thermal_excitation(reduce(out, keep)) - min_in};
  });
}

PropertyReport eigenvalue_dominance_suite(const SuiteOptions& options, int dim) {
  return run_suite("eigenvalue-dominance", 1e-10, options, [&](std::mt19937_64& rng) {
    const MatrixXcd u = haar_unitary(dim, rng);
    const MatrixXcd v = haar_unitary(dim, rng);
    VectorXcd s(dim);
    for (int k = 0; k < dim; ++k) s(k) = options.inject_failure ? 0.5 : uniform(rng, 1.0, 3.0);
    const MatrixXcd l = u * s.asDiagonal() * v;
    const MatrixXcd x = random_hermitian(dim, rng) + cplx(0.0, 1.0) * random_hermitian(dim, rng);
    const MatrixXcd o = x * x.adjoint();
    const MatrixXcd lol = l * o * l.adjoint();
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> eo(o, Eigen::EigenvaluesOnly);
    const Eigen::SelfAdjointEigenSolver<MatrixXcd> el(0.5 * (lol + lol.adjoint()),
                                                      Eigen::EigenvaluesOnly);
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < dim; ++k) {
      const double scale = std::max(1.0, std::abs(eo.eigenvalues()(k)));
      margin = std::min(margin, (el.eigenvalues()(k) - eo.eigenvalues()(k)) / scale);
    }
    return TrialResult{true, margin};
  });
}

PropertyReport majorization_suite(const SuiteOptions& options, int modes) {
  return run_suite("occupation-majorization", 1e-9, options, [&](std::mt19937_64& rng) {
    std::vector<double> nbars(static_cast<std::size_t>(modes));
    for (auto& n : nbars) n = uniform(rng, 0.0, 5.0);
    const GaussianState out =
        apply_unitary(thermal_state(nbars), sample_unitary(modes, rng, options));
    std::vector<double> n_out(static_cast<std::size_t>(modes));
    for (int j = 0; j < modes; ++j) n_out[j] = out.mean_excitation(j);
    std::sort(nbars.begin(), nbars.end(), std::greater<>());
    std::sort(n_out.begin(), n_out.end(), std::greater<>());
    double margin = std::numeric_limits<double>::infinity();
    double tail_in = 0.0;
    double tail_out = 0.0;
    for (int k = modes - 1; k >= 0; --k) {
      tail_in += nbars[k];
      tail_out += n_out[k];
      margin = std::min(margin, (tail_out - tail_in) / std::max(1.0, tail_in));
    }
    return TrialResult{true, margin};
  });
}

constexpr double kMaxTrackedExcitation = 1e6;

PropertyReport cooling_bound_suite(const SuiteOptions& options) {
  return run_suite("cooling-limit-bound", 1e-9, options, [&](std::mt19937_64& rng) {
    const MachineSpec spec = random_spec(rng);
    const GaussianUnitary u = sample_unitary(spec.total_modes(), rng, options);
    const int rounds = std::uniform_int_distribution<int>(1, 20)(rng);
    const double floor = bose_occupation(spec.beta() * spec.omega_max());
    const GaussianState machine = spec.machine_gibbs();
    GaussianState system = spec.system_gibbs();
    const int keep[] = {0};
    double margin = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rounds; ++r) {
      system = reduce(apply_unitary(tensor_product(system, machine), u), keep);
      // Amplifying rechargers grow the moments geometrically; past this size the
      // thermal excitation loses more than the tolerance to cancellation.
      if (system.excitation()(0, 0).real() > kMaxTrackedExcitation) break;
      margin = std::min(margin, thermal_excitation(system) - floor);
    }
    return TrialResult{true, margin};
  });
}

PropertyReport entropy_bound_suite(const SuiteOptions& options) {
  return run_suite("entropy-production-bound", 1e-6, options, [&](std::mt19937_64& rng) {
    const MachineSpec spec = random_spec(rng, 5, 1.1, 20.0);
    const int modes = spec.total_modes();
    const SwapChain chain = build_swap_chain(spec);
    const double epsilon = uniform(rng, 0.0, 1e-4);
    const MatrixXcd kick = unitary_exp(random_hermitian(modes, rng), epsilon);
    GaussianUnitary v = compose(make_passive(kick), chain.unitary);
    if (options.inject_failure) {
      v = GaussianUnitary::unchecked(VectorXcd::Zero(modes), 0.9 * chain.unitary.c(),
                                     MatrixXcd::Zero(modes, modes));
    }
    const CoolingTrace trace = run_protocol(spec, v, 1);
    const double limit = bose_occupation(spec.beta() * spec.omega_max());
    if (!options.inject_failure && std::abs(trace.records[1].nth - limit) > 1e-6) return TrialResult{};
    return TrialResult{true, trace.records[1].sigma - entropy_production_star(spec)};
  });
}

std::vector<PropertyReport> run_all_suites(const SuiteOptions& options) {
  return {symplectic_suite(options),          lemma1_suite(options),
          eigenvalue_dominance_suite(options), majorization_suite(options),
          cooling_bound_suite(options),        entropy_bound_suite(options)};
}

}  // namespace cvhbac
