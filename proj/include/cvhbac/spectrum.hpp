#pragma once

// Machine-spectrum optimization at fixed endpoints. Frequencies enter only
// through g_j = beta * omega_j; g_0 belongs to the system, g_N to the top
// machine mode.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvhbac {

struct SpectrumProblem {
  SpectrumProblem(double g0, double gN, int N);

  // g0 = ln(1 + 1/n0), gN = lambda * g0.
  static SpectrumProblem from_lambda(double n0, double lambda, int N);

  double g0;
  double gN;
  int N;
};

enum class SpectrumMethod { numeric, analytic_large_n };
const char* to_string(SpectrumMethod m);

struct SpectrumSolution {
  Eigen::VectorXd g;  // g_0 .. g_N, strictly increasing
  double sigma;       // sum of the N relative-entropy gaps
  double residual;    // max stationarity violation over interior points
  SpectrumMethod method;
  int iterations;
  double min_hessian_eigenvalue;  // in nbar-space; +inf when N == 1
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::VectorXd best_g, double residual)
      : std::runtime_error(what), best_g_(std::move(best_g)), residual_(residual) {}
  const Eigen::VectorXd& best_g() const { return best_g_; }
  double residual() const { return residual_; }

 private:
  Eigen::VectorXd best_g_;
  double residual_;
};

struct NewtonOptions {
  int max_iterations = 200;
  int max_halvings = 40;
  double tolerance = 1e-13;  // on the stationarity residual
  double accept_residual = 1e-12;
};

// Damped Newton on the convex objective in nbar-space, started from the
// analytic trajectory.
SpectrumSolution solve_stationarity(const SpectrumProblem& problem,
                                    const NewtonOptions& options = {});

// ln tanh(g/4), evaluated without cancellation for small and large g.
double log_tanh_quarter(double g);

// Closed-form continuum trajectory sampled at j = 0..N.
double analytic_point(const SpectrumProblem& problem, int j);
Eigen::VectorXd analytic_trajectory(const SpectrumProblem& problem);

// Large-N entropy production (1/2N) [ln(tanh(gN/4) / tanh(g0/4))]^2.
double sigma_large_n(const SpectrumProblem& problem);

// Entropy production of the swap chain over a given spectrum g_0..g_N.
double sigma_star_of_spectrum(const Eigen::VectorXd& g);

// Entropy production of the analytic trajectory used as a discrete spectrum.
SpectrumSolution analytic_sampled(const SpectrumProblem& problem);

// max_j | g_{j+1} - g_j - (e^{g_j - g_{j-1}} - 1)(1 - e^{-g_j})/(1 - e^{-g_{j-1}}) |
double stationarity_residual(const Eigen::VectorXd& g);

// Hessian of the objective with respect to the interior occupations n_1..n_{N-1}.
Eigen::MatrixXd nbar_hessian(const Eigen::VectorXd& g);
double min_hessian_eigenvalue(const Eigen::VectorXd& g);

struct SweepRow {
  int N;
  double lambda;
  std::optional<SpectrumSolution> solution;
  std::string error;  // set when the solver failed for this cell
};

// One row per (N, lambda), sorted by N then lambda.
std::vector<SweepRow> sweep_sigma_vs_lambda(double n0, const std::vector<double>& lambdas,
                                            const std::vector<int>& Ns, int jobs = 1);

std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace cvhbac
