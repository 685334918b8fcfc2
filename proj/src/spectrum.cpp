#include "cvhbac/spectrum.hpp"

#include "cvhbac/errors.hpp"
#include "cvhbac/hbac.hpp"
#include "cvhbac/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvhbac {

SpectrumProblem::SpectrumProblem(double g0_in, double gN_in, int N_in) : g0(g0_in), gN(gN_in), N(N_in) {
  if (!(g0 > 0.0) || !std::isfinite(g0) || !std::isfinite(gN)) {
    throw DomainError("SpectrumProblem: g0 must be positive and finite");
  }
  if (!(gN > g0)) throw DomainError("SpectrumProblem: gN must exceed g0");
  if (N < 1) throw ContractError("SpectrumProblem: N must be >= 1");
}

SpectrumProblem SpectrumProblem::from_lambda(double n0, double lambda, int N) {
  if (!(n0 > 0.0)) throw DomainError("SpectrumProblem::from_lambda: n0 must be positive");
  if (!(lambda > 1.0)) throw DomainError("SpectrumProblem::from_lambda: lambda must exceed 1");
  const double g0 = std::log1p(1.0 / n0);
  return SpectrumProblem(g0, lambda * g0, N);
}

const char* to_string(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::numeric:
      return "numeric";
    case SpectrumMethod::analytic_large_n:
      return "analytic-large-N";
  }
  return "unknown";
}

namespace {

double nbar_of(double g) { return 1.0 / std::expm1(g); }

double objective(const Eigen::VectorXd& n) {
  double f = 0.0;
  for (Eigen::Index j = 1; j < n.size(); ++j) f += relative_entropy_gibbs(n(j - 1), n(j));
  return f;
}

// Gradient with respect to n_1..n_{N-1}; component j equals the g-space
// stationarity residual at j with the opposite sign convention.
Eigen::VectorXd gradient(const Eigen::VectorXd& n) {
  const Eigen::Index m = n.size() - 2;
  Eigen::VectorXd grad(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double a = n(i);
    const double b = n(i + 1);
    const double c = n(i + 2);
    grad(i) = (a + 1.0) / (b + 1.0) - a / b + std::log((b / c) * ((c + 1.0) / (b + 1.0)));
  }
  return grad;
}

void hessian_bands(const Eigen::VectorXd& n, Eigen::VectorXd& diag, Eigen::VectorXd& off) {
  const Eigen::Index m = n.size() - 2;
  diag.resize(m);
  off.resize(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double a = n(i);
    const double b = n(i + 1);
    diag(i) = a / (b * b) - (a + 1.0) / ((b + 1.0) * (b + 1.0)) + 1.0 / (b * (b + 1.0));
    if (i + 1 < m) {
      const double c = n(i + 2);
      off(i) = -1.0 / (c * (c + 1.0));
    }
  }
}

// Thomas algorithm for a symmetric tridiagonal system.
Eigen::VectorXd solve_tridiagonal(const Eigen::VectorXd& diag, const Eigen::VectorXd& off,
                                  const Eigen::VectorXd& rhs) {
  const Eigen::Index m = diag.size();
  Eigen::VectorXd cp(m), dp(m), x(m);
  cp(0) = m > 1 ? off(0) / diag(0) : 0.0;
  dp(0) = rhs(0) / diag(0);
  for (Eigen::Index i = 1; i < m; ++i) {
    const double denom = diag(i) - off(i - 1) * cp(i - 1);
    cp(i) = i + 1 < m ? off(i) / denom : 0.0;
    dp(i) = (rhs(i) - off(i - 1) * dp(i - 1)) / denom;
  }
  x(m - 1) = dp(m - 1);
  for (Eigen::Index i = m - 2; i >= 0; --i) x(i) = dp(i) - cp(i) * x(i + 1);
  return x;
}

bool strictly_decreasing_positive(const Eigen::VectorXd& n) {
  for (Eigen::Index j = 0; j < n.size(); ++j) {
    if (!(n(j) > 0.0) || !std::isfinite(n(j))) return false;
    if (j > 0 && !(n(j) < n(j - 1))) return false;
  }
  return true;
}

Eigen::VectorXd g_of(const Eigen::VectorXd& n, const SpectrumProblem& problem) {
  Eigen::VectorXd g(n.size());
  for (Eigen::Index j = 0; j < n.size(); ++j) g(j) = std::log1p(1.0 / n(j));
  g(0) = problem.g0;
  g(g.size() - 1) = problem.gN;
  return g;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

double log_tanh_quarter(double g) {
  const double e = std::exp(-0.5 * g);  // e^{-2u}, u = g/4
  const double log_one_minus_e = e < 0.5 ? std::log1p(-e) : std::log(-std::expm1(-0.5 * g));
  return log_one_minus_e - std::log1p(e);
}

double analytic_point(const SpectrumProblem& problem, int j) {
  if (j < 0 || j > problem.N) throw ContractError("analytic_point: j out of range");
  if (j == 0) return problem.g0;
  if (j == problem.N) return problem.gN;
  const double w = static_cast<double>(j) / (2.0 * problem.N);
  const double x = w * log_tanh_quarter(problem.gN) + (0.5 - w) * log_tanh_quarter(problem.g0);
  // g = 2 ln(-coth x) = 2 ln((1 + e^{2x}) / (1 - e^{2x})), x < 0
  return 2.0 * (std::log1p(std::exp(2.0 * x)) - std::log(-std::expm1(2.0 * x)));
}

Eigen::VectorXd analytic_trajectory(const SpectrumProblem& problem) {
  Eigen::VectorXd g(problem.N + 1);
  for (int j = 0; j <= problem.N; ++j) g(j) = analytic_point(problem, j);
  return g;
}

double sigma_large_n(const SpectrumProblem& problem) {
  const double len = log_tanh_quarter(problem.gN) - log_tanh_quarter(problem.g0);
  return len * len / (2.0 * problem.N);
}

double sigma_star_of_spectrum(const Eigen::VectorXd& g) {
  if (g.size() < 2) throw ContractError("sigma_star_of_spectrum: need at least two points");
  double s = 0.0;
  for (Eigen::Index j = 1; j < g.size(); ++j) {
    s += relative_entropy_gibbs(nbar_of(g(j - 1)), nbar_of(g(j)));
  }
  return s;
}

double stationarity_residual(const Eigen::VectorXd& g) {
  double worst = 0.0;
  for (Eigen::Index j = 1; j + 1 < g.size(); ++j) {
    const double rhs = std::expm1(g(j) - g(j - 1)) * std::expm1(-g(j)) / std::expm1(-g(j - 1));
    worst = std::max(worst, std::abs(g(j + 1) - g(j) - rhs));
  }
  return worst;
}

Eigen::MatrixXd nbar_hessian(const Eigen::VectorXd& g) {
  Eigen::VectorXd n(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) n(j) = nbar_of(g(j));
  Eigen::VectorXd diag, off;
  hessian_bands(n, diag, off);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(diag.size(), diag.size());
  h.diagonal() = diag;
  for (Eigen::Index i = 0; i < off.size(); ++i) {
    h(i, i + 1) = off(i);
    h(i + 1, i) = off(i);
  }
  return h;
}

double min_hessian_eigenvalue(const Eigen::VectorXd& g) {
  if (g.size() <= 2) return std::numeric_limits<double>::infinity();
  Eigen::VectorXd n(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) n(j) = nbar_of(g(j));
  Eigen::VectorXd diag, off;
  hessian_bands(n, diag, off);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SpectrumSolution solve_stationarity(const SpectrumProblem& problem, const NewtonOptions& options) {
  const int N = problem.N;
  Eigen::VectorXd g = analytic_trajectory(problem);
  if (N == 1) {
    return {g, sigma_star_of_spectrum(g), 0.0, SpectrumMethod::numeric, 0,
            std::numeric_limits<double>::infinity()};
  }

  Eigen::VectorXd n(N + 1);
  for (int j = 0; j <= N; ++j) n(j) = nbar_of(g(j));
  if (!strictly_decreasing_positive(n)) {
    throw ConvergenceError("solve_stationarity: analytic start is not monotone", g,
                           stationarity_residual(g));
  }

  int iterations = 0;
  Eigen::VectorXd grad = gradient(n);
  double f = objective(n);
  for (; iterations < options.max_iterations; ++iterations) {
    const double r = max_abs(grad);
    if (r < options.tolerance) break;
    Eigen::VectorXd diag, off;
    hessian_bands(n, diag, off);
    const Eigen::VectorXd step = solve_tridiagonal(diag, off, -grad);

    bool accepted = false;
    double s = 1.0;
    for (int h = 0; h <= options.max_halvings; ++h, s *= 0.5) {
      Eigen::VectorXd trial = n;
      trial.segment(1, N - 1) += s * step;
      if (!strictly_decreasing_positive(trial)) continue;
      const double f_trial = objective(trial);
      const Eigen::VectorXd grad_trial = gradient(trial);
      if (f_trial < f || max_abs(grad_trial) < r) {
        n = std::move(trial);
        f = f_trial;
        grad = grad_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  g = g_of(n, problem);
  const double residual = stationarity_residual(g);
  if (!(residual < options.accept_residual)) {
    throw ConvergenceError("solve_stationarity: no convergence (residual " +
                               std::to_string(residual) + ")",
                           g, residual);
  }
  return {g, sigma_star_of_spectrum(g), residual, SpectrumMethod::numeric, iterations,
          min_hessian_eigenvalue(g)};
}

SpectrumSolution analytic_sampled(const SpectrumProblem& problem) {
  Eigen::VectorXd g = analytic_trajectory(problem);
  const double sigma = sigma_star_of_spectrum(g);
  const double residual = stationarity_residual(g);
  return {std::move(g), sigma, residual, SpectrumMethod::analytic_large_n, 0,
          std::numeric_limits<double>::quiet_NaN()};
}

std::vector<SweepRow> sweep_sigma_vs_lambda(double n0, const std::vector<double>& lambdas,
                                            const std::vector<int>& Ns, int jobs) {
  std::vector<int> ns = Ns;
  std::sort(ns.begin(), ns.end());
  std::vector<double> ls = lambdas;
  std::sort(ls.begin(), ls.end());
  std::vector<SweepRow> rows;
  rows.reserve(ns.size() * ls.size());
  for (int N : ns) {
    for (double l : ls) rows.push_back({N, l, std::nullopt, {}});
  }
  parallel_for(rows.size(), jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    try {
      row.solution = solve_stationarity(SpectrumProblem::from_lambda(n0, row.lambda, row.N));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw DomainError("log_spaced: bounds must be positive");
  if (count < 1) throw ContractError("log_spaced: count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace cvhbac
