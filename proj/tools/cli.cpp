#include "cli.hpp"

#include "table.hpp"

#include "cvhbac/collision.hpp"
#include "cvhbac/errors.hpp"
#include "cvhbac/fock.hpp"
#include "cvhbac/gaussian.hpp"
#include "cvhbac/hbac.hpp"
#include "cvhbac/parallel.hpp"
#include "cvhbac/properties.hpp"
#include "cvhbac/spectrum.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#ifndef CVHBAC_VERSION
#define CVHBAC_VERSION "0.0.0"
#endif

namespace cvhbac::cli {

namespace {

struct Common {
  std::string format = "csv";
  std::uint64_t seed = 42;
  int jobs = 1;
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--out", c.out, "Output file (default: stdout)");
  sub->add_option("--config", c.config, "Flat key = value config file; command-line flags win");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::optional<std::string> find_config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

// Effective option values of the selected subcommand, sorted by key.
std::vector<std::pair<std::string, std::string>> effective_config(CLI::App* sub,
                                                                  const std::set<std::string>& flags) {
  std::vector<std::pair<std::string, std::string>> out;
  for (CLI::Option* opt : sub->get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty()) continue;
    const std::string& name = names.front();
    if (name == "help" || name == "out" || name == "config") continue;
    std::string value;
    if (flags.count(name)) {
      value = opt->count() > 0 ? "true" : "false";
    } else if (opt->count() > 0) {
      value = join(opt->results(), ",");
    } else {
      value = opt->get_default_str();
      if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
        value = value.substr(1, value.size() - 2);
      }
    }
    out.emplace_back(name, value);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string num(double x) { return format_number(x); }
std::string num(long x) { return format_number(x); }
std::string num(int x) { return format_number(x); }

// ---------------------------------------------------------------------------
// limit

struct LimitArgs {
  double beta = 1.0;
  double omega0 = 1.0;
  std::vector<double> omegas;
};

Table cmd_limit(const LimitArgs& a, std::ostream& err) {
  const MachineSpec spec(a.beta, a.omega0, a.omegas);
  const CoolingLimit lim = gaussian_cooling_limit(spec);
  const SwapChain chain = build_swap_chain(spec);
  const CoolingTrace trace = run_protocol(spec, chain.unitary, 1);
  const RoundRecord& r1 = trace.records[1];
  const double sigma_star = entropy_production_star(spec);
  const double rel = std::abs(r1.beta_eff - lim.beta_star) / lim.beta_star;
  const bool verified = rel <= 1e-10 && std::abs(r1.sigma - sigma_star) <= 1e-9;

  Table t;
  if (lim.no_cooling) {
    err << "warning: no machine frequency exceeds omega0; the identity is optimal and beta* = beta\n";
    t.add_meta("warning", "no-cooling");
  }
  t.columns = {"beta",    "omega0",          "omega_max",  "lambda",     "beta_star",
               "nth_limit", "no_cooling",    "beta_eff_round1", "nth_round1", "sigma_star",
               "sigma_trace", "verified"};
  t.rows.push_back({num(a.beta), num(a.omega0), num(spec.omega_max()), num(lim.lambda),
                    num(lim.beta_star), num(lim.nth), lim.no_cooling ? "true" : "false",
                    num(r1.beta_eff), num(r1.nth), num(sigma_star), num(r1.sigma),
                    verified ? "true" : "false"});
  if (!verified) {
    t.add_meta("invariant_violation",
               fmt::format("one-round swap chain missed the cooling limit (relative beta error {:.3e})", rel));
  }
  return t;
}

// ---------------------------------------------------------------------------
// optimize-spectrum

struct SpectrumArgs {
  double n0 = 10.0;
  std::vector<double> lambdas;
  double lambda_min = 1.05;
  double lambda_max = 20.0;
  int lambda_count = 60;
  std::vector<int> Ns = {1, 2, 4};
};

Table cmd_optimize_spectrum(const SpectrumArgs& a, int jobs) {
  std::vector<double> lambdas =
      a.lambdas.empty() ? log_spaced(a.lambda_min, a.lambda_max, a.lambda_count) : a.lambdas;
  for (int N : a.Ns) {
    if (N < 1) throw ContractError("optimize-spectrum: every N must be >= 1");
  }
  for (double l : lambdas) {
    if (!(l > 1.0)) throw DomainError("optimize-spectrum: every lambda must exceed 1");
  }
  const std::vector<SweepRow> rows = sweep_sigma_vs_lambda(a.n0, lambdas, a.Ns, jobs);
  const int max_n = *std::max_element(a.Ns.begin(), a.Ns.end());

  Table t;
  t.columns = {"N",        "lambda", "g0", "gN", "sigma_star_star", "sigma_analytic_sampled",
               "sigma_large_n", "residual", "min_hessian_eigenvalue", "iterations", "status"};
  for (int j = 0; j <= max_n; ++j) t.columns.push_back("g_" + std::to_string(j));
  int failures = 0;
  for (const SweepRow& row : rows) {
    const SpectrumProblem problem = SpectrumProblem::from_lambda(a.n0, row.lambda, row.N);
    std::vector<std::string> cells = {num(row.N), num(row.lambda), num(problem.g0),
                                      num(problem.gN)};
    const SpectrumSolution sampled = analytic_sampled(problem);
    if (row.solution) {
      const SpectrumSolution& s = *row.solution;
      const bool ok = s.residual < 1e-12 && s.min_hessian_eigenvalue > 0.0;
      if (!ok) ++failures;
      cells.insert(cells.end(), {num(s.sigma), num(sampled.sigma), num(sigma_large_n(problem)),
                                 num(s.residual), num(s.min_hessian_eigenvalue),
                                 num(s.iterations), ok ? "ok" : "invariant-failure"});
      for (int j = 0; j <= max_n; ++j) cells.push_back(j <= row.N ? num(s.g(j)) : std::string());
    } else {
      ++failures;
      cells.insert(cells.end(), {"", num(sampled.sigma), num(sigma_large_n(problem)), "", "", "",
                                 "error: " + row.error});
      for (int j = 0; j <= max_n; ++j) cells.emplace_back();
    }
    t.rows.push_back(std::move(cells));
  }
  t.add_meta("large_n_formula", "(1/2N) [ln(tanh(gN/4)/tanh(g0/4))]^2");
  if (failures > 0) {
    t.add_meta("invariant_violation", fmt::format("{} cells failed", failures));
  }
  return t;
}

// ---------------------------------------------------------------------------
// simulate-gaussian

struct GaussianArgs {
  double beta = 1.0;
  double omega0 = 1.0;
  std::vector<double> omegas;
  int rounds = 3;
  std::string recharger = "swap-chain";
  double theta = 0.7853981633974483;
  int mode = 0;  // 0 selects the top machine mode
  double max_squeeze = kDefaultMaxSqueeze;
  std::vector<double> c_real, c_imag, s_real, s_imag;
};

MatrixXcd matrix_from(const std::vector<double>& re, const std::vector<double>& im, int n,
                      const char* what) {
  const auto size = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if ((!re.empty() && re.size() != size) || (!im.empty() && im.size() != size)) {
    throw ContractError(fmt::format("{}: expected {} row-major entries", what, size));
  }
  MatrixXcd m = MatrixXcd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const std::size_t k = static_cast<std::size_t>(r) * n + c;
      m(r, c) = cplx(re.empty() ? 0.0 : re[k], im.empty() ? 0.0 : im[k]);
    }
  }
  return m;
}

Table cmd_simulate_gaussian(const GaussianArgs& a, std::uint64_t seed) {
  if (a.rounds < 0) throw ContractError("simulate-gaussian: rounds must be >= 0");
  const MachineSpec spec(a.beta, a.omega0, a.omegas);
  const int modes = spec.total_modes();
  std::optional<GaussianUnitary> u;
  if (a.recharger == "swap-chain") {
    u = build_swap_chain(spec).unitary;
  } else if (a.recharger == "identity") {
    u = GaussianUnitary::identity(modes);
  } else if (a.recharger == "beam-splitter") {
    const int m = a.mode == 0 ? spec.machine_modes() : a.mode;
    u = make_beam_splitter(0, m, modes, a.theta);
  } else if (a.recharger == "random") {
    u = random_gaussian_unitary(modes, seed, a.max_squeeze);
  } else {
    if (a.c_real.empty() && a.c_imag.empty()) {
      throw ContractError("simulate-gaussian: custom recharger needs --c-real/--c-imag");
    }
    u = GaussianUnitary(VectorXcd::Zero(modes), matrix_from(a.c_real, a.c_imag, modes, "C"),
                        matrix_from(a.s_real, a.s_imag, modes, "S"));
  }

  const CoolingTrace trace = run_protocol(spec, *u, a.rounds);
  const CoolingLimit lim = gaussian_cooling_limit(spec);
  Table t;
  t.add_meta("beta_star", num(lim.beta_star));
  t.add_meta("sigma_star", num(entropy_production_star(spec)));
  t.add_meta("decomposition_residual", num(trace.decomposition_residual));
  t.add_meta("entropy_precision", "1e-8");
  t.columns = {"round", "nth",         "beta_eff",         "mean_n",     "Q",
               "Sigma", "round_Q",     "round_Sigma",      "machine_relative_entropy",
               "mutual_information"};
  bool ok = trace.decomposition_residual <= 1e-8;
  double prev_nth = trace.records.front().nth;
  for (const RoundRecord& r : trace.records) {
    ok = ok && r.sigma >= -1e-8;
    if (a.recharger == "swap-chain") ok = ok && r.nth <= prev_nth + 1e-12;
    prev_nth = r.nth;
    t.rows.push_back({num(r.round), num(r.nth), num(r.beta_eff), num(r.mean_n), num(r.heat),
                      num(r.sigma), num(r.round_heat), num(r.round_sigma),
                      num(r.machine_relative), num(r.mutual_info)});
  }
  if (!ok) t.add_meta("invariant_violation", "entropy production or monotonicity violated");
  return t;
}

// ---------------------------------------------------------------------------
// simulate-pexchange

struct PexchangeArgs {
  std::vector<int> ps = {2};
  double nbar_s = 2.0;
  std::vector<double> nbar_ms = {1.5};
  double chi = 1.0;
  double t = 5e-3;
  long rounds = 20000;
  long stride = 100;
  int cutoff = 0;
  double tail_tol = kGibbsTailTolerance;
  double omega0 = 0.0;
  double omega1 = 0.0;
  double t_max = 0.0;
  int t_count = 0;
};

struct PexchangeRun {
  int p;
  double nbar_m;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
};

FockCutoff pexchange_cutoff(const PexchangeArgs& a, int p, double nbar_m) {
  if (a.cutoff <= 0) return FockCutoff::for_gibbs(a.nbar_s, nbar_m, p, a.tail_tol);
  const FockCutoff c{a.cutoff, a.cutoff};
  c.validate(p);
  const double tail = std::max(gibbs_tail_mass(a.nbar_s, c.d_s), gibbs_tail_mass(nbar_m, c.d_m));
  if (tail > a.tail_tol) {
    throw CutoffError(fmt::format("cutoff {} leaves Gibbs tail {:.3e} above {:.1e}", a.cutoff, tail,
                                  a.tail_tol),
                      tail);
  }
  return c;
}

PexchangeRun run_pexchange(const PexchangeArgs& a, int p, double nbar_m) {
  const double beta = 1.0;
  const double w0 = a.omega0 > 0.0 ? a.omega0 : std::log1p(1.0 / a.nbar_s);
  const double w1 = a.omega1 > 0.0 ? a.omega1 : std::log1p(1.0 / nbar_m);
  const double ns = a.omega0 > 0.0 ? bose_occupation(beta * w0) : a.nbar_s;
  const double nm = a.omega1 > 0.0 ? bose_occupation(beta * w1) : nbar_m;
  const FockCutoff cut = pexchange_cutoff(a, p, std::max(ns, nm));
  const ExchangeHamiltonian h(p, a.chi, w0, w1, cut);
  const FockDensity rho0 = FockDensity::gibbs(ns, cut.d_s);
  const std::string tag = fmt::format("p={},nbar_m={}", p, num(nm));

  PexchangeRun run{p, nm, {}, {}};
  run.meta.emplace_back("cutoff[" + tag + "]", fmt::format("{}x{}", cut.d_s, cut.d_m));
  auto params_at = [&](double t) {
    CollisionParams c = CollisionParams::from_frequencies(p, a.chi, t, beta, w0, w1);
    c.nbar_s0 = ns;
    c.nbar_m = nm;
    return c;
  };

  if (a.t_count > 0) {
    // Single collision as a function of interaction time.
    for (int i = 0; i < a.t_count; ++i) {
      const double t = a.t_count == 1 ? a.t_max : a.t_max * i / (a.t_count - 1);
      const SectorUnitary u = evolve_unitary(h, t);
      const CollisionResult r = single_collision(rho0, nm, u);
      const FockMoments m = moments(r.rho);
      const CollisionParams params = params_at(t);
      std::string closed_q;
      if (iteration_coefficients(params).a < 1.0) closed_q = num(fano_closed_form(params, 1).q);
      run.rows.push_back({num(p), num(nm), "1", num(t), num(m.mean_n), num(short_time_update(params)),
                          num(fano_factor(m.mean_n, m.second_moment)), closed_q});
    }
    const auto tc = crossing_time(params_at(a.t));
    run.meta.emplace_back("crossing_time[" + tag + "]", tc ? num(*tc) : std::string("none"));
    return run;
  }

  const SectorUnitary u = evolve_unitary(h, a.t);
  const CollisionParams params = params_at(a.t);
  const CollisionTrace trace = iterate_collisions(rho0, nm, u, a.rounds, a.stride);
  const bool closed_ok = iteration_coefficients(params).a < 1.0;
  for (const CollisionRecord& r : trace.records) {
    std::string cf_n, cf_q;
    if (closed_ok) {
      const FanoPoint f = fano_closed_form(params, r.round);
      cf_n = num(f.mean_n);
      cf_q = num(f.q);
    }
    run.rows.push_back({num(p), num(nm), num(r.round), num(a.t * static_cast<double>(r.round)),
                        num(r.mean_n), cf_n, num(r.fano_q), cf_q});
  }
  const Eigen::VectorXd fixed = stationary_state(transfer_matrix(u, nm));
  double fixed_mean = 0.0;
  for (Eigen::Index k = 0; k < fixed.size(); ++k) fixed_mean += k * fixed(k);
  run.meta.emplace_back("stationary_nbar[" + tag + "]", num(fixed_mean));
  run.meta.emplace_back("stationary_tv_geometric[" + tag + "]", num(geometric_tv_distance(fixed)));
  if (closed_ok) run.meta.emplace_back("asymptote[" + tag + "]", num(asymptote(params)));
  run.meta.emplace_back("max_boundary_weight[" + tag + "]", num(trace.max_boundary_weight));
  if (!params.perturbative()) {
    run.meta.emplace_back("warning[" + tag + "]", "outside perturbative window");
  }
  return run;
}

Table cmd_simulate_pexchange(const PexchangeArgs& a, int jobs, bool chi_given, std::ostream& err) {
  if (a.rounds < 1) throw ContractError("simulate-pexchange: rounds must be >= 1");
  if (a.stride < 1) throw ContractError("simulate-pexchange: stride must be >= 1");
  if (!(a.nbar_s > 0.0)) throw DomainError("simulate-pexchange: nbar-s must be positive");
  if (a.t_count > 0 && !(a.t_max > 0.0)) throw DomainError("simulate-pexchange: t-max must be positive");
  for (int p : a.ps) {
    if (p < 1) throw DomainError("simulate-pexchange: p must be >= 1");
  }
  for (double n : a.nbar_ms) {
    if (!(n > 0.0)) throw DomainError("simulate-pexchange: nbar-m must be positive");
  }

  std::vector<std::pair<int, double>> cells;
  for (int p : a.ps) {
    for (double n : a.nbar_ms) cells.emplace_back(p, n);
  }
  std::sort(cells.begin(), cells.end());
  std::vector<std::optional<PexchangeRun>> runs(cells.size());
  parallel_for(cells.size(), jobs,
               [&](std::size_t i) { runs[i] = run_pexchange(a, cells[i].first, cells[i].second); });

  Table t;
  t.add_meta("assumption.chi", chi_given ? "user supplied" : "default 1; dynamics depend on chi t");
  t.add_meta("assumption.frequencies",
             "beta = 1, omega = ln(1 + 1/nbar) unless --omega0/--omega1 given");
  t.add_meta("coefficient.a", "(chi t)^2 p! [(1 + nbar_m)^p - nbar_m^p]");
  t.columns = {"p", "nbar_m", "L", "t", "nbar_oracle", "nbar_closed_form", "q_oracle",
               "q_closed_form"};
  for (auto& run : runs) {
    for (auto& m : run->meta) {
      if (m.first.rfind("warning", 0) == 0) err << "warning: " << m.first << " " << m.second << "\n";
      t.metadata.push_back(std::move(m));
    }
    for (auto& row : run->rows) t.rows.push_back(std::move(row));
  }
  return t;
}

// ---------------------------------------------------------------------------
// property-suite

struct SuiteArgs {
  long trials = 10000;
  std::vector<std::string> suites;
  bool inject_failure = false;
};

Table cmd_property_suite(const SuiteArgs& a, const Common& c) {
  SuiteOptions opts;
  opts.trials = a.trials;
  opts.seed = c.seed;
  opts.jobs = c.jobs;
  opts.inject_failure = a.inject_failure;
  const std::vector<std::pair<std::string, std::function<PropertyReport()>>> all = {
      {"symplectic", [&] { return symplectic_suite(opts); }},
      {"lemma1", [&] { return lemma1_suite(opts); }},
      {"eigenvalue-dominance", [&] { return eigenvalue_dominance_suite(opts); }},
      {"majorization", [&] { return majorization_suite(opts); }},
      {"cooling-bound", [&] { return cooling_bound_suite(opts); }},
      {"entropy-bound", [&] { return entropy_bound_suite(opts); }},
  };
  Table t;
  if (a.inject_failure) t.add_meta("failure_injection", "non-symplectic contraction");
  t.columns = {"suite", "property", "trials", "checked", "violations", "worst_margin", "tolerance",
               "passed"};
  bool ok = true;
  for (const auto& [key, fn] : all) {
    if (!a.suites.empty() && std::find(a.suites.begin(), a.suites.end(), key) == a.suites.end()) {
      continue;
    }
    const PropertyReport r = fn();
    ok = ok && r.passed();
    t.rows.push_back({key, r.name, num(r.trials), num(r.checked), num(r.violations),
                      num(r.worst_margin), num(r.tolerance), r.passed() ? "true" : "false"});
  }
  if (t.rows.empty()) throw ContractError("property-suite: no suite selected");
  if (!ok) {
    t.add_meta("invariant_violation", "property violations found");
  }
  return t;
}

}  // namespace

std::map<std::string, std::string> read_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(fmt::format("config line {}: expected key = value", lineno));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos) {
      throw std::runtime_error(fmt::format("config line {}: invalid key", lineno));
    }
    if (out.count(key)) throw std::runtime_error(fmt::format("config line {}: duplicate key '{}'", lineno, key));
    out[key] = value;
  }
  return out;
}

int run(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args = args_in;

  // Config-file values become flags unless the same flag is on the command line.
  if (const auto path = find_config_path(args)) {
    std::ifstream f(*path);
    if (!f) {
      err << "error: cannot read config file '" << *path << "'\n";
      return kExitUsage;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
      for (const auto& [k, v] : read_config(ss.str())) {
        if (k == "config" || given_on_command_line(args, k)) continue;
        args.push_back("--" + k + "=" + v);
      }
    } catch (const std::exception& e) {
      err << "error: " << *path << ": " << e.what() << "\n";
      return kExitUsage;
    }
  }

  CLI::App app{"Heat-bath algorithmic cooling toolkit for bosonic modes", "cvhbac"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CVHBAC_VERSION);

  Common common;
  LimitArgs limit_args;
  SpectrumArgs spectrum_args;
  GaussianArgs gaussian_args;
  PexchangeArgs pex_args;
  SuiteArgs suite_args;
  std::set<std::string> flags = {"inject-failure"};

  auto* limit = app.add_subcommand("limit", "Gaussian cooling limit with one-round verification");
  limit->add_option("--beta", limit_args.beta, "Inverse temperature")->capture_default_str();
  limit->add_option("--omega0", limit_args.omega0, "System frequency")->capture_default_str();
  limit->add_option("--omegas", limit_args.omegas, "Machine frequencies (nondecreasing)")
      ->delimiter(',')
      ->required();
  add_common(limit, common);

  auto* spectrum = app.add_subcommand("optimize-spectrum", "Minimal entropy production over machine spectra");
  spectrum->add_option("--n0", spectrum_args.n0, "Initial system occupation")->capture_default_str();
  spectrum->add_option("--lambda", spectrum_args.lambdas, "Explicit lambda values")->delimiter(',');
  spectrum->add_option("--lambda-min", spectrum_args.lambda_min)->capture_default_str();
  spectrum->add_option("--lambda-max", spectrum_args.lambda_max)->capture_default_str();
  spectrum->add_option("--lambda-count", spectrum_args.lambda_count)->capture_default_str();
  spectrum->add_option("--N", spectrum_args.Ns, "Machine sizes")->delimiter(',')->capture_default_str();
  add_common(spectrum, common);

  auto* gauss = app.add_subcommand("simulate-gaussian", "Gaussian protocol trace");
  gauss->add_option("--beta", gaussian_args.beta)->capture_default_str();
  gauss->add_option("--omega0", gaussian_args.omega0)->capture_default_str();
  gauss->add_option("--omegas", gaussian_args.omegas)->delimiter(',')->required();
  gauss->add_option("--rounds", gaussian_args.rounds)->capture_default_str();
  gauss->add_option("--recharger", gaussian_args.recharger)
      ->check(CLI::IsMember({"swap-chain", "identity", "beam-splitter", "random", "custom"}))
      ->capture_default_str();
  gauss->add_option("--theta", gaussian_args.theta, "Beam-splitter angle")->capture_default_str();
  gauss->add_option("--mode", gaussian_args.mode, "Beam-splitter machine mode (1-based; 0 = top)")
      ->capture_default_str();
  gauss->add_option("--max-squeeze", gaussian_args.max_squeeze)->capture_default_str();
  gauss->add_option("--c-real", gaussian_args.c_real, "Custom C, real parts, row-major")->delimiter(',');
  gauss->add_option("--c-imag", gaussian_args.c_imag)->delimiter(',');
  gauss->add_option("--s-real", gaussian_args.s_real)->delimiter(',');
  gauss->add_option("--s-imag", gaussian_args.s_imag)->delimiter(',');
  add_common(gauss, common);

  auto* pex = app.add_subcommand("simulate-pexchange", "p-excitation exchange: brute force vs closed form");
  pex->add_option("--p", pex_args.ps)->delimiter(',')->capture_default_str();
  pex->add_option("--nbar-s", pex_args.nbar_s)->capture_default_str();
  pex->add_option("--nbar-m", pex_args.nbar_ms)->delimiter(',')->capture_default_str();
  auto* chi_opt = pex->add_option("--chi", pex_args.chi)->capture_default_str();
  pex->add_option("--t", pex_args.t, "Collision time")->capture_default_str();
  pex->add_option("--rounds", pex_args.rounds)->capture_default_str();
  pex->add_option("--stride", pex_args.stride, "Record every n-th round")->capture_default_str();
  pex->add_option("--cutoff", pex_args.cutoff, "Fock cutoff per mode (0 = adaptive)")->capture_default_str();
  pex->add_option("--tail-tol", pex_args.tail_tol)->capture_default_str();
  pex->add_option("--omega0", pex_args.omega0, "System frequency (0 = from nbar-s)")->capture_default_str();
  pex->add_option("--omega1", pex_args.omega1, "Machine frequency (0 = from nbar-m)")->capture_default_str();
  pex->add_option("--t-max", pex_args.t_max, "Single-collision time sweep upper end")->capture_default_str();
  pex->add_option("--t-count", pex_args.t_count, "Single-collision time sweep points")->capture_default_str();
  add_common(pex, common);

  auto* suite = app.add_subcommand("property-suite", "Randomized inequality checks");
  suite->add_option("--trials", suite_args.trials)->check(CLI::PositiveNumber)->capture_default_str();
  suite->add_option("--suite", suite_args.suites, "Subset of suites")->delimiter(',');
  suite->add_flag("--inject-failure", suite_args.inject_failure);
  add_common(suite, common);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("cvhbac");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const Format format = common.format == "json" ? Format::json : Format::csv;

  Table table;
  int status = kExitOk;
  try {
    if (command == "limit") {
      table = cmd_limit(limit_args, err);
    } else if (command == "optimize-spectrum") {
      table = cmd_optimize_spectrum(spectrum_args, common.jobs);
    } else if (command == "simulate-gaussian") {
      table = cmd_simulate_gaussian(gaussian_args, common.seed);
    } else if (command == "simulate-pexchange") {
      table = cmd_simulate_pexchange(pex_args, common.jobs, chi_opt->count() > 0, err);
    } else {
      table = cmd_property_suite(suite_args, common);
    }
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CutoffError& e) {
    err << "cutoff error: " << e.what() << " (leakage " << e.leakage() << ")\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitInvariant;
  }

  if (table.meta("invariant_violation")) status = kExitInvariant;

  const auto config = effective_config(sub, flags);
  std::string canonical = command + "\n";
  for (const auto& [k, v] : config) canonical += k + "=" + v + "\n";

  Table result;
  result.add_meta("tool", "cvhbac");
  result.add_meta("version", CVHBAC_VERSION);
  result.add_meta("command", command);
  result.add_meta("config_hash", fnv1a_hex(canonical));
  result.add_meta("seed", std::to_string(common.seed));
  for (const auto& [k, v] : config) result.add_meta("config." + k, v);
  for (auto& m : table.metadata) result.metadata.push_back(std::move(m));
  result.columns = std::move(table.columns);
  result.rows = std::move(table.rows);

  const std::string text = render_table(result, format);
  if (common.out.empty()) {
    out << text;
  } else {
    std::ofstream f(common.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << common.out << "'\n";
      return kExitUsage;
    }
    f << text;
  }
  if (status == kExitInvariant) err << "invariant failure: " << *result.meta("invariant_violation") << "\n";
  return status;
}

}  // namespace cvhbac::cli
