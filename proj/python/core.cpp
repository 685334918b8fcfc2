#include "cvhbac/collision.hpp"
#include "cvhbac/errors.hpp"
#include "cvhbac/fock.hpp"
#include "cvhbac/gaussian.hpp"
#include "cvhbac/hbac.hpp"
#include "cvhbac/properties.hpp"
#include "cvhbac/spectrum.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cvhbac;

namespace {

// Stationary system populations of the repeated p-exchange collision.
Eigen::VectorXd stationary_populations(int p, double chi_t, double nbar_s, double nbar_m,
                                       double tail_tol) {
  const CollisionParams c = CollisionParams::from_occupations(p, 1.0, chi_t, nbar_s, nbar_m);
  const FockCutoff cut = FockCutoff::for_gibbs(nbar_s, nbar_m, p, tail_tol);
  const ExchangeHamiltonian h(p, 1.0, c.omega0, c.omega1, cut);
  const Eigen::MatrixXd t = transfer_matrix(evolve_unitary(h, chi_t), nbar_m);
  const int d = static_cast<int>(t.rows());
  // (T - I) x = 0 with the last row replaced by normalisation.
  Eigen::MatrixXd a = t - Eigen::MatrixXd::Identity(d, d);
  a.row(d - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  rhs(d - 1) = 1.0;
  return a.partialPivLu().solve(rhs);
}

// Mean occupation after each of `rounds` collisions, starting from Gibbs(nbar_s).
std::vector<double> collision_trace(int p, double chi_t, double nbar_s, double nbar_m, long rounds,
                                    double tail_tol) {
  const CollisionParams c = CollisionParams::from_occupations(p, 1.0, chi_t, nbar_s, nbar_m);
  const FockCutoff cut = FockCutoff::for_gibbs(nbar_s, nbar_m, p, tail_tol);
  const ExchangeHamiltonian h(p, 1.0, c.omega0, c.omega1, cut);
  const Eigen::MatrixXd t = transfer_matrix(evolve_unitary(h, chi_t), nbar_m);
  Eigen::VectorXd pop = gibbs_populations(nbar_s, cut.d_s);
  pop /= pop.sum();
  const Eigen::VectorXd n = Eigen::VectorXd::LinSpaced(cut.d_s, 0, cut.d_s - 1);
  std::vector<double> out{pop.dot(n)};
  for (long l = 0; l < rounds; ++l) {
    pop = t * pop;
    out.push_back(pop.dot(n));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Continuous-variable heat-bath algorithmic cooling";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<InvalidStateError>(m, "InvalidStateError", PyExc_ValueError);
  py::register_exception<CutoffError>(m, "CutoffError", PyExc_RuntimeError);
  py::register_exception<ValidityError>(m, "ValidityError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  // gaussian
  py::class_<GaussianState>(m, "GaussianState")
      .def(py::init<VectorXcd, MatrixXcd, MatrixXcd>(), "alpha"_a, "excitation"_a, "nu"_a)
      .def_static("vacuum", &GaussianState::vacuum, "modes"_a)
      .def_property_readonly("modes", &GaussianState::modes)
      .def_property_readonly("alpha", &GaussianState::alpha)
      .def_property_readonly("excitation", &GaussianState::excitation)
      .def_property_readonly("nu", &GaussianState::nu)
      .def("mean_excitation", &GaussianState::mean_excitation, "mode"_a);

  py::class_<GaussianUnitary>(m, "GaussianUnitary")
      .def_static("identity", &GaussianUnitary::identity, "modes"_a)
      .def_property_readonly("modes", &GaussianUnitary::modes)
      .def_property_readonly("displacement", &GaussianUnitary::displacement)
      .def_property_readonly("c", &GaussianUnitary::c)
      .def_property_readonly("s", &GaussianUnitary::s)
      .def("is_passive", &GaussianUnitary::is_passive);

  m.def("bose_occupation", &bose_occupation, "beta_omega"_a);
  m.def("thermal_state", [](const std::vector<double>& n) { return thermal_state(n); }, "nbars"_a);
  m.def("apply_unitary", &apply_unitary, "state"_a, "unitary"_a);
  m.def("compose", &compose, "u2"_a, "u1"_a);
  m.def("make_passive", &make_passive, "c"_a);
  m.def("make_swap", &make_swap, "i"_a, "j"_a, "modes"_a);
  m.def("make_beam_splitter", &make_beam_splitter, "i"_a, "j"_a, "modes"_a, "theta"_a);
  m.def("make_squeezer", [](const std::vector<double>& r) { return make_squeezer(r); }, "r"_a);
  m.def("make_phase_shift", [](const std::vector<double>& phi) { return make_phase_shift(phi); },
        "phi"_a);
  m.def("random_gaussian_unitary",
        py::overload_cast<int, std::uint64_t, double>(&random_gaussian_unitary), "modes"_a,
        "seed"_a, "max_squeeze"_a = kDefaultMaxSqueeze);
  m.def("reduce", [](const GaussianState& s, const std::vector<int>& keep) { return reduce(s, keep); },
        "state"_a, "keep"_a);
  m.def("tensor_product", &tensor_product, "a"_a, "b"_a);
  m.def("thermal_excitation", py::overload_cast<const GaussianState&>(&thermal_excitation), "state"_a);
  m.def("thermal_excitation", py::overload_cast<const FockDensity&>(&thermal_excitation), "rho"_a);
  m.def("effective_beta", &effective_beta, "thermal_excitation"_a, "omega"_a);
  m.def("symplectic_eigenvalues", &symplectic_eigenvalues, "state"_a);
  m.def("gaussian_entropy", &gaussian_entropy, "state"_a);

  // hbac
  py::class_<MachineSpec>(m, "MachineSpec")
      .def(py::init<double, double, std::vector<double>>(), "beta"_a, "omega0"_a, "omegas"_a)
      .def_property_readonly("beta", &MachineSpec::beta)
      .def_property_readonly("omega0", &MachineSpec::omega0)
      .def_property_readonly("omegas", &MachineSpec::omegas)
      .def_property_readonly("lambda_", &MachineSpec::lambda)
      .def("can_cool", &MachineSpec::can_cool)
      .def("system_nbar", &MachineSpec::system_nbar)
      .def("machine_nbars", &MachineSpec::machine_nbars);

  py::class_<CoolingLimit>(m, "CoolingLimit")
      .def_readonly("beta_star", &CoolingLimit::beta_star)
      .def_readonly("lambda_", &CoolingLimit::lambda)
      .def_readonly("nth", &CoolingLimit::nth)
      .def_readonly("no_cooling", &CoolingLimit::no_cooling);

  py::class_<SwapChain>(m, "SwapChain")
      .def_readonly("unitary", &SwapChain::unitary)
      .def_readonly("machine_modes", &SwapChain::machine_modes)
      .def_readonly("no_cooling", &SwapChain::no_cooling);

  py::class_<RoundRecord>(m, "RoundRecord")
      .def_readonly("round", &RoundRecord::round)
      .def_readonly("nth", &RoundRecord::nth)
      .def_readonly("beta_eff", &RoundRecord::beta_eff)
      .def_readonly("mean_n", &RoundRecord::mean_n)
      .def_readonly("heat", &RoundRecord::heat)
      .def_readonly("sigma", &RoundRecord::sigma)
      .def_readonly("round_heat", &RoundRecord::round_heat)
      .def_readonly("round_sigma", &RoundRecord::round_sigma)
      .def_readonly("machine_relative", &RoundRecord::machine_relative)
      .def_readonly("mutual_info", &RoundRecord::mutual_info);

  m.def("gaussian_cooling_limit", &gaussian_cooling_limit, "spec"_a);
  m.def("build_swap_chain", &build_swap_chain, "spec"_a);
  m.def("run_protocol",
        [](const MachineSpec& spec, const GaussianUnitary& u, int rounds) {
          return run_protocol(spec, u, rounds).records;
        },
        "spec"_a, "recharger"_a, "rounds"_a);
  m.def("entropy_production_star", &entropy_production_star, "spec"_a);
  m.def("relative_entropy_gibbs", &relative_entropy_gibbs, "nbar_a"_a, "nbar_b"_a);

  // spectrum
  py::class_<SpectrumProblem>(m, "SpectrumProblem")
      .def(py::init<double, double, int>(), "g0"_a, "gN"_a, "N"_a)
      .def_static("from_lambda", &SpectrumProblem::from_lambda, "n0"_a, "lambda_"_a, "N"_a)
      .def_readonly("g0", &SpectrumProblem::g0)
      .def_readonly("gN", &SpectrumProblem::gN)
      .def_readonly("N", &SpectrumProblem::N);

  py::class_<SpectrumSolution>(m, "SpectrumSolution")
      .def_readonly("g", &SpectrumSolution::g)
      .def_readonly("sigma", &SpectrumSolution::sigma)
      .def_readonly("residual", &SpectrumSolution::residual)
      .def_readonly("iterations", &SpectrumSolution::iterations)
      .def_readonly("min_hessian_eigenvalue", &SpectrumSolution::min_hessian_eigenvalue)
      .def_property_readonly("method",
                             [](const SpectrumSolution& s) { return std::string(to_string(s.method)); });

  m.def("solve_stationarity", [](const SpectrumProblem& p) { return solve_stationarity(p); },
        "problem"_a);
  m.def("analytic_trajectory", &analytic_trajectory, "problem"_a);
  m.def("sigma_large_n", &sigma_large_n, "problem"_a);
  m.def("stationarity_residual", &stationarity_residual, "g"_a);

  // collisions
  py::class_<CollisionParams>(m, "CollisionParams")
      .def_static("from_occupations", &CollisionParams::from_occupations, "p"_a, "chi"_a, "t"_a,
                  "nbar_s0"_a, "nbar_m"_a)
      .def_static("from_frequencies", &CollisionParams::from_frequencies, "p"_a, "chi"_a, "t"_a,
                  "beta"_a, "omega0"_a, "omega1"_a)
      .def_readwrite("p", &CollisionParams::p)
      .def_readwrite("chi", &CollisionParams::chi)
      .def_readwrite("t", &CollisionParams::t)
      .def_readwrite("nbar_s0", &CollisionParams::nbar_s0)
      .def_readwrite("nbar_m", &CollisionParams::nbar_m)
      .def_readonly("beta", &CollisionParams::beta)
      .def_readonly("omega0", &CollisionParams::omega0)
      .def_readonly("omega1", &CollisionParams::omega1)
      .def("perturbative", &CollisionParams::perturbative);

  py::class_<IterationCoefficients>(m, "IterationCoefficients")
      .def_readonly("a", &IterationCoefficients::a)
      .def_readonly("b", &IterationCoefficients::b)
      .def_readonly("c_fano", &IterationCoefficients::c_fano);

  py::class_<FanoPoint>(m, "FanoPoint")
      .def_readonly("mean_n", &FanoPoint::mean_n)
      .def_readonly("second_moment", &FanoPoint::second_moment)
      .def_readonly("q", &FanoPoint::q);

  m.def("iteration_coefficients", &iteration_coefficients, "params"_a);
  m.def("short_time_delta", &short_time_delta, "params"_a);
  m.def("iterate_closed_form", &iterate_closed_form, "params"_a, "rounds"_a);
  m.def("asymptote", &asymptote, "params"_a);
  m.def("crossing_time", &crossing_time, "params"_a);
  m.def("cooling_condition", &cooling_condition, "p"_a, "omega0"_a, "omega1"_a);
  m.def("fano_closed_form", &fano_closed_form, "params"_a, "rounds"_a);

  // fock
  py::class_<FockDensity>(m, "FockDensity")
      .def(py::init<Eigen::MatrixXcd>(), "rho"_a)
      .def_static("gibbs", &FockDensity::gibbs, "nbar"_a, "d"_a)
      .def_static("number_state", &FockDensity::number_state, "n"_a, "d"_a)
      .def_property_readonly("dim", &FockDensity::dim)
      .def_property_readonly("matrix", &FockDensity::matrix);
  m.def("mean_excitation", &mean_excitation, "rho"_a);
  m.def("stationary_populations", &stationary_populations, "p"_a, "chi_t"_a, "nbar_s"_a,
        "nbar_m"_a, "tail_tol"_a = 1e-12);
  m.def("collision_trace", &collision_trace, "p"_a, "chi_t"_a, "nbar_s"_a, "nbar_m"_a,
        "rounds"_a, "tail_tol"_a = 1e-12);

  // properties
  py::class_<PropertyReport>(m, "PropertyReport")
      .def_readonly("name", &PropertyReport::name)
      .def_readonly("trials", &PropertyReport::trials)
      .def_readonly("checked", &PropertyReport::checked)
      .def_readonly("violations", &PropertyReport::violations)
      .def_readonly("worst_margin", &PropertyReport::worst_margin)
      .def_readonly("tolerance", &PropertyReport::tolerance)
      .def_property_readonly("passed", &PropertyReport::passed);

  m.def("run_all_suites",
        [](long trials, std::uint64_t seed, int jobs) {
          SuiteOptions o;
          o.trials = trials;
          o.seed = seed;
          o.jobs = jobs;
          return run_all_suites(o);
        },
        "trials"_a = 1000, "seed"_a = 42, "jobs"_a = 1);
}
