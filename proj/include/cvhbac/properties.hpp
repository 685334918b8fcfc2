#pragma once

// Randomized checks of the Gaussian cooling inequalities. Every trial draws
// from its own generator seeded by trial_seed(seed, trial), so results do not
// depend on the number of worker threads.

#include "cvhbac/hbac.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace cvhbac {

struct PropertyReport {
  std::string name;
  long trials = 0;
  long checked = 0;     // trials that passed the suite's filter and were tested
  long violations = 0;
  double worst_margin = 0.0;  // min over checks of (lhs - rhs); negative beyond -tol is a violation
  double tolerance = 0.0;

  bool passed() const { return violations == 0 && checked > 0; }
};

// Random spec with 1..max_machine_modes machine modes, lambda log-uniform in
// [lambda_lo, lambda_hi]; intermediate frequencies may lie below omega0.
MachineSpec random_spec(std::mt19937_64& rng, int max_machine_modes = 5, double lambda_lo = 1.1,
                        double lambda_hi = 50.0);

struct SuiteOptions {
  long trials = 10000;
  std::uint64_t seed = 42;
  int jobs = 1;
  // Replace the sampled unitary by a non-symplectic contraction; every suite
  // must then report violations.
  bool inject_failure = false;
};

// C C^+ - (S S^+)^* = I, (S C^+)^T = S C^+, | |det G| - 1 | on random unitaries.
PropertyReport symplectic_suite(const SuiteOptions& options, int modes = 3);

// Thermal excitation of mode 0 after a random global unitary on a random
// product of Gaussian states is at least the smallest input thermal excitation.
PropertyReport lemma1_suite(const SuiteOptions& options, int modes = 4);

// Sorted eigenvalues of L O L^+ dominate those of O when L L^+ >= I.
PropertyReport eigenvalue_dominance_suite(const SuiteOptions& options, int dim = 6);

// Tail sums of sorted output occupations dominate those of a Gibbs input.
PropertyReport majorization_suite(const SuiteOptions& options, int modes = 4);

// Random rechargers over up to 20 rounds never push the system below nbar(omega_N).
PropertyReport cooling_bound_suite(const SuiteOptions& options);

// Rechargers that reach the cooling limit (perturbed swap chains) produce at
// least the minimal entropy production.
PropertyReport entropy_bound_suite(const SuiteOptions& options);

std::vector<PropertyReport> run_all_suites(const SuiteOptions& options);

}  // namespace cvhbac
