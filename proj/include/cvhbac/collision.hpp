#pragma once

// Short-time closed forms for repeated p-excitation exchange collisions with
// a machine mode reset to its Gibbs state after each collision.

#include <optional>

namespace cvhbac {

inline constexpr double kPerturbativeThreshold = 0.1;

struct CollisionParams {
  int p;
  double chi;
  double t;
  double nbar_s0;
  double nbar_m;
  double beta;
  double omega0;
  double omega1;

  // Occupations from the Gibbs law at (beta, omega0) and (beta, omega1).
  static CollisionParams from_frequencies(int p, double chi, double t, double beta, double omega0,
                                          double omega1);
  // beta = 1 and the frequencies that reproduce the given occupations.
  static CollisionParams from_occupations(int p, double chi, double t, double nbar_s0,
                                          double nbar_m);

  void validate() const;
  double chi_t() const { return chi * t; }
  // (chi t)^2 p! (1 + nbar_M)^p; the closed forms are second order in this.
  double validity_parameter() const;
  bool perturbative() const { return validity_parameter() <= kPerturbativeThreshold; }
};

double factorial(int p);

// Per-round coefficients. The mean obeys n_L = (1 - a) n_{L-1} + b; the second
// moment obeys <n^2>_L = (1 - 2a) <n^2>_{L-1} + c_fano n_{L-1} + b.
struct IterationCoefficients {
  double a;       // (chi t)^2 p! [(1 + nM)^p - nM^p]
  double b;       // (chi t)^2 p! nM^p
  double c_fano;  // (chi t)^2 p! [(1 + nM)^p + 3 nM^p]

  double fixed_point() const { return b / a; }
};

IterationCoefficients iteration_coefficients(const CollisionParams& params);

// nbar_S(t) = nbar_S - (chi t)^2 p! [(1 + nM)^p nbar_S - nM^p (1 + nbar_S)]
double short_time_update(const CollisionParams& params);
double short_time_delta(const CollisionParams& params);

// p omega1 > omega0
bool cooling_condition(int p, double omega0, double omega1);
// nM^p / ((1 + nM)^p - nM^p): the system occupation below which a collision heats.
double cooling_threshold_nbar(int p, double nbar_m);

// Time at which the short-time trajectory reaches nbar_M. Returns 0 when the
// occupations already agree and nullopt when the trajectory never crosses
// (nbar_S < nbar_M, or the collision does not cool).
std::optional<double> crossing_time(const CollisionParams& params);

// Throws ValidityError when a >= 1.
double iterate_closed_form(const CollisionParams& params, long rounds);
double asymptote(const CollisionParams& params);
// p (omega1 / omega0) beta
double asymptotic_beta(const CollisionParams& params);

struct FanoPoint {
  double mean_n;
  double second_moment;
  double q;
};

// Exact solution of the coupled moment recursions from a Gibbs start.
FanoPoint fano_closed_form(const CollisionParams& params, long rounds);
// Same recursions iterated step by step (reference path).
FanoPoint fano_iterated(const CollisionParams& params, long rounds);
// L -> infinity limit: <n> = b/a, <n^2> = (b / 2a)(1 + c_fano / a).
FanoPoint fano_asymptote(const CollisionParams& params);

}  // namespace cvhbac
