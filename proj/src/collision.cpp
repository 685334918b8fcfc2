#include "cvhbac/collision.hpp"

#include "cvhbac/errors.hpp"
#include "cvhbac/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cvhbac {

double factorial(int p) {
  if (p < 0) throw DomainError("factorial: negative argument");
  double f = 1.0;
  for (int k = 2; k <= p; ++k) f *= k;
  return f;
}

CollisionParams CollisionParams::from_frequencies(int p, double chi, double t, double beta,
                                                  double omega0, double omega1) {
  if (!(beta > 0.0) || !(omega0 > 0.0) || !(omega1 > 0.0)) {
    throw DomainError("CollisionParams: beta and frequencies must be positive");
  }
  CollisionParams out{p, chi, t, bose_occupation(beta * omega0), bose_occupation(beta * omega1),
                      beta, omega0, omega1};
  out.validate();
  return out;
}

CollisionParams CollisionParams::from_occupations(int p, double chi, double t, double nbar_s0,
                                                  double nbar_m) {
  if (!(nbar_s0 > 0.0) || !(nbar_m > 0.0)) {
    throw DomainError("CollisionParams: occupations must be positive");
  }
  CollisionParams out{p, chi, t, nbar_s0, nbar_m, 1.0, std::log1p(1.0 / nbar_s0),
                      std::log1p(1.0 / nbar_m)};
  out.validate();
  return out;
}

void CollisionParams::validate() const {
  if (p < 1) throw DomainError("CollisionParams: p must be >= 1");
  if (!(chi >= 0.0) || !(t >= 0.0) || !std::isfinite(chi * t)) {
    throw DomainError("CollisionParams: chi and t must be >= 0");
  }
  if (!(nbar_s0 >= 0.0) || !(nbar_m >= 0.0)) {
    throw DomainError("CollisionParams: occupations must be >= 0");
  }
  if (!(beta > 0.0) || !(omega0 > 0.0) || !(omega1 > 0.0)) {
    throw DomainError("CollisionParams: beta and frequencies must be positive");
  }
  const double ns = bose_occupation(beta * omega0);
  const double nm = bose_occupation(beta * omega1);
  if (std::abs(ns - nbar_s0) > 1e-9 * std::max(1.0, ns) ||
      std::abs(nm - nbar_m) > 1e-9 * std::max(1.0, nm)) {
    throw DomainError("CollisionParams: occupations inconsistent with (beta, omega)");
  }
}

double CollisionParams::validity_parameter() const {
  return chi_t() * chi_t() * factorial(p) * std::pow(1.0 + nbar_m, p);
}

IterationCoefficients iteration_coefficients(const CollisionParams& params) {
  const double k = params.chi_t() * params.chi_t() * factorial(params.p);
  const double up = std::pow(1.0 + params.nbar_m, params.p);
  const double down = std::pow(params.nbar_m, params.p);
  return {k * (up - down), k * down, k * (up + 3.0 * down)};
}

double short_time_delta(const CollisionParams& params) {
  const double k = params.chi_t() * params.chi_t() * factorial(params.p);
  const double up = std::pow(1.0 + params.nbar_m, params.p);
  const double down = std::pow(params.nbar_m, params.p);
  return -k * (up * params.nbar_s0 - down * (1.0 + params.nbar_s0));
}

double short_time_update(const CollisionParams& params) {
  return params.nbar_s0 + short_time_delta(params);
}

bool cooling_condition(int p, double omega0, double omega1) {
  if (p < 1 || !(omega0 > 0.0) || !(omega1 > 0.0)) {
    throw DomainError("cooling_condition: p >= 1 and positive frequencies required");
  }
  return p * omega1 > omega0;
}

double cooling_threshold_nbar(int p, double nbar_m) {
  if (p < 1 || !(nbar_m >= 0.0)) throw DomainError("cooling_threshold_nbar: invalid arguments");
  const double down = std::pow(nbar_m, p);
  return down / (std::pow(1.0 + nbar_m, p) - down);
}

std::optional<double> crossing_time(const CollisionParams& params) {
  const double ns = params.nbar_s0;
  const double nm = params.nbar_m;
  if (ns == nm) return 0.0;
  if (!(params.chi > 0.0)) return std::nullopt;
  const double bracket =
      std::pow(1.0 + nm, params.p) * ns - std::pow(nm, params.p) * (1.0 + ns);
  if (ns < nm || !(bracket > 0.0)) return std::nullopt;
  return std::sqrt((ns - nm) / (factorial(params.p) * bracket)) / params.chi;
}

namespace {

IterationCoefficients checked_coefficients(const CollisionParams& params) {
  const IterationCoefficients c = iteration_coefficients(params);
  if (!(c.a < 1.0)) {
    throw ValidityError("closed form requires a < 1 (a = " + std::to_string(c.a) + ")");
  }
  return c;
}

double fano_q(double mean_n, double second) {
  if (mean_n == 0.0) return 0.0;
  return (second - mean_n * mean_n) / (mean_n * (mean_n + 1.0)) - 1.0;
}

// (1 - x)^L for x < 1, accurate for small x.
double decay(double x, long rounds) {
  if (x <= 1.0 && x > -1.0 && x < 0.5) {
    return std::exp(static_cast<double>(rounds) * std::log1p(-x));
  }
  return std::pow(1.0 - x, static_cast<double>(rounds));
}

}  // namespace

double iterate_closed_form(const CollisionParams& params, long rounds) {
  if (rounds < 0) throw ContractError("iterate_closed_form: rounds must be >= 0");
  const IterationCoefficients c = checked_coefficients(params);
  if (rounds == 0 || c.a == 0.0) return params.nbar_s0;
  const double p1 = decay(c.a, rounds);
  return params.nbar_s0 * p1 + c.fixed_point() * (1.0 - p1);
}

double asymptote(const CollisionParams& params) {
  const IterationCoefficients c = checked_coefficients(params);
  if (c.a == 0.0) throw ValidityError("asymptote: no relaxation when chi t = 0");
  return c.fixed_point();
}

double asymptotic_beta(const CollisionParams& params) {
  return params.p * params.omega1 / params.omega0 * params.beta;
}

FanoPoint fano_closed_form(const CollisionParams& params, long rounds) {
  if (rounds < 0) throw ContractError("fano_closed_form: rounds must be >= 0");
  const IterationCoefficients c = checked_coefficients(params);
  const double x0 = params.nbar_s0;
  const double y0 = 2.0 * x0 * x0 + x0;
  double x = x0;
  double y = y0;
  if (rounds > 0 && c.a > 0.0) {
    const double p1 = decay(c.a, rounds);
    const double p2 = decay(2.0 * c.a, rounds);
    const double x_inf = c.b / c.a;
    const double y_inf = (c.c_fano * x_inf + c.b) / (2.0 * c.a);
    x = x0 * p1 + x_inf * (1.0 - p1);
    y = p2 * y0 + (1.0 - p2) * y_inf + c.c_fano * (x0 - x_inf) * (p1 - p2) / c.a;
  }
  return {x, y, fano_q(x, y)};
}

FanoPoint fano_iterated(const CollisionParams& params, long rounds) {
  if (rounds < 0) throw ContractError("fano_iterated: rounds must be >= 0");
  const IterationCoefficients c = checked_coefficients(params);
  double x = params.nbar_s0;
  double y = 2.0 * x * x + x;
  for (long l = 0; l < rounds; ++l) {
    const double x_next = (1.0 - c.a) * x + c.b;
    y = (1.0 - 2.0 * c.a) * y + c.c_fano * x + c.b;
    x = x_next;
  }
  return {x, y, fano_q(x, y)};
}

FanoPoint fano_asymptote(const CollisionParams& params) {
  const IterationCoefficients c = checked_coefficients(params);
  if (c.a == 0.0) throw ValidityError("fano_asymptote: no relaxation when chi t = 0");
  const double x = c.b / c.a;
  const double y = (c.b / (2.0 * c.a)) * (1.0 + c.c_fano / c.a);
  return {x, y, fano_q(x, y)};
}

}  // namespace cvhbac
