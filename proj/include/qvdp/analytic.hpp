#pragma once

// Closed-form classical solution and the weak-drive asymptotic formulas for
// the quantum oscillator. Asymptotic formulas are evaluated as written for any
// input; they do not check that the arguments lie in their regime of validity.

namespace qvdp::analytic {

/// Stable root of x*f - f^3 + 1 = 0, continuous in x with f(0) = 1.
///
/// Evaluated from the closed-form radical expression with principal-value
/// complex powers, then refined by Newton steps on the cubic. The long double
/// overload carries the same computation in extended precision; at |x| ~ 1e3
/// the double result is limited by the spacing of representable f^3 values.
double classical_f(double x);
long double classical_f(long double x);

struct ClassicalParams {
  double gamma1 = 0.0;  // (gamma1_plus - gamma1_minus) / 2, may be negative
  double gamma2 = 1.0;
  double omega = 0.0;
};

struct ClassicalResponse {
  double amplitude = 0.0;
  bool zero_drive = false;  // omega == 0
  bool phase_free = false;  // undriven limit cycle: amplitude is a radius, phase undefined
};

/// Steady amplitude alpha = (Omega/gamma2)^(1/3) f(gamma1_t / Omega_t^(2/3)).
/// For zero drive returns 0 (damped or critical) or the limit-cycle radius
/// sqrt(gamma1/gamma2) flagged as phase_free.
ClassicalResponse classical_response(const ClassicalParams& p);

/// Two-level (n = 0, 1) damped response 2 Omega g- / (g-^2 + 8 Omega^2).
double two_level_response(double gamma1_minus, double omega);

/// Three-level weak-drive response, lowest order in gamma1_pm/gamma2 and Omega/gamma2.
double three_level_response(double gamma1_plus, double gamma1_minus, double gamma2, double omega);

/// Linear slope of the three-level response, 2 (g+ + g-) / (3 g+ + g-)^2.
double three_level_chi(double gamma1_plus, double gamma1_minus);

/// Critical point gamma1_plus = gamma1_minus = Gamma1 >> gamma2: 2 / sqrt(pi Gamma1 gamma2).
double critical_chi(double Gamma1, double gamma2);

/// Critical point with Gamma1 << gamma2: 1 / (4 Gamma1).
double critical_chi_small(double Gamma1);

/// Deep limit-cycle phase: (2 / (3 gamma2)) (1 - 2 g- / (3 g+)).
double limitcycle_chi(double gamma1_plus, double gamma1_minus, double gamma2);

/// Passive (damped-only) susceptibility 2 / gamma1_minus.
double passive_chi(double gamma1_minus);

struct GaussianEstimate {
  double mean = 0.0;
  double std = 0.0;
};

/// Number distribution of the undriven limit cycle:
/// mean (g+ - g-) / (2 g2), std sqrt((3 g+ - g-) / (4 g2)).
GaussianEstimate limitcycle_gaussian(double gamma1_plus, double gamma1_minus, double gamma2);

/// Half-Gaussian population p_n = (2 eps / sqrt(pi)) exp(-(n eps)^2), eps = sqrt(gamma2 / Gamma1).
double critical_population_profile(double Gamma1, double gamma2, int n);

}  // namespace qvdp::analytic
