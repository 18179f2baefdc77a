#pragma once

#include <cmath>
#include <vector>

#include "qvdp/model.hpp"
#include "qvdp/steady.hpp"

namespace qvdp {

struct ResponsePoint {
  double omega = 0.0;
  double response = 0.0;  // <a>
  double mean_n = 0.0;    // <n>
  double sigma = 0.0;     // phase-space spread about <a>
  double snr = 0.0;
  int n_levels = 0;
};

struct Susceptibility {
  double chi = 0.0;       // d<a>/dOmega, Richardson-extrapolated
  double omega_at = 0.0;
  double step = 0.0;      // finite-difference step delta
  double estimate_error = 0.0;
  int n_levels = 0;       // largest truncation used by the offset solves
  double residual = 0.0;  // largest solver residual among the offset solves
};

// <a> = sum_n sqrt(n) rho[n, n-1]. Throws NonRealResponse when the imaginary
// part exceeds 1e-10 (drive phase convention violated).
double response(const DensityMatrix& rho);

double mean_number(const DensityMatrix& rho);

// sqrt(<n> + 1/2 - |<a>|^2); arguments down to -1e-10 clamp to zero.
double noise_sigma(const DensityMatrix& rho);

// <a> / sigma, or 0 when <a> = 0.
double snr(const DensityMatrix& rho);

ResponsePoint response_point(const SteadyStateResult& steady, double omega);

// Populations p_n = rho[n, n]; throws InvalidArgument if any p_n < -1e-10.
std::vector<double> number_distribution(const DensityMatrix& rho);

// Richardson-combined central difference of an odd-extended response
// function: D(h) = [f(w + h) - f(w - h)] / (2h), chi = D(h/2) + (D(h/2) - D(h)) / 3,
// estimate_error = |D(h/2) - D(h)| / 3. At w = 0 the oddness f(-h) = -f(h)
// replaces the second evaluation.
template <class F>
Susceptibility richardson_derivative(F&& f, double omega, double delta) {
  auto diff = [&](double h) {
    const double up = f(omega + h);
    const double down = omega == 0.0 ? -up : f(omega - h);
    return (up - down) / (2.0 * h);
  };
  const double d1 = diff(delta);
  const double d2 = diff(0.5 * delta);
  Susceptibility s;
  s.chi = d2 + (d2 - d1) / 3.0;
  s.omega_at = omega;
  s.step = delta;
  s.estimate_error = std::abs(d2 - d1) / 3.0;
  return s;
}

struct SusceptibilityOptions {
  double tol = 1e-9;  // steady-state residual tolerance
  SolvePath path = SolvePath::real_symmetric;
};

// Central difference with delta = max(1e-3 Omega, 1e-4 gamma2) and delta/2,
// Richardson-combined. Drives at or below zero use the oddness of <a>(Omega),
// so the (possibly degenerate) Omega = 0 state is never solved.
Susceptibility susceptibility(const VdpParams& p, double omega_at, const Truncation& trunc,
                              const SusceptibilityOptions& opt = {});

// chi(Omega -> 0) / (2 / gamma1_minus). Throws PassiveUndefined for gamma1_minus = 0.
double gain0(const VdpParams& p, const Truncation& trunc, const SusceptibilityOptions& opt = {});

}  // namespace qvdp
