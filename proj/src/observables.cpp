#include "qvdp/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qvdp/errors.hpp"

namespace qvdp {

double response(const DensityMatrix& rho) {
  cplx a = 0.0;
  for (int n = 1; n < rho.dim(); ++n) a += std::sqrt(static_cast<double>(n)) * rho(n, n - 1);
  if (std::abs(a.imag()) > 1e-10) {
    throw NonRealResponse("<a> has imaginary part " + std::to_string(a.imag()));
  }
  return a.real();
}

double mean_number(const DensityMatrix& rho) {
  double s = 0.0;
  for (int n = 1; n < rho.dim(); ++n) s += n * rho(n, n).real();
  return s;
}

double noise_sigma(const DensityMatrix& rho) {
  const double a = response(rho);
  const double arg = mean_number(rho) + 0.5 - a * a;
  if (arg < -1e-10) {
    throw InvalidArgument("noise variance " + std::to_string(arg) + " is negative (unphysical state)");
  }
  return std::sqrt(std::max(arg, 0.0));
}

double snr(const DensityMatrix& rho) {
  const double a = response(rho);
  if (a == 0.0) return 0.0;
  return a / noise_sigma(rho);
}

ResponsePoint response_point(const SteadyStateResult& steady, double omega) {
  ResponsePoint pt;
  pt.omega = omega;
  pt.response = response(steady.rho);
  pt.mean_n = mean_number(steady.rho);
  pt.sigma = noise_sigma(steady.rho);
  pt.snr = pt.response == 0.0 ? 0.0 : pt.response / pt.sigma;
  pt.n_levels = steady.n_levels;
  return pt;
}

std::vector<double> number_distribution(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  for (int n = 0; n < rho.dim(); ++n) {
    p[n] = rho(n, n).real();
    if (p[n] < -1e-10) {
      throw InvalidArgument("negative population at n = " + std::to_string(n));
    }
  }
  return p;
}

Susceptibility susceptibility(const VdpParams& p, double omega_at, const Truncation& trunc,
                              const SusceptibilityOptions& opt) {
  p.validate();
  if (!(omega_at >= 0.0)) throw InvalidArgument("omega_at must be >= 0");
  const double delta = std::max(1e-3 * omega_at, 1e-4 * p.gamma2);
  int n_levels = 0;
  double residual = 0.0;
  auto resp = [&](double w) -> double {
    if (w == 0.0) return 0.0;
    const double sign = w < 0.0 ? -1.0 : 1.0;
    const SteadyStateResult s = solve_steady(p.with_omega(std::abs(w)), trunc, opt.tol, opt.path);
    n_levels = std::max(n_levels, s.n_levels);
    residual = std::max(residual, s.residual);
    return sign * response(s.rho);
  };
  Susceptibility chi = richardson_derivative(resp, omega_at, delta);
  chi.n_levels = n_levels;
  chi.residual = residual;
  return chi;
}

double gain0(const VdpParams& p, const Truncation& trunc, const SusceptibilityOptions& opt) {
  const double passive = [&] {
    if (!(p.gamma1_minus > 0.0)) throw PassiveUndefined("gain0 needs gamma1_minus > 0");
    return 2.0 / p.gamma1_minus;
  }();
  return susceptibility(p, 0.0, trunc, opt).chi / passive;
}

}  // namespace qvdp
