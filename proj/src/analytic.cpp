#include "qvdp/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qvdp/errors.hpp"

namespace qvdp::analytic {

namespace {

template <class T>
T stable_root(T x) {
  using C = std::complex<T>;
  const T half = T(1) / 2;
  const T third = T(1) / 3;
  const C s = std::sqrt(C(T(1) / 4 - x * x * x / 27, T(0)));
  const C z1 = std::pow(C(half + s.real(), s.imag()), third);
  // Principal value on the negative real axis means arg = +pi; force +0 so a
  // signed-zero imaginary part cannot flip the branch.
  C w2(half - s.real(), -s.imag());
  if (w2.imag() == T(0)) w2 = C(w2.real(), T(0));
  const C z2 = std::pow(w2, third);
  C sgn23(0);
  if (x > 0) {
    sgn23 = C(1);
  } else if (x < 0) {
    sgn23 = std::polar(T(1), 2 * std::numbers::pi_v<T> / 3);
  }
  const C f = z1 + sgn23 * z2;
  if (std::abs(f.imag()) > T(1e-12) * std::max(T(1), std::abs(f.real()))) {
    throw Error("classical_f: closed form left an imaginary residue");
  }
  T r = f.real();
  // Newton on g(f) = x f - f^3 + 1; g' = x - 3 f^2 < 0 on the stable branch.
  for (int it = 0; it < 3; ++it) {
    const T g = x * r - r * r * r + 1;
    const T dg = x - 3 * r * r;
    r -= g / dg;
  }
  return r;
}

}  // namespace

double classical_f(double x) {
  return static_cast<double>(stable_root<long double>(static_cast<long double>(x)));
}

long double classical_f(long double x) { return stable_root<long double>(x); }

ClassicalResponse classical_response(const ClassicalParams& p) {
  if (!(p.gamma2 > 0.0)) throw InvalidArgument("gamma2 must be > 0");
  ClassicalResponse out;
  if (p.omega == 0.0) {
    out.zero_drive = true;
    if (p.gamma1 > 0.0) {
      out.amplitude = std::sqrt(p.gamma1 / p.gamma2);
      out.phase_free = true;
    }
    return out;
  }
  if (p.omega < 0.0) throw InvalidArgument("omega must be >= 0");
  const double w = p.omega / p.gamma2;
  const double g = p.gamma1 / p.gamma2;
  const double w13 = std::cbrt(w);
  out.amplitude = w13 * classical_f(g / (w13 * w13));
  return out;
}

double two_level_response(double gm, double omega) {
  return 2.0 * omega * gm / (gm * gm + 8.0 * omega * omega);
}

double three_level_response(double gp, double gm, double g2, double omega) {
  const double w2 = 8.0 * omega * omega;
  const double d = 3.0 * gp + gm;
  if (omega == 0.0) return 0.0;
  return (2.0 * omega / g2) * (((gp + gm) * g2 + w2) / (d * d + w2));
}

double three_level_chi(double gp, double gm) {
  const double d = 3.0 * gp + gm;
  return 2.0 * (gp + gm) / (d * d);
}

double critical_chi(double Gamma1, double gamma2) {
  return 2.0 / std::sqrt(std::numbers::pi * Gamma1 * gamma2);
}

double critical_chi_small(double Gamma1) { return 1.0 / (4.0 * Gamma1); }

double limitcycle_chi(double gp, double gm, double g2) {
  return (2.0 / (3.0 * g2)) * (1.0 - 2.0 * gm / (3.0 * gp));
}

double passive_chi(double gm) {
  if (!(gm > 0.0)) throw PassiveUndefined("passive susceptibility needs gamma1_minus > 0");
  return 2.0 / gm;
}

GaussianEstimate limitcycle_gaussian(double gp, double gm, double g2) {
  return {(gp - gm) / (2.0 * g2), std::sqrt((3.0 * gp - gm) / (4.0 * g2))};
}

double critical_population_profile(double Gamma1, double gamma2, int n) {
  const double eps = std::sqrt(gamma2 / Gamma1);
  const double x = n * eps;
  return 2.0 * eps / std::sqrt(std::numbers::pi) * std::exp(-x * x);
}

}  // namespace qvdp::analytic
