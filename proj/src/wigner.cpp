#include "qvdp/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

#include "qvdp/errors.hpp"

namespace qvdp {

double laguerre_assoc(int n, int j, double x) {
  if (n < 0 || j < 0) throw InvalidArgument("laguerre_assoc needs n, j >= 0");
  const long double xl = x, jl = j;
  long double prev = 1.0L;
  if (n == 0) return 1.0;
  long double cur = 1.0L + jl - xl;
  for (int k = 1; k < n; ++k) {
    const long double next = ((2.0L * k + 1.0L + jl - xl) * cur - (k + jl) * prev) / (k + 1.0L);
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

void laguerre_functions(int j, double x, std::span<double> out) {
  if (out.empty()) return;
  if (x == 0.0) {
    std::fill(out.begin(), out.end(), j == 0 ? 1.0 : 0.0);
    return;
  }
  constexpr double kRescale = 1e100;
  const double kLogRescale = std::log(kRescale);
  const double dj = j;
  double scale = -0.5 * x + 0.5 * dj * std::log(x) - 0.5 * std::lgamma(dj + 1.0);
  double prev = 0.0, cur = 1.0;
  auto emit = [&](std::size_t n) {
    out[n] = cur == 0.0 ? 0.0 : std::copysign(std::exp(scale + std::log(std::abs(cur))), cur);
  };
  emit(0);
  for (std::size_t n = 0; n + 1 < out.size(); ++n) {
    const double dn = static_cast<double>(n);
    const double next = ((2.0 * dn + 1.0 + dj - x) * cur - std::sqrt(dn * (dn + dj)) * prev) /
                        std::sqrt((dn + 1.0) * (dn + dj + 1.0));
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      prev /= kRescale;
      scale += kLogRescale;
    }
    emit(n + 1);
  }
}

namespace {

void check_levels(int N) {
  if (N > kWignerMaxLevels) {
    throw OverflowGuard("Wigner maps support at most " + std::to_string(kWignerMaxLevels) +
                        " levels, got " + std::to_string(N));
  }
}

// Diagonal channel sums at x = 4 r^2:
//   lower[j] = sum_n (-1)^n ell_n^{(j)} rho(n+j, n),  upper[j] = same with rho(n, n+j).
struct Channels {
  std::vector<cplx> lower, upper;
  std::vector<double> ell;

  explicit Channels(int N) : lower(N), upper(N), ell(N) {}

  void compute(const Eigen::MatrixXcd& rho, double r) {
    const int N = static_cast<int>(rho.rows());
    const double x = 4.0 * r * r;
    for (int j = 0; j < N; ++j) {
      const int count = N - j;
      laguerre_functions(j, x, std::span<double>(ell.data(), count));
      cplx lo = 0.0, up = 0.0;
      for (int n = 0; n < count; ++n) {
        const double w = (n % 2 == 0) ? ell[n] : -ell[n];
        lo += w * rho(n + j, n);
        up += w * rho(n, n + j);
      }
      lower[j] = lo;
      upper[j] = up;
    }
  }

  double value(double phi) const {
    cplx acc = lower[0];
    for (std::size_t j = 1; j < lower.size(); ++j) {
      const cplx e = std::polar(1.0, static_cast<double>(j) * phi);
      acc += std::conj(e) * lower[j] + e * upper[j];
    }
    return 2.0 / std::numbers::pi * acc.real();
  }
};

// Gauss-Legendre nodes and weights mapped to [0, b].
void gauss_legendre(int n, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // z descends from +1; map so nodes ascend on [0, b].
    nodes[n - 1 - i] = 0.5 * b * (1.0 + z);
    nodes[i] = 0.5 * b * (1.0 - z);
    weights[i] = weights[n - 1 - i] = 0.5 * b * w;
  }
}

double mean_occupation(const DensityMatrix& rho) {
  double s = 0.0;
  for (int n = 0; n < rho.dim(); ++n) s += n * rho(n, n).real();
  return std::max(s, 0.0);
}

void polar_nodes(WignerGrid& g, double r_max, int n_radii, int n_angles) {
  g.kind = GridKind::polar;
  g.r_max = r_max;
  gauss_legendre(n_radii, r_max, g.radii, g.radial_weights);
  g.angles.resize(n_angles);
  for (int a = 0; a < n_angles; ++a) g.angles[a] = 2.0 * std::numbers::pi * a / n_angles;
  g.xs.clear();
  g.ys.clear();
}

void fill_polar(WignerGrid& g, const DensityMatrix& rho, bool parallel) {
  const int nr = static_cast<int>(g.radii.size());
  const int na = static_cast<int>(g.angles.size());
  g.values.assign(static_cast<std::size_t>(nr) * na, 0.0);
  const Eigen::MatrixXcd& m = rho.matrix();
#pragma omp parallel if (parallel)
  {
    Channels ch(rho.dim());
#pragma omp for schedule(dynamic)
    for (int i = 0; i < nr; ++i) {
      ch.compute(m, g.radii[i]);
      for (int a = 0; a < na; ++a) g.values[static_cast<std::size_t>(i) * na + a] = ch.value(g.angles[a]);
    }
  }
}

void fill_cartesian(WignerGrid& g, const DensityMatrix& rho, int n_points, bool parallel) {
  g.kind = GridKind::cartesian;
  g.radii.clear();
  g.radial_weights.clear();
  g.angles.clear();
  g.xs.resize(n_points);
  for (int k = 0; k < n_points; ++k) {
    g.xs[k] = n_points == 1 ? 0.0 : -g.r_max + 2.0 * g.r_max * k / (n_points - 1);
  }
  g.ys = g.xs;
  g.values.assign(static_cast<std::size_t>(n_points) * n_points, 0.0);
  const Eigen::MatrixXcd& m = rho.matrix();
#pragma omp parallel if (parallel)
  {
    Channels ch(rho.dim());
#pragma omp for schedule(dynamic)
    for (int iy = 0; iy < n_points; ++iy) {
      for (int ix = 0; ix < n_points; ++ix) {
        const double x = g.xs[ix], y = g.ys[iy];
        ch.compute(m, std::hypot(x, y));
        g.values[static_cast<std::size_t>(iy) * n_points + ix] = ch.value(std::atan2(y, x));
      }
    }
  }
}

// Elementwise inverse map without the probe check.
DensityMatrix invert_polar(const WignerGrid& g, int N) {
  const int nr = static_cast<int>(g.radii.size());
  const int na = static_cast<int>(g.angles.size());
  const double w_phi = 2.0 * std::numbers::pi / na;
  DensityMatrix rho(N);
  std::vector<cplx> harmonic(static_cast<std::size_t>(nr) * N);
  for (int i = 0; i < nr; ++i) {
    for (int k = 0; k < N; ++k) {
      cplx s = 0.0;
      for (int a = 0; a < na; ++a) {
        s += std::polar(1.0, k * g.angles[a]) * g.values[static_cast<std::size_t>(i) * na + a];
      }
      harmonic[static_cast<std::size_t>(i) * N + k] = w_phi * s;
    }
  }
  std::vector<double> ell(N);
  for (int i = 0; i < nr; ++i) {
    const double r = g.radii[i];
    const double weight = g.radial_weights[i] * 2.0 * r;
    for (int k = 0; k < N; ++k) {
      laguerre_functions(k, 4.0 * r * r, std::span<double>(ell.data(), N - k));
      const cplx f = harmonic[static_cast<std::size_t>(i) * N + k];
      for (int m = 0; m + k < N; ++m) {
        const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
        rho(m + k, m) += sgn * weight * ell[m] * f;
      }
    }
  }
  for (int n = 0; n < N; ++n) {
    rho(n, n) = rho(n, n).real();
    for (int np = n + 1; np < N; ++np) rho(n, np) = std::conj(rho(np, n));
  }
  return rho;
}

DensityMatrix probe_state(int N) {
  DensityMatrix p(N);
  p(0, 0) = p(N - 1, N - 1) = 0.5;
  p(0, N - 1) = p(N - 1, 0) = 0.5;
  return p;
}

double probe_round_trip_error(const WignerGrid& nodes, int N) {
  WignerGrid g = nodes;
  const DensityMatrix probe = probe_state(N);
  fill_polar(g, probe, false);
  const DensityMatrix back = invert_polar(g, N);
  return (back.matrix() - probe.matrix()).cwiseAbs().maxCoeff();
}

WignerGrid build_grid(const DensityMatrix& rho, const WignerGridSpec& spec, bool parallel) {
  check_levels(rho.dim());
  WignerGrid g;
  const bool auto_r = !(spec.r_max > 0.0);
  double r_max = auto_r ? 2.0 + 3.0 * std::sqrt(mean_occupation(rho) + 1.0) : spec.r_max;
  if (spec.kind == GridKind::polar) {
    if (spec.n_radii < 1 || spec.n_angles < 1) throw InvalidArgument("polar grid needs nodes");
    polar_nodes(g, r_max, spec.n_radii, spec.n_angles);
    if (auto_r) {
      const int probe = spec.probe_levels > 0 ? spec.probe_levels : std::min(rho.dim(), 16);
      for (int attempt = 0; attempt < 8 && probe >= 2; ++attempt) {
        if (probe_round_trip_error(g, probe) <= 1e-10) break;
        r_max *= 1.25;
        polar_nodes(g, r_max, spec.n_radii, spec.n_angles);
      }
    }
    fill_polar(g, rho, parallel);
  } else {
    if (spec.n_points < 1) throw InvalidArgument("cartesian grid needs nodes");
    g.r_max = r_max;
    fill_cartesian(g, rho, spec.n_points, parallel);
  }
  return g;
}

}  // namespace

double wigner_at(const DensityMatrix& rho, double r, double phi) {
  check_levels(rho.dim());
  if (!(r >= 0.0)) throw InvalidArgument("wigner_at needs r >= 0");
  Channels ch(rho.dim());
  ch.compute(rho.matrix(), r);
  return ch.value(phi);
}

WignerGrid wigner_grid(const DensityMatrix& rho, const WignerGridSpec& spec) {
  return build_grid(rho, spec, true);
}

namespace reference {
WignerGrid wigner_grid(const DensityMatrix& rho, const WignerGridSpec& spec) {
  return build_grid(rho, spec, false);
}
}  // namespace reference

DensityMatrix density_from_wigner(const WignerGrid& grid, int n_levels) {
  if (grid.kind != GridKind::polar) throw InvalidArgument("inverse map needs a polar grid");
  if (n_levels < 1) throw InvalidArgument("n_levels must be >= 1");
  check_levels(n_levels);
  const double err = probe_round_trip_error(grid, n_levels);
  if (!(err <= 1e-6)) {
    throw QuadratureUnderResolved("probe round trip error " + std::to_string(err) + " for " +
                                  std::to_string(n_levels) + " levels");
  }
  return invert_polar(grid, n_levels);
}

double WignerGrid::integral() const {
  double s = 0.0;
  if (kind == GridKind::polar) {
    const std::size_t na = angles.size();
    const double w_phi = 2.0 * std::numbers::pi / static_cast<double>(na);
    for (std::size_t i = 0; i < radii.size(); ++i)
      for (std::size_t a = 0; a < na; ++a) s += radial_weights[i] * radii[i] * w_phi * values[i * na + a];
  } else {
    const double h = xs.size() > 1 ? xs[1] - xs[0] : 0.0;
    for (double v : values) s += v;
    s *= h * h;
  }
  return s;
}

cplx WignerGrid::center_of_mass() const {
  cplx s = 0.0;
  if (kind == GridKind::polar) {
    const std::size_t na = angles.size();
    const double w_phi = 2.0 * std::numbers::pi / static_cast<double>(na);
    for (std::size_t i = 0; i < radii.size(); ++i)
      for (std::size_t a = 0; a < na; ++a) {
        s += radial_weights[i] * radii[i] * w_phi * std::polar(radii[i], angles[a]) * values[i * na + a];
      }
  } else {
    const std::size_t nx = xs.size();
    const double h = nx > 1 ? xs[1] - xs[0] : 0.0;
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix) s += cplx(xs[ix], ys[iy]) * values[iy * nx + ix];
    s *= h * h;
  }
  return s;
}

double WignerGrid::second_moment() const {
  double s = 0.0;
  if (kind == GridKind::polar) {
    const std::size_t na = angles.size();
    const double w_phi = 2.0 * std::numbers::pi / static_cast<double>(na);
    for (std::size_t i = 0; i < radii.size(); ++i)
      for (std::size_t a = 0; a < na; ++a) {
        s += radial_weights[i] * radii[i] * radii[i] * radii[i] * w_phi * values[i * na + a];
      }
  } else {
    const std::size_t nx = xs.size();
    const double h = nx > 1 ? xs[1] - xs[0] : 0.0;
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix) s += (xs[ix] * xs[ix] + ys[iy] * ys[iy]) * values[iy * nx + ix];
    s *= h * h;
  }
  return s;
}

double WignerGrid::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double WignerGrid::max_angular_spread() const {
  if (kind != GridKind::polar) throw InvalidArgument("angular spread needs a polar grid");
  const std::size_t na = angles.size();
  double spread = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(i * na);
    const auto [lo, hi] = std::minmax_element(first, first + static_cast<std::ptrdiff_t>(na));
    spread = std::max(spread, *hi - *lo);
  }
  return spread;
}

namespace {
void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}
}  // namespace

void write_wigner_csv(std::ostream& os, const WignerGrid& grid) {
  const bool polar = grid.kind == GridKind::polar;
  os << "# wigner W(alpha), alpha = " << (polar ? "r*exp(i*phi)" : "x + i*y")
     << ", normalized to integral W d^2alpha = 1\n";
  os << "# layout: " << (polar ? "polar (Gauss-Legendre radii, uniform angles)" : "cartesian")
     << "\n# r_max: ";
  put(os, grid.r_max);
  os << '\n' << (polar ? "r,phi,W" : "x,y,W") << '\n';
  if (polar) {
    const std::size_t na = grid.angles.size();
    for (std::size_t i = 0; i < grid.radii.size(); ++i)
      for (std::size_t a = 0; a < na; ++a) {
        put(os, grid.radii[i]);
        os << ',';
        put(os, grid.angles[a]);
        os << ',';
        put(os, grid.values[i * na + a]);
        os << '\n';
      }
  } else {
    const std::size_t nx = grid.xs.size();
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix) {
        put(os, grid.xs[ix]);
        os << ',';
        put(os, grid.ys[iy]);
        os << ',';
        put(os, grid.values[iy * nx + ix]);
        os << '\n';
      }
  }
}

}  // namespace qvdp
