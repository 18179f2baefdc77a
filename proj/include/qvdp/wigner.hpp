#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "qvdp/model.hpp"

namespace qvdp {

/// Associated Laguerre polynomial L_n^{(j)}(x) by the three-term upward
/// recurrence in n, accumulated in extended precision.
double laguerre_assoc(int n, int j, double x);

/// Normalized Laguerre functions
///   ell_n(x) = exp(-x/2) x^(j/2) sqrt(n! / (n+j)!) L_n^{(j)}(x),  n = 0 .. out.size()-1.
/// These are the displacement-operator matrix elements in magnitude, so
/// |ell_n| <= 1. The recurrence runs on mantissas with a separate log scale,
/// which keeps the large-x / large-n corner free of overflow and underflow.
void laguerre_functions(int j, double x, std::span<double> out);

/// Largest density-matrix dimension the Wigner maps accept.
inline constexpr int kWignerMaxLevels = 300;

/// W(r e^{i phi}) from the polar double sum over diagonals j. Returns the
/// real part; it is real whenever rho is Hermitian.
double wigner_at(const DensityMatrix& rho, double r, double phi);

enum class GridKind { polar, cartesian };

struct WignerGridSpec {
  GridKind kind = GridKind::polar;
  double r_max = 0.0;  // <= 0 selects 2 + 3 sqrt(<n> + 1)
  int n_radii = 200;   // polar: Gauss-Legendre nodes on [0, r_max]
  int n_angles = 256;  // polar: uniform nodes on [0, 2 pi)
  int n_points = 201;  // cartesian: nodes per axis on [-r_max, r_max]
  // Polar grids with an automatic r_max are widened until a probe state with
  // this many levels survives the round trip rho -> W -> rho to 1e-10.
  // 0 selects min(dim, 16).
  int probe_levels = 0;
};

struct WignerGrid {
  GridKind kind = GridKind::polar;
  double r_max = 0.0;
  // Polar layout: values[i * angles.size() + a] = W(radii[i], angles[a]).
  std::vector<double> radii, radial_weights, angles;
  // Cartesian layout: values[iy * xs.size() + ix] = W(xs[ix] + i ys[iy]).
  std::vector<double> xs, ys;
  std::vector<double> values;

  double integral() const;        // int W d^2 alpha
  cplx center_of_mass() const;    // int alpha W d^2 alpha
  double second_moment() const;   // int |alpha|^2 W d^2 alpha
  double max_abs() const;
  // Largest spread max_phi W - min_phi W over the radii of a polar grid.
  double max_angular_spread() const;
};

/// Samples W on the requested layout. OpenMP-parallel over radii (polar) or
/// rows (cartesian); each node is computed independently of the others.
WignerGrid wigner_grid(const DensityMatrix& rho, const WignerGridSpec& spec = {});

/// Inverse map by angular trapezoid and radial Gauss-Legendre quadrature on a
/// polar grid. Throws QuadratureUnderResolved when a probe state with n_levels
/// levels does not survive the round trip on the same nodes to 1e-6.
DensityMatrix density_from_wigner(const WignerGrid& grid, int n_levels);

/// CSV with '#' comment lines naming the convention, layout and r_max, then
/// columns (r, phi, W) or (x, y, W) at 17 significant digits.
void write_wigner_csv(std::ostream& os, const WignerGrid& grid);

namespace reference {
// Single-threaded twin of qvdp::wigner_grid.
WignerGrid wigner_grid(const DensityMatrix& rho, const WignerGridSpec& spec = {});
}  // namespace reference

}  // namespace qvdp
