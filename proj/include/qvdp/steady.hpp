#pragma once

#include "qvdp/model.hpp"

namespace qvdp {

struct SteadyStateResult {
  DensityMatrix rho;
  int n_levels = 0;        // final truncation
  double residual = 0.0;   // max |L vec(rho)|
  double tail_mass = 0.0;  // rho[N-1,N-1] + rho[N-2,N-2]
  int nullspace_dim = 0;   // detected steady-manifold dimension; 0 when not computed
};

enum class SolvePath {
  // Real arithmetic on the symmetric subspace (n >= n'), N(N+1)/2 unknowns.
  real_symmetric,
  // Full complex N^2 system; kept as the reference for the fast path.
  complex_full,
};

/// Steady state with Tr(rho) = 1. The equation for rho[N-1,N-1] is replaced by
/// the trace row and the square sparse system is LU-factorized. The truncation
/// grows N -> N + ceil(N/4) until tail_mass <= trunc.tail_tol.
///
/// Throws DegenerateSteadyState when the null space of the generator has
/// dimension > 1, TruncationExceeded when n_max is reached with too much tail
/// mass, and SolverSingular when the factorization fails or the residual
/// after refinement stays above tol.
SteadyStateResult solve_steady(const VdpParams& p, const Truncation& trunc, double tol = 1e-9,
                               SolvePath path = SolvePath::real_symmetric);

/// One constrained solve at fixed N, no degeneracy check and no growth.
SteadyStateResult solve_steady_fixed(const VdpParams& p, int n_levels, double tol = 1e-9,
                                     SolvePath path = SolvePath::real_symmetric);

/// 0.1 / ||L||_inf for the N-level generator.
double default_time_step(const VdpParams& p, int n_levels);

/// Classical fourth-order Runge-Kutta with fixed step; integrates to exactly t.
/// dt <= 0 selects default_time_step.
DensityMatrix evolve(const VdpParams& p, const DensityMatrix& rho0, double dt, double t);

/// Integrates from rho0 until max |rho_dot| < tol. dt <= 0 selects
/// default_time_step. Throws NotConverged at t_max and StepUnstable when the
/// trace drifts by more than 1e-6.
SteadyStateResult evolve_to_steady(const VdpParams& p, const DensityMatrix& rho0, double dt,
                                   double t_max, double tol);

/// Number of singular values of L below tol * sigma_max. Dense SVD for
/// small generators, rank-revealing sparse QR above that.
int nullspace_dimension(const Liouvillian& L, double tol = 1e-10);

}  // namespace qvdp
