#include "qvdp/steady.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <Eigen/SparseQR>

#include "qvdp/errors.hpp"
#include "stencil.hpp"

namespace qvdp {

namespace {

// Dimension of the reduced generator used for the degeneracy check. The
// steady manifold of this model is degenerate only when drive and both
// one-body rates vanish, and that structure is already present at N = 3.
constexpr int kReducedLevels = 3;
constexpr double kDegeneracyTol = 1e-10;

// Unknowns of the symmetric subspace ordered by diagonal k = n - n', then n'.
// Dissipators stay inside a diagonal and the drive couples k to k +- 1, so the
// system is block tridiagonal in this ordering.
struct SymIndex {
  int N;
  int operator()(int n, int np) const {
    if (n < np) std::swap(n, np);
    const int k = n - np;
    return k * N - k * (k - 1) / 2 + np;
  }
  int size() const { return N * (N + 1) / 2; }
};

template <class Scalar, class Solver>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> factor_and_solve(
    const Eigen::SparseMatrix<Scalar>& A, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b) {
  Solver lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) {
    throw SolverSingular("sparse LU failed on the trace-constrained system: " + lu.lastErrorMessage());
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = lu.solve(b);
  // Two rounds of iterative refinement with the same factors.
  for (int round = 0; round < 2; ++round) {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> r = b - A * x;
    x += lu.solve(r);
  }
  if (!x.allFinite()) throw SolverSingular("trace-constrained solve produced non-finite values");
  return x;
}

DensityMatrix solve_real_symmetric(const VdpParams& p, int N) {
  const SymIndex sym{N};
  const int dim = sym.size();
  const int trace_row = sym(N - 1, N - 1);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(dim) * 8);
  for (int k = 0; k < N; ++k) {
    for (int np = 0; np + k < N; ++np) {
      const int n = np + k;
      const int row = sym(n, np);
      if (row == trace_row) continue;
      detail::for_each_coupling(p, N, n, np, [&](int m, int mp, double c) {
        if (c != 0.0) triplets.emplace_back(row, sym(m, mp), c);
      });
    }
  }
  for (int n = 0; n < N; ++n) triplets.emplace_back(trace_row, sym(n, n), 1.0);
  Eigen::SparseMatrix<double> A(dim, dim);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim);
  b(trace_row) = 1.0;
  const Eigen::VectorXd x =
      factor_and_solve<double, Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>(A, b);
  DensityMatrix rho(N);
  for (int n = 0; n < N; ++n)
    for (int np = 0; np <= n; ++np) {
      const double v = x(sym(n, np));
      rho(n, np) = v;
      rho(np, n) = v;
    }
  return rho;
}

DensityMatrix solve_complex_full(const VdpParams& p, int N) {
  const Liouvillian L = build_liouvillian(p, N);
  const int dim = L.dim();
  const int trace_row = vec_index(N, N - 1, N - 1);
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(static_cast<std::size_t>(L.matrix.nonZeros()) + N);
  for (int r = 0; r < dim; ++r) {
    if (r == trace_row) continue;
    for (SparseLiouvillian::InnerIterator it(L.matrix, r); it; ++it) {
      triplets.emplace_back(r, static_cast<int>(it.col()), it.value());
    }
  }
  for (int n = 0; n < N; ++n) triplets.emplace_back(trace_row, vec_index(N, n, n), cplx(1.0));
  Eigen::SparseMatrix<cplx> A(dim, dim);
  A.setFromTriplets(triplets.begin(), triplets.end());
  A.makeCompressed();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim);
  b(trace_row) = 1.0;
  const Eigen::VectorXcd x =
      factor_and_solve<cplx, Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>>>(A, b);
  return unvectorize(x, N);
}

}  // namespace

SteadyStateResult solve_steady_fixed(const VdpParams& p, int n_levels, double tol, SolvePath path) {
  p.validate();
  if (n_levels < 3) throw InvalidArgument("n_levels must be >= 3");
  SteadyStateResult out;
  out.rho = path == SolvePath::real_symmetric ? solve_real_symmetric(p, n_levels)
                                              : solve_complex_full(p, n_levels);
  out.n_levels = n_levels;
  out.residual = apply_liouvillian(p, out.rho).matrix().cwiseAbs().maxCoeff();
  out.tail_mass = std::abs(out.rho.tail_mass());
  if (!(out.residual <= tol)) {
    throw SolverSingular("steady-state residual " + std::to_string(out.residual) +
                         " exceeds tolerance " + std::to_string(tol) + " at N = " +
                         std::to_string(n_levels));
  }
  return out;
}

SteadyStateResult solve_steady(const VdpParams& p, const Truncation& trunc, double tol,
                               SolvePath path) {
  p.validate();
  trunc.validate();
  const int nullity = nullspace_dimension(build_liouvillian(p, kReducedLevels), kDegeneracyTol);
  if (nullity > 1) {
    throw DegenerateSteadyState(nullity, "steady manifold has dimension " + std::to_string(nullity) +
                                             " (no drive and no one-body rates)");
  }
  int N = trunc.n_levels;
  while (true) {
    SteadyStateResult r = solve_steady_fixed(p, N, tol, path);
    r.nullspace_dim = nullity;
    if (r.tail_mass <= trunc.tail_tol) return r;
    if (N >= trunc.n_max) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "tail mass %.3g above %.3g at n_max = %d", r.tail_mass,
                    trunc.tail_tol, trunc.n_max);
      throw TruncationExceeded(msg);
    }
    N = std::min(trunc.n_max, N + (N + 3) / 4);
  }
}

double default_time_step(const VdpParams& p, int n_levels) {
  return 0.1 / build_liouvillian(p, n_levels).norm_inf();
}

namespace {

class Rk4 {
 public:
  Rk4(const VdpParams& p, int N) : L_(build_liouvillian(p, N)) {}

  // Advances v by h; returns L v at the start of the step.
  Eigen::VectorXcd step(Eigen::VectorXcd& v, double h) {
    Eigen::VectorXcd k1 = L_.matrix * v;
    const Eigen::VectorXcd k2 = L_.matrix * (v + (0.5 * h) * k1);
    const Eigen::VectorXcd k3 = L_.matrix * (v + (0.5 * h) * k2);
    const Eigen::VectorXcd k4 = L_.matrix * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return k1;
  }
  const Liouvillian& generator() const { return L_; }

 private:
  Liouvillian L_;
};

cplx vec_trace(const Eigen::VectorXcd& v, int N) {
  cplx t = 0.0;
  for (int n = 0; n < N; ++n) t += v(vec_index(N, n, n));
  return t;
}

}  // namespace

DensityMatrix evolve(const VdpParams& p, const DensityMatrix& rho0, double dt, double t) {
  p.validate();
  if (!(t >= 0.0) || std::isnan(dt)) throw InvalidArgument("evolve needs t >= 0");
  const int N = rho0.dim();
  Rk4 rk(p, N);
  if (!(dt > 0.0)) dt = 0.1 / rk.generator().norm_inf();
  Eigen::VectorXcd v = vectorize(rho0);
  const long steps = static_cast<long>(std::ceil(t / dt));
  const double h = steps > 0 ? t / steps : 0.0;
  for (long s = 0; s < steps; ++s) rk.step(v, h);
  return unvectorize(v, N);
}

SteadyStateResult evolve_to_steady(const VdpParams& p, const DensityMatrix& rho0, double dt,
                                   double t_max, double tol) {
  p.validate();
  const int N = rho0.dim();
  if (N < 3) throw InvalidArgument("density matrix dimension must be >= 3");
  if (!(t_max > 0.0) || !(tol > 0.0)) throw InvalidArgument("evolve_to_steady needs t_max, tol > 0");
  Rk4 rk(p, N);
  if (!(dt > 0.0)) dt = 0.1 / rk.generator().norm_inf();
  Eigen::VectorXcd v = vectorize(rho0);
  const cplx trace0 = vec_trace(v, N);
  double t = 0.0;
  while (true) {
    const Eigen::VectorXcd rate = rk.generator().matrix * v;
    const double speed = rate.cwiseAbs().maxCoeff();
    if (speed < tol) {
      SteadyStateResult out;
      out.rho = unvectorize(v, N);
      out.n_levels = N;
      out.residual = speed;
      out.tail_mass = std::abs(out.rho.tail_mass());
      return out;
    }
    if (t >= t_max) {
      throw NotConverged("max |rho_dot| = " + std::to_string(speed) + " at t_max = " +
                         std::to_string(t_max));
    }
    rk.step(v, dt);
    t += dt;
    if (!v.allFinite() || std::abs(vec_trace(v, N) - trace0) > 1e-6) {
      throw StepUnstable("trace drifted during integration at t = " + std::to_string(t));
    }
  }
}

int nullspace_dimension(const Liouvillian& L, double tol) {
  const int dim = L.dim();
  if (dim <= 1600) {
    const Eigen::MatrixXcd dense(L.matrix);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
    const Eigen::VectorXd& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return dim;
    const double cut = tol * s(0);
    return static_cast<int>((s.array() < cut).count());
  }
  Eigen::SparseMatrix<cplx> A(L.matrix);
  A.makeCompressed();
  Eigen::SparseQR<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> qr;
  qr.setPivotThreshold(tol * L.norm_inf());
  qr.compute(A);
  if (qr.info() != Eigen::Success) throw SolverSingular("sparse QR failed in nullspace_dimension");
  return dim - static_cast<int>(qr.rank());
}

}  // namespace qvdp
