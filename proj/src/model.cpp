#include "qvdp/model.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qvdp/analytic.hpp"
#include "qvdp/errors.hpp"
#include "stencil.hpp"

namespace qvdp {

namespace {

void require_rate(const char* name, double v, bool strictly_positive) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
  if (strictly_positive ? !(v > 0.0) : v < 0.0) {
    throw InvalidArgument(std::string(name) + (strictly_positive ? " must be > 0" : " must be >= 0"));
  }
}

}  // namespace

void VdpParams::validate() const {
  require_rate("gamma1_plus", gamma1_plus, false);
  require_rate("gamma1_minus", gamma1_minus, false);
  require_rate("gamma2", gamma2, true);
  if (!std::isfinite(omega)) throw InvalidArgument("omega must be finite");
}

void Truncation::validate() const {
  if (n_levels < 3) throw InvalidArgument("n_levels must be >= 3");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw InvalidArgument("tail_tol must lie in (0, 1)");
  if (n_max < n_levels) throw InvalidArgument("n_max must be >= n_levels");
}

Truncation Truncation::automatic(const VdpParams& p, double tail_tol, int n_max) {
  p.validate();
  const double gp = p.gamma1_plus, gm = p.gamma1_minus, g2 = p.gamma2;
  double undriven = 0.0, cycle = 0.0;
  if (gp > gm) {
    const auto [mean, std] = analytic::limitcycle_gaussian(gp, gm, g2);
    undriven = mean + 5.0 * std;
    cycle = mean;
  } else {
    undriven = 4.0 * std::sqrt(p.Gamma1() / g2);
    if (gm > gp) {
      // Thermal occupation of the damped phase; much tighter than the
      // critical width once the loss dominates.
      const double nbar = gp / (gm - gp);
      const double thermal = nbar > 0.0 ? 25.0 / std::log1p(1.0 / nbar) : 0.0;
      undriven = std::min(undriven, thermal);
    }
  }
  double alpha = 0.0;
  if (p.omega != 0.0) {
    alpha = analytic::classical_response({p.gamma1(), g2, std::abs(p.omega)}).amplitude;
  }
  // The limit-cycle radius is already part of the drive amplitude.
  const double estimate = undriven + std::max(0.0, alpha * alpha - cycle) + 6.0 * alpha;
  Truncation t;
  t.tail_tol = tail_tol;
  t.n_max = n_max;
  t.n_levels = std::min(n_max, std::max(15, static_cast<int>(std::ceil(estimate))));
  t.validate();
  return t;
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw InvalidArgument("density matrix must be square");
}

DensityMatrix DensityMatrix::fock(int dim, int n) {
  if (n < 0 || n >= dim) throw InvalidArgument("Fock index outside truncation");
  DensityMatrix rho(dim);
  rho(n, n) = 1.0;
  return rho;
}

DensityMatrix DensityMatrix::coherent(int dim, cplx alpha) {
  Eigen::VectorXcd c(dim);
  cplx term = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < dim; ++n) {
    c(n) = term;
    term *= alpha / std::sqrt(n + 1.0);
  }
  return DensityMatrix(c * c.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  const double scale = max_abs();
  if (scale == 0.0) return 0.0;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() / scale;
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::tail_mass() const {
  const int N = dim();
  double t = 0.0;
  for (int n = std::max(0, N - 2); n < N; ++n) t += m_(n, n).real();
  return t;
}

DensityMatrix DensityMatrix::padded(int new_dim) const {
  if (new_dim < dim()) throw InvalidArgument("padded dimension smaller than current");
  DensityMatrix out(new_dim);
  out.m_.topLeftCorner(dim(), dim()) = m_;
  return out;
}

Eigen::VectorXcd vectorize(const DensityMatrix& rho) {
  const int N = rho.dim();
  Eigen::VectorXcd v(N * N);
  for (int n = 0; n < N; ++n)
    for (int np = 0; np < N; ++np) v(vec_index(N, n, np)) = rho(n, np);
  return v;
}

DensityMatrix unvectorize(const Eigen::VectorXcd& v, int n_levels) {
  if (v.size() != static_cast<Eigen::Index>(n_levels) * n_levels) {
    throw InvalidArgument("vector length does not match n_levels^2");
  }
  DensityMatrix rho(n_levels);
  for (int n = 0; n < n_levels; ++n)
    for (int np = 0; np < n_levels; ++np) rho(n, np) = v(vec_index(n_levels, n, np));
  return rho;
}

DensityMatrix Liouvillian::apply(const DensityMatrix& rho) const {
  if (rho.dim() != n_levels) throw InvalidArgument("density matrix dimension mismatch");
  return unvectorize(matrix * vectorize(rho), n_levels);
}

double Liouvillian::norm_inf() const {
  double best = 0.0;
  for (int r = 0; r < matrix.outerSize(); ++r) {
    double s = 0.0;
    for (SparseLiouvillian::InnerIterator it(matrix, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

Liouvillian build_liouvillian(const VdpParams& p, int n_levels) {
  p.validate();
  if (n_levels < 3) throw InvalidArgument("n_levels must be >= 3");
  // At most 8 couplings per row (diagonal, four drive neighbours, three inflows).
  constexpr long long kMaxPerRow = 8;
  const long long rows = static_cast<long long>(n_levels) * n_levels;
  if (rows > INT_MAX / kMaxPerRow) {
    throw CapacityError("Liouvillian with N = " + std::to_string(n_levels) +
                        " exceeds the sparse index capacity");
  }
  const int N = n_levels;
  std::vector<Eigen::Triplet<cplx, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(rows) * 6);
  for (int n = 0; n < N; ++n) {
    for (int np = 0; np < N; ++np) {
      const int row = vec_index(N, n, np);
      detail::for_each_coupling(p, N, n, np, [&](int m, int mp, double c) {
        if (c != 0.0) triplets.emplace_back(row, vec_index(N, m, mp), cplx(c, 0.0));
      });
    }
  }
  Liouvillian L;
  L.n_levels = N;
  L.matrix.resize(static_cast<int>(rows), static_cast<int>(rows));
  L.matrix.setFromTriplets(triplets.begin(), triplets.end());
  L.matrix.makeCompressed();
  return L;
}

namespace {

// rho_dot for one row n of the density matrix, written straight from the
// element-wise master equation.
void apply_row(const VdpParams& p, const Eigen::MatrixXcd& r, Eigen::MatrixXcd& out, int n) {
  const int N = static_cast<int>(r.rows());
  const double dn = n;
  const double up_n = detail::raise_norm(n, N);
  for (int np = 0; np < N; ++np) {
    const double dnp = np;
    cplx acc = 0.0;
    if (p.omega != 0.0) {
      cplx drive = 0.0;
      if (n >= 1) drive += std::sqrt(dn) * r(n - 1, np);
      if (n + 1 < N) drive -= std::sqrt(dn + 1.0) * r(n + 1, np);
      if (np >= 1) drive += std::sqrt(dnp) * r(n, np - 1);
      if (np + 1 < N) drive -= std::sqrt(dnp + 1.0) * r(n, np + 1);
      acc += p.omega * drive;
    }
    if (p.gamma1_plus != 0.0) {
      cplx g = -0.5 * (up_n + detail::raise_norm(np, N)) * r(n, np);
      if (n >= 1 && np >= 1) g += std::sqrt(dn * dnp) * r(n - 1, np - 1);
      acc += p.gamma1_plus * g;
    }
    if (p.gamma1_minus != 0.0) {
      cplx g = -0.5 * (dn + dnp) * r(n, np);
      if (n + 1 < N && np + 1 < N) g += std::sqrt((dn + 1.0) * (dnp + 1.0)) * r(n + 1, np + 1);
      acc += p.gamma1_minus * g;
    }
    if (p.gamma2 != 0.0) {
      cplx g = -0.5 * (dn * (dn - 1.0) + dnp * (dnp - 1.0)) * r(n, np);
      if (n + 2 < N && np + 2 < N) {
        g += std::sqrt((dn + 1.0) * (dn + 2.0) * (dnp + 1.0) * (dnp + 2.0)) * r(n + 2, np + 2);
      }
      acc += p.gamma2 * g;
    }
    out(n, np) = acc;
  }
}

void check_apply_args(const VdpParams& p, const DensityMatrix& rho) {
  p.validate();
  if (rho.dim() < 3) throw InvalidArgument("density matrix dimension must be >= 3");
}

}  // namespace

DensityMatrix apply_liouvillian(const VdpParams& p, const DensityMatrix& rho) {
  check_apply_args(p, rho);
  const Eigen::MatrixXcd& r = rho.matrix();
  Eigen::MatrixXcd out(r.rows(), r.cols());
  const int N = rho.dim();
#pragma omp parallel for schedule(static)
  for (int n = 0; n < N; ++n) apply_row(p, r, out, n);
  return DensityMatrix(std::move(out));
}

namespace reference {

DensityMatrix apply_liouvillian(const VdpParams& p, const DensityMatrix& rho) {
  check_apply_args(p, rho);
  const Eigen::MatrixXcd& r = rho.matrix();
  Eigen::MatrixXcd out(r.rows(), r.cols());
  for (int n = 0; n < rho.dim(); ++n) apply_row(p, r, out, n);
  return DensityMatrix(std::move(out));
}

}  // namespace reference

ModeEquationCheck mode_equation_residual(const VdpParams& p, const DensityMatrix& rho,
                                         double tail_tol) {
  const DensityMatrix rho_dot = reference::apply_liouvillian(p, rho);
  const int N = rho.dim();
  cplx lhs = 0.0, a = 0.0, ada_a = 0.0;
  for (int n = 1; n < N; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    lhs += s * rho_dot(n, n - 1);
    a += s * rho(n, n - 1);
    ada_a += s * (n - 1.0) * rho(n, n - 1);
  }
  const cplx rhs = p.gamma1() * a - p.gamma2 * ada_a + p.omega;
  return {lhs, rhs, std::abs(lhs - rhs), std::abs(rho(N - 1, N - 1)) > tail_tol};
}

}  // namespace qvdp
