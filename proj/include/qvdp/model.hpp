#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace qvdp {

using cplx = std::complex<double>;

// Rates of the resonantly driven quantum van der Pol oscillator, rotating frame.
// The drive is real (phase fixed); a negative omega is accepted by the
// generator and corresponds to the parity-conjugated problem.
struct VdpParams {
  double gamma1_plus = 0.0;   // one-particle gain
  double gamma1_minus = 0.0;  // one-particle loss
  double gamma2 = 1.0;        // two-particle loss
  double omega = 0.0;         // drive amplitude

  // Classical linear (anti)damping (gamma1_plus - gamma1_minus) / 2.
  double gamma1() const { return 0.5 * (gamma1_plus - gamma1_minus); }
  // Mean one-body rate (gamma1_plus + gamma1_minus) / 2.
  double Gamma1() const { return 0.5 * (gamma1_plus + gamma1_minus); }

  VdpParams with_omega(double w) const {
    VdpParams p = *this;
    p.omega = w;
    return p;
  }
  VdpParams scaled(double factor) const {
    return {gamma1_plus * factor, gamma1_minus * factor, gamma2 * factor, omega * factor};
  }

  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// Fock-space truncation policy for steady-state solves.
struct Truncation {
  int n_levels = 15;       // starting dimension N
  double tail_tol = 1e-10; // max rho[N-1,N-1] + rho[N-2,N-2]
  int n_max = 400;         // cap for adaptive growth

  void validate() const;

  // Starting dimension from the Gaussian number-distribution estimates of
  // the undriven state, widened by the classical drive response.
  static Truncation automatic(const VdpParams& p, double tail_tol = 1e-10, int n_max = 400);
};

// Truncated Fock-basis density matrix rho(n, n').
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(int dim) : m_(Eigen::MatrixXcd::Zero(dim, dim)) {}
  explicit DensityMatrix(Eigen::MatrixXcd m);

  static DensityMatrix fock(int dim, int n);
  static DensityMatrix vacuum(int dim) { return fock(dim, 0); }
  // |alpha><alpha| from the number-state series, cut at dim levels (not renormalized).
  static DensityMatrix coherent(int dim, cplx alpha);

  int dim() const { return static_cast<int>(m_.rows()); }
  cplx operator()(int n, int np) const { return m_(n, np); }
  cplx& operator()(int n, int np) { return m_(n, np); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::MatrixXcd& matrix() { return m_; }

  cplx trace() const { return m_.trace(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }
  // max |rho - rho^dagger| relative to max |rho|.
  double hermiticity_error() const;
  double min_eigenvalue() const;
  // Occupation of the two highest levels.
  double tail_mass() const;
  // Same state embedded in a larger space (extra levels unoccupied).
  DensityMatrix padded(int new_dim) const;

 private:
  Eigen::MatrixXcd m_;
};

// Row-major vectorization: index(n, n') = n * N + n'.
inline int vec_index(int n_levels, int n, int np) { return n * n_levels + np; }
Eigen::VectorXcd vectorize(const DensityMatrix& rho);
DensityMatrix unvectorize(const Eigen::VectorXcd& v, int n_levels);

using SparseLiouvillian = Eigen::SparseMatrix<cplx, Eigen::RowMajor, int>;

// Sparse generator with vec(rho_dot) = matrix * vec(rho).
struct Liouvillian {
  int n_levels = 0;
  SparseLiouvillian matrix;

  int dim() const { return n_levels * n_levels; }
  DensityMatrix apply(const DensityMatrix& rho) const;
  double norm_inf() const;
};

// Ladder terms that would reach |N> are dropped, so the truncated operator is
// the Lindblad generator built from the N-level ladder matrices and stays
// trace preserving. Throws CapacityError when N^2 (or the nonzero count)
// overflows the sparse index type.
Liouvillian build_liouvillian(const VdpParams& p, int n_levels);

// Matrix-free rho_dot. OpenMP-parallel over rows of rho; bitwise independent of
// the thread count (every output element is written by exactly one thread).
DensityMatrix apply_liouvillian(const VdpParams& p, const DensityMatrix& rho);

struct ModeEquationCheck {
  cplx from_generator;  // Tr(a * rho_dot)
  cplx from_moments;    // gamma1 <a> - gamma2 <a^dag a a> + Omega
  double residual;      // |from_generator - from_moments|
  bool truncation_warning;  // top-level occupation above tail_tol
};

// d<a>/dt evaluated two ways. They agree exactly in the untruncated space;
// boundary terms scale with the top-level occupation.
ModeEquationCheck mode_equation_residual(const VdpParams& p, const DensityMatrix& rho,
                                         double tail_tol = 1e-10);

namespace reference {
// Single-threaded twin of qvdp::apply_liouvillian, kept for testing and benchmarks.
DensityMatrix apply_liouvillian(const VdpParams& p, const DensityMatrix& rho);
}  // namespace reference

}  // namespace qvdp
