#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/model.hpp"
#include "qvdp/steady.hpp"

using namespace qvdp;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd dense(const Liouvillian& L) { return Eigen::MatrixXcd(L.matrix); }

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(VdpParams({-1, 0, 1, 0}).validate(), InvalidArgument);
  CHECK_THROWS_AS(VdpParams({0, 0, 0, 0}).validate(), InvalidArgument);
  CHECK_NOTHROW(VdpParams({0, 0, 1, -0.5}).validate());
  CHECK_THROWS_AS(build_liouvillian({0, 0, 1, 0}, 2), InvalidArgument);
  Truncation t;
  t.n_levels = 500;
  t.n_max = 400;
  CHECK_THROWS_AS(t.validate(), InvalidArgument);
}

TEST_CASE("sparse generator matches the dense Kronecker construction") {
  const VdpParams cases[] = {{0, 0, 1, 0}, {0.3, 1.1, 1, 0.7}, {2.5, 0.4, 0.8, 1.3}, {1, 1, 1, 0}};
  for (const auto& p : cases) {
    for (int n : {3, 4, 6, 11}) {
      CAPTURE(n);
      CHECK(max_diff(dense(build_liouvillian(p, n)), oracle::dense_liouvillian(p, n)) < 1e-13);
    }
  }
}

TEST_CASE("three-level structure at the critical point") {
  const Liouvillian L = build_liouvillian({0, 0, 1, 0}, 3);
  const int d22 = vec_index(3, 2, 2), d00 = vec_index(3, 0, 0);
  CHECK(L.matrix.coeff(d22, d22).real() == doctest::Approx(-2.0));
  CHECK(L.matrix.coeff(d00, d22).real() == doctest::Approx(2.0));
}

TEST_CASE("one-body decay of |1><1|") {
  const VdpParams p{0, 1, 1, 0};
  const DensityMatrix dot = apply_liouvillian(p, DensityMatrix::fock(4, 1));
  CHECK(dot(1, 1).real() == doctest::Approx(-1.0));
  CHECK(dot(0, 0).real() == doctest::Approx(1.0));
  double others = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (!((r == 0 && c == 0) || (r == 1 && c == 1))) others = std::max(others, std::abs(dot(r, c)));
  CHECK(others == 0.0);
}

TEST_CASE("vacuum is dark without gain or drive") {
  for (double gm : {0.0, 0.7})
    CHECK(apply_liouvillian({0, gm, 1.3, 0}, DensityMatrix::vacuum(6)).max_abs() == 0.0);
}

TEST_CASE("drive on an equal mixture leaves rho_10 unchanged") {
  DensityMatrix rho(5);
  rho(0, 0) = rho(1, 1) = 0.5;
  const DensityMatrix dot = apply_liouvillian({0, 0, 1, 0.5}, rho);
  CHECK(std::abs(dot(1, 0)) < 1e-15);
}

TEST_CASE("trace and Hermiticity preservation on random Hermitian inputs") {
  std::mt19937_64 rng(7);
  const VdpParams p{0.8, 1.7, 1.0, 0.45};
  for (int n : {3, 8, 20}) {
    const Liouvillian L = build_liouvillian(p, n);
    for (int k = 0; k < 20; ++k) {
      const DensityMatrix X(oracle::random_hermitian(n, rng));
      const DensityMatrix dot = L.apply(X);
      CHECK(std::abs(dot.trace()) < 1e-13 * std::max(1.0, X.max_abs() * n * n));
      CHECK(dot.hermiticity_error() < 1e-13 * std::max(1.0, X.max_abs() * n));
    }
  }
}

TEST_CASE("matrix-free kernel equals the assembled operator") {
  std::mt19937_64 rng(11);
  const VdpParams p{1.2, 0.4, 1.0, 0.9};
  for (int n : {3, 8, 20}) {
    const Liouvillian L = build_liouvillian(p, n);
    for (int k = 0; k < 100; ++k) {
      const DensityMatrix X(oracle::random_hermitian(n, rng));
      const DensityMatrix a = L.apply(X);
      const DensityMatrix b = apply_liouvillian(p, X);
      const DensityMatrix c = reference::apply_liouvillian(p, X);
      REQUIRE(max_diff(a.matrix(), b.matrix()) < 1e-13 * n * std::max(1.0, X.max_abs()));
      REQUIRE(max_diff(b.matrix(), c.matrix()) == 0.0);
    }
  }
}

TEST_CASE("undriven generator keeps diagonals separate") {
  std::mt19937_64 rng(3);
  const VdpParams p{0.5, 1.5, 1.0, 0.0};
  DensityMatrix d(9);
  for (int k = 0; k < 9; ++k) d(k, k) = std::uniform_real_distribution<double>(0, 1)(rng);
  const DensityMatrix dot = apply_liouvillian(p, d);
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      if (r != c) CHECK(dot(r, c) == cplx(0.0));
}

TEST_CASE("generator is linear in the rates") {
  const VdpParams p{0.3, 0.9, 1.0, 0.6};
  const Eigen::MatrixXcd a = dense(build_liouvillian(p, 7));
  const Eigen::MatrixXcd b = dense(build_liouvillian(p.scaled(2.5), 7));
  CHECK(max_diff(b, 2.5 * a) < 1e-12);
}

TEST_CASE("vectorization round trip") {
  std::mt19937_64 rng(5);
  const DensityMatrix X(oracle::random_hermitian(6, rng));
  const DensityMatrix Y = unvectorize(vectorize(X), 6);
  CHECK(max_diff(X.matrix(), Y.matrix()) == 0.0);
  CHECK(vec_index(6, 2, 3) == 15);
}

TEST_CASE("mode equation") {
  SUBCASE("vacuum: both sides equal the drive") {
    const VdpParams p{0.2, 0.7, 1, 0.35};
    const auto chk = mode_equation_residual(p, DensityMatrix::vacuum(10));
    CHECK(chk.from_generator.real() == doctest::Approx(0.35));
    CHECK(chk.from_moments.real() == doctest::Approx(0.35));
    CHECK(chk.residual < 1e-15);
    CHECK_FALSE(chk.truncation_warning);
  }
  SUBCASE("random low-occupation state") {
    std::mt19937_64 rng(21);
    const VdpParams p{0.4, 0.8, 1.0, 0.3};
    const DensityMatrix rho = oracle::random_density(40, rng, 1.2);
    const auto chk = mode_equation_residual(p, rho);
    CHECK(chk.residual <= 1e-10);
  }
  SUBCASE("occupied top level raises the warning") {
    const auto chk = mode_equation_residual({1, 0, 1, 0.1}, DensityMatrix::fock(5, 4));
    CHECK(chk.truncation_warning);
  }
}

TEST_CASE("automatic truncation") {
  CHECK(Truncation::automatic({0, 0, 1, 0}).n_levels == 15);
  const Truncation lc = Truncation::automatic({200, 20, 1, 0});
  CHECK(lc.n_levels >= 90 + 5 * 12);
  CHECK(Truncation::automatic({1000, 1000, 1, 0}).n_levels >= 126);
  CHECK(Truncation::automatic({0, 1, 1e-6, 0.1}).n_levels <= 40);
}

TEST_CASE("density matrix helpers") {
  const DensityMatrix c = oracle::coherent(25, {0.8, -0.3});
  const DensityMatrix m = DensityMatrix::coherent(25, {0.8, -0.3});
  CHECK(max_diff(c.matrix(), m.matrix()) < 1e-12);
  CHECK(m.min_eigenvalue() > -1e-12);
  const DensityMatrix big = m.padded(30);
  CHECK(big.dim() == 30);
  CHECK(big.trace().real() == doctest::Approx(1.0));
  CHECK(DensityMatrix::fock(4, 3).tail_mass() == 1.0);
  CHECK_THROWS_AS(DensityMatrix::fock(4, 4), InvalidArgument);
}
