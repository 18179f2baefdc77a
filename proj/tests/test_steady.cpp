#include <doctest.h>

#include "oracles.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/observables.hpp"
#include "qvdp/steady.hpp"

using namespace qvdp;

TEST_CASE("steady state matches the dense solve") {
  const VdpParams cases[] = {{0, 0.5, 1, 0.3}, {0.7, 0.2, 1, 0.4}, {1.5, 1.5, 1, 0.05}, {0, 0, 1, 1.0}};
  for (const auto& p : cases) {
    for (SolvePath path : {SolvePath::real_symmetric, SolvePath::complex_full}) {
      const SteadyStateResult s = solve_steady_fixed(p, 9, 1e-9, path);
      const Eigen::MatrixXcd ref = oracle::dense_steady(p, 9);
      CHECK((s.rho.matrix() - ref).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("real fast path agrees with the complex path") {
  const VdpParams cases[] = {{0, 0.02, 1, 0.05}, {3, 1, 1, 2.0}, {20, 20, 1, 0.3}};
  for (const auto& p : cases) {
    const Truncation t = Truncation::automatic(p);
    const SteadyStateResult a = solve_steady(p, t, 1e-9, SolvePath::real_symmetric);
    const SteadyStateResult b = solve_steady(p, t, 1e-9, SolvePath::complex_full);
    REQUIRE(a.n_levels == b.n_levels);
    CHECK((a.rho.matrix() - b.rho.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(a.rho.matrix().imag().cwiseAbs().maxCoeff() < 1e-10);
    CHECK(a.rho.hermiticity_error() < 1e-10);
    CHECK((b.rho.matrix() - b.rho.matrix().transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("damped linear response with negligible two-body loss") {
  const VdpParams p{0, 1, 1e-6, 0.1};
  const SteadyStateResult s = solve_steady(p, Truncation::automatic(p));
  CHECK(response(s.rho) == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("critical weak drive") {
  const VdpParams p{0, 0, 1, 1e-4};
  const SteadyStateResult s = solve_steady(p, Truncation{});
  CHECK(response(s.rho) == doctest::Approx(2e-4).epsilon(0.01));
  CHECK(s.nullspace_dim == 1);
  const SteadyStateResult half = solve_steady(p.with_omega(5e-5), Truncation{});
  CHECK(response(half.rho) == doctest::Approx(1e-4).epsilon(0.01));
}

TEST_CASE("undriven critical point is degenerate") {
  try {
    solve_steady({0, 0, 1, 0}, Truncation{});
    FAIL("expected DegenerateSteadyState");
  } catch (const DegenerateSteadyState& e) {
    CHECK(e.nullity() >= 2);
  }
}

TEST_CASE("null space dimension") {
  SUBCASE("critical, undriven") {
    const VdpParams p{0, 0, 1, 0};
    CHECK(nullspace_dimension(build_liouvillian(p, 6)) == 4);
    CHECK(oracle::dense_nullity(oracle::dense_liouvillian(p, 6)) == 4);
  }
  SUBCASE("damped") { CHECK(nullspace_dimension(build_liouvillian({0, 1, 1, 0}, 6)) == 1); }
  SUBCASE("driven gain") {
    const VdpParams p{1, 0, 1, 0.2};
    CHECK(nullspace_dimension(build_liouvillian(p, 20)) == 1);
    CHECK(oracle::dense_nullity(oracle::dense_liouvillian(p, 20)) == 1);
  }
}

TEST_CASE("drive antisymmetry") {
  const VdpParams cases[] = {
      {0, 0.3, 1, 0.2}, {1, 0.2, 1, 0.7}, {0, 0, 1, 0.01}, {5, 5, 1, 1.0}, {0.05, 0.02, 1, 0.04}};
  for (const auto& p : cases) {
    const Truncation t = Truncation::automatic(p);
    const double up = response(solve_steady(p, t).rho);
    const double down = response(solve_steady(p.with_omega(-p.omega), t).rho);
    CHECK(std::abs(up + down) <= 1e-9 * std::max(1.0, std::abs(up)));
  }
}

TEST_CASE("truncation convergence") {
  const VdpParams cases[] = {{0, 0, 1, 2.0}, {10, 10, 1, 0.5}, {30, 5, 1, 1.0}};
  for (const auto& p : cases) {
    const SteadyStateResult s = solve_steady(p, Truncation::automatic(p));
    const double a = response(s.rho);
    const double b = response(solve_steady_fixed(p, s.n_levels + 5).rho);
    CHECK(s.tail_mass <= 1e-10);
    CHECK(std::abs(a - b) <= 10 * 1e-10 * std::abs(a));
  }
}

TEST_CASE("adaptive growth respects the cap") {
  Truncation t;
  t.n_levels = 15;
  t.n_max = 40;
  CHECK_THROWS_AS(solve_steady({200, 20, 1, 0}, t), TruncationExceeded);
  t.n_max = 400;
  const SteadyStateResult s = solve_steady({30, 10, 1, 0.1}, t);
  CHECK(s.n_levels > 15);
  CHECK(s.tail_mass <= t.tail_tol);
}

TEST_CASE("mode equation holds at accepted steady states") {
  const VdpParams cases[] = {{0, 0.02, 1, 0.05}, {2, 1, 1, 0.8}, {50, 20, 1, 5.0}};
  for (const auto& p : cases) {
    const SteadyStateResult s = solve_steady(p, Truncation::automatic(p));
    const auto chk = mode_equation_residual(p, s.rho);
    CHECK(chk.residual <= 1e-8);
  }
}

TEST_CASE("time evolution") {
  SUBCASE("one-body decay of the number") {
    const VdpParams p{0, 1, 1, 0};
    const DensityMatrix rho = evolve(p, DensityMatrix::fock(6, 1), 0.0, 5.0);
    CHECK(std::abs(mean_number(rho) - 6.7379469990854670966e-3) < 1e-5);
  }
  SUBCASE("vacuum stays put") {
    const DensityMatrix rho = evolve({0, 0, 1, 0}, DensityMatrix::vacuum(6), 0.0, 3.0);
    CHECK(rho(0, 0) == cplx(1.0));
    CHECK(rho.max_abs() == 1.0);
  }
  SUBCASE("relaxes to the linear-solve steady state") {
    const VdpParams p{0, 0, 1, 0.5};
    const SteadyStateResult s = solve_steady(p, Truncation{});
    const SteadyStateResult e = evolve_to_steady(p, DensityMatrix::vacuum(s.n_levels), 0.0, 400.0, 1e-11);
    CHECK(std::abs(response(e.rho) - response(s.rho)) < 1e-6);
  }
  SUBCASE("negative duration") {
    CHECK_THROWS_AS(evolve({0, 1, 1, 0}, DensityMatrix::vacuum(4), 0.0, -1.0), InvalidArgument);
  }
}
