#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qvdp/analytic.hpp"

using namespace qvdp::analytic;

TEST_CASE("classical f at reference points") {
  CHECK(classical_f(0.0) == 1.0);
  CHECK(classical_f(4.0) == doctest::Approx(oracle::cubic_root_bisect(4.0)).epsilon(1e-14));
  CHECK(classical_f(4.0) == doctest::Approx(2.114908).epsilon(1e-6));
  CHECK(classical_f(-10.0) == doctest::Approx(0.0999).epsilon(1e-3));
}

TEST_CASE("classical f follows the stable branch") {
  double prev = classical_f(-1000.0);
  for (int k = -2000; k <= 2000; ++k) {
    const double x = k * 0.5;
    const double f = classical_f(x);
    REQUIRE(f > 0.0);
    CHECK(f == doctest::Approx(oracle::cubic_root_bisect(x)).epsilon(1e-13));
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("classical f satisfies the cubic") {
  for (int k = -60; k <= 60; ++k) {
    const double mag = std::pow(10.0, -3.0 + 6.0 * (std::abs(k) / 60.0));
    const long double x = k < 0 ? -mag : mag;
    const long double f = classical_f(x);
    CHECK(std::abs(static_cast<double>(x * f - f * f * f + 1.0L)) <= 1e-12);
    // The double overload carries the same root to double precision.
    const double fd = classical_f(static_cast<double>(x));
    CHECK(std::abs(fd - static_cast<double>(f)) <= 4e-16 * static_cast<double>(f));
  }
}

TEST_CASE("classical f asymptotes") {
  // Ratio tests: errors scale as x^(-5/2) for large positive x and x^(-4) for large negative x.
  auto pos = [](double x) { return classical_f(static_cast<long double>(x)) - std::sqrt(x) - 1.0 / (2.0 * x); };
  auto neg = [](double x) { return classical_f(static_cast<long double>(x)) - 1.0 / std::abs(x); };
  const double rp = static_cast<double>(pos(100.0) / pos(1000.0));
  const double rn = static_cast<double>(neg(-100.0) / neg(-1000.0));
  CHECK(std::log10(rp) == doctest::Approx(2.5).epsilon(0.02));
  CHECK(std::log10(rn) == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("classical response") {
  CHECK(classical_response({0, 1, 10}).amplitude == doctest::Approx(std::cbrt(10.0)).epsilon(1e-14));
  CHECK(classical_response({0, 1, 10}).amplitude == doctest::Approx(2.15443).epsilon(1e-5));
  const double w = 1e-4;
  CHECK(classical_response({1, 1, w}).amplitude == doctest::Approx(1 + w / 2).epsilon(1e-8));
  CHECK(std::abs(classical_response({-1, 1, 0.01}).amplitude - 0.01) < 1e-5);
  const auto lc = classical_response({4, 1, 0});
  CHECK(lc.amplitude == 2.0);
  CHECK(lc.phase_free);
  CHECK(lc.zero_drive);
  const auto damped = classical_response({-1, 1, 0});
  CHECK(damped.amplitude == 0.0);
  CHECK_FALSE(damped.phase_free);
}

TEST_CASE("two-level response") {
  CHECK(two_level_response(0.02, 0.001) == doctest::Approx(0.098039).epsilon(1e-5));
  const double g = 0.03;
  const double h = 1e-9;
  CHECK(two_level_response(g, h) / h == doctest::Approx(2 / g).epsilon(1e-9));
  const double wpk = g / (2 * std::sqrt(2.0));
  CHECK(two_level_response(g, wpk) == doctest::Approx(1 / (2 * std::sqrt(2.0))));
  CHECK(two_level_response(g, wpk * 1.01) < two_level_response(g, wpk));
  CHECK(two_level_response(g, wpk * 0.99) < two_level_response(g, wpk));
}

TEST_CASE("three-level response") {
  for (double w : {0.0, 1e-3, 0.3, 2.0}) CHECK(three_level_response(0, 0, 1, w) == doctest::Approx(2 * w));
  CHECK(three_level_response(0, 0.02, 1, 0.02) == doctest::Approx(0.25778).epsilon(1e-5));
  const double gp = 1e-3, h = 1e-8;
  CHECK(three_level_response(gp, 0, 1, h) / h == doctest::Approx(2 / (9 * gp)).epsilon(1e-6));
  CHECK(three_level_chi(gp, 0) == doctest::Approx(2 / (9 * gp)));
  // With gamma1_plus = 0 the ratio to the two-level expression is 1 + 8 Omega^2 / (gamma1_minus gamma2).
  const double gm = 0.02;
  for (double s : {0.01, 0.035, 0.1}) {
    const double w = s * std::sqrt(gm);
    CHECK(three_level_response(0, gm, 1, w) / two_level_response(gm, w) == doctest::Approx(1 + 8 * s * s));
  }
  CHECK(three_level_response(0, gm, 1, 0.035 * std::sqrt(gm)) ==
        doctest::Approx(two_level_response(gm, 0.035 * std::sqrt(gm))).epsilon(0.01));
}

TEST_CASE("critical susceptibility") {
  CHECK(critical_chi(1000, 1) == doctest::Approx(0.035682).epsilon(1e-4));
  CHECK(critical_chi(4 * 37.0, 1) == doctest::Approx(critical_chi(37.0, 1) / 2).epsilon(1e-15));
  const double gx = std::numbers::pi / 64;
  CHECK(critical_chi(gx, 1) == doctest::Approx(critical_chi_small(gx)).epsilon(1e-14));
}

TEST_CASE("limit-cycle susceptibility and gain") {
  CHECK(limitcycle_chi(5, 0, 1) == doctest::Approx(2.0 / 3.0));
  CHECK(limitcycle_chi(200, 20, 1) == doctest::Approx(0.62222).epsilon(1e-5));
  CHECK(limitcycle_chi(1e6, 30, 1) / passive_chi(30) == doctest::Approx(10.0).epsilon(1e-4));
  CHECK_THROWS(passive_chi(0.0));
  CHECK(passive_chi(0.5) == 4.0);
}

TEST_CASE("Gaussian estimates") {
  const auto g = limitcycle_gaussian(200, 20, 1);
  CHECK(g.mean == 90.0);
  CHECK(g.std == doctest::Approx(12.0416).epsilon(1e-5));
  // Mean equals the classical radius squared.
  const double cl = classical_response({90, 1, 0}).amplitude;
  CHECK(g.mean == doctest::Approx(cl * cl));
  CHECK(limitcycle_gaussian(7, 7, 1).mean == 0.0);
  const double eps = std::sqrt(1.0 / 1000);
  CHECK(critical_population_profile(1000, 1, 0) == doctest::Approx(2 * eps / std::sqrt(std::numbers::pi)));
  double s = 0;
  for (int n = 0; n <= 200; ++n) s += critical_population_profile(1000, 1, n);
  // Discrete sum of the half-Gaussian: 1 + eps / sqrt(pi) up to exponentially small terms.
  CHECK(s == doctest::Approx(1.0 + eps / std::sqrt(std::numbers::pi)).epsilon(1e-6));
}
