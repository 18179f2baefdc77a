#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qvdp/analytic.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/observables.hpp"

using namespace qvdp;

TEST_CASE("response") {
  DensityMatrix d(5);
  d(0, 0) = 0.6;
  d(1, 1) = 0.4;
  CHECK(response(d) == 0.0);
  d(1, 0) = d(0, 1) = 0.1;
  CHECK(response(d) == doctest::Approx(0.1));
  CHECK(response(oracle::coherent(20, 0.5)) == doctest::Approx(0.5).epsilon(1e-8));
  d(1, 0) = cplx(0.1, 1e-6);
  CHECK_THROWS_AS(response(d), NonRealResponse);
}

TEST_CASE("noise and signal-to-noise") {
  CHECK(noise_sigma(DensityMatrix::vacuum(4)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(noise_sigma(DensityMatrix::fock(4, 1)) == doctest::Approx(std::sqrt(1.5)));
  const DensityMatrix c = oracle::coherent(20, 0.5);
  CHECK(std::abs(noise_sigma(c) - std::sqrt(0.5)) < 1e-6);
  CHECK(snr(DensityMatrix::vacuum(4)) == 0.0);
  CHECK(std::abs(snr(c) - 0.5 * std::sqrt(2.0)) < 1e-5);
}

TEST_CASE("observables ignore unoccupied levels") {
  std::mt19937_64 rng(2);
  const VdpParams p{0.5, 0.2, 1, 0.4};
  const DensityMatrix rho = solve_steady(p, Truncation::automatic(p)).rho;
  const DensityMatrix big = rho.padded(rho.dim() + 7);
  CHECK(response(big) == response(rho));
  CHECK(mean_number(big) == mean_number(rho));
  CHECK(noise_sigma(big) == noise_sigma(rho));
}

TEST_CASE("number distribution") {
  const auto p = number_distribution(DensityMatrix::vacuum(5));
  CHECK(p == std::vector<double>{1, 0, 0, 0, 0});
  DensityMatrix bad(3);
  bad(0, 0) = 1.1;
  bad(1, 1) = -0.1;
  CHECK_THROWS_AS(number_distribution(bad), InvalidArgument);
}

TEST_CASE("Richardson estimate on the two-level formula") {
  // f(w) = 2 w g / (g^2 + 8 w^2); exact slope at w0 from calculus.
  const double g = 0.02;
  auto f = [g](double w) { return analytic::two_level_response(g, w); };
  for (double w0 : {0.0, 0.002, 0.01}) {
    const double exact = 2 * g * (g * g - 8 * w0 * w0) / std::pow(g * g + 8 * w0 * w0, 2);
    const double delta = std::max(1e-3 * w0, 1e-4);
    const Susceptibility s = richardson_derivative(f, w0, delta);
    const double d2 = (f(w0 + delta / 2) - (w0 == 0 ? -f(delta / 2) : f(w0 - delta / 2))) / delta;
    // The extrapolation moves the estimate by no more than twice the reported error.
    CHECK(std::abs(d2 - exact) <= 2.0 * s.estimate_error + 1e-12);
    CHECK(std::abs(s.chi - exact) <= std::abs(d2 - exact) + 1e-12);
  }
}

TEST_CASE("susceptibility at known points") {
  SUBCASE("critical") {
    const Susceptibility s = susceptibility({0, 0, 1, 0}, 0.0, Truncation{});
    CHECK(s.chi == doctest::Approx(2.0).epsilon(0.02));
    CHECK(s.step == doctest::Approx(1e-4));
  }
  SUBCASE("Gaussian critical regime") {
    const VdpParams p{1000, 1000, 1, 0};
    const Susceptibility s = susceptibility(p, 0.0, Truncation::automatic(p));
    CHECK(s.chi == doctest::Approx(0.035682).epsilon(0.05));
  }
  SUBCASE("limit cycle") {
    const VdpParams p{200, 20, 1, 0};
    const Susceptibility s = susceptibility(p, 0.0, Truncation::automatic(p));
    CHECK(s.chi == doctest::Approx(0.6222).epsilon(0.10));
  }
}

TEST_CASE("gain over a passive oscillator") {
  SUBCASE("critical Gamma1 = 1000") {
    const VdpParams p{1000, 1000, 1, 0};
    CHECK(gain0(p, Truncation::automatic(p)) == doctest::Approx(17.84).epsilon(0.05));
  }
  SUBCASE("gain above 1 needs gamma1_minus of a few gamma2") {
    const VdpParams lo{1.5, 1.5, 1, 0}, hi{5, 5, 1, 0};
    CHECK(gain0(lo, Truncation::automatic(lo)) < 1.0);
    CHECK(gain0(hi, Truncation::automatic(hi)) > 1.0);
  }
  SUBCASE("deep limit cycle") {
    const VdpParams p{300, 30, 1, 0};
    const double want = analytic::limitcycle_chi(300, 30, 1) / analytic::passive_chi(30);
    CHECK(gain0(p, Truncation::automatic(p)) == doctest::Approx(want).epsilon(0.10));
  }
  SUBCASE("undefined without loss") { CHECK_THROWS_AS(gain0({1, 0, 1, 0}, Truncation{}), PassiveUndefined); }
}

TEST_CASE("number distributions of the undriven regimes") {
  SUBCASE("critical half-Gaussian width") {
    const VdpParams p{1000, 1000, 1, 1e-6};
    const auto pn = number_distribution(solve_steady(p, Truncation::automatic(p)).rho);
    double m2 = 0;
    for (std::size_t n = 0; n < pn.size(); ++n) m2 += n * n * pn[n];
    // p ~ exp(-(n/w)^2) on n >= 0 has <n^2> = w^2 / 2.
    CHECK(std::sqrt(2 * m2) == doctest::Approx(std::sqrt(1000.0)).epsilon(0.05));
    for (std::size_t n = 0; n < pn.size(); ++n) {
      if (pn[n] > 1e-3) {
        CHECK(pn[n] == doctest::Approx(analytic::critical_population_profile(1000, 1, static_cast<int>(n))).epsilon(0.05));
      }
    }
  }
  SUBCASE("limit-cycle Gaussian") {
    const VdpParams p{200, 20, 1, 1e-6};
    const auto pn = number_distribution(solve_steady(p, Truncation::automatic(p)).rho);
    double m1 = 0, m2 = 0;
    for (std::size_t n = 0; n < pn.size(); ++n) {
      m1 += n * pn[n];
      m2 += n * n * pn[n];
    }
    CHECK(m1 == doctest::Approx(90).epsilon(0.05));
    CHECK(std::sqrt(m2 - m1 * m1) == doctest::Approx(12.042).epsilon(0.05));
  }
}

TEST_CASE("three-level regime with loss") {
  const VdpParams base{0, 0.02, 1, 0};
  const double wmin = std::sqrt(0.02) / (2 * std::sqrt(2.0));
  std::vector<double> ws, as;
  for (int k = 0; k <= 80; ++k) {
    const double w = 1e-4 * std::pow(10.0, 3.0 * k / 80);
    const VdpParams p = base.with_omega(w);
    ws.push_back(w);
    as.push_back(response(solve_steady(p, Truncation::automatic(p)).rho));
    if (w <= 0.05) {
      CHECK(as.back() == doctest::Approx(analytic::three_level_response(0, 0.02, 1, w)).epsilon(0.05));
    }
  }
  std::size_t imax = 0;
  while (imax + 1 < as.size() && as[imax + 1] > as[imax]) ++imax;
  std::size_t imin = imax;
  while (imin + 1 < as.size() && as[imin + 1] < as[imin]) ++imin;
  REQUIRE(imin > imax);
  CHECK(ws[imin] == doctest::Approx(wmin).epsilon(0.2));
  CHECK(as[imax] == doctest::Approx(1 / (2 * std::sqrt(2.0))).epsilon(0.15));
}

TEST_CASE("signal-to-noise in the gain-assisted regime") {
  double best = 0;
  for (double w : {0.5, 5.0, 20.0}) {
    const VdpParams p{90, 30, 1, w};
    best = std::max(best, snr(solve_steady(p, Truncation::automatic(p)).rho));
  }
  CHECK(best >= 1.0);
  const VdpParams quiet{0, 0.05, 1, 0.01};
  CHECK(snr(solve_steady(quiet, Truncation::automatic(quiet)).rho) < 1.0);
}
