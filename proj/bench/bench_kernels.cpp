// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "qvdp/model.hpp"
#include "qvdp/wigner.hpp"

namespace {

qvdp::DensityMatrix random_state(int n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = qvdp::cplx(g(rng), g(rng)) * std::exp(-0.05 * r);
  Eigen::MatrixXcd rho = m * m.adjoint();
  rho /= rho.trace().real();
  return qvdp::DensityMatrix(rho);
}

const qvdp::VdpParams kParams{20, 5, 1, 0.7};

void BM_apply_serial(benchmark::State& st) {
  const auto rho = random_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(qvdp::reference::apply_liouvillian(kParams, rho));
}

void BM_apply_omp(benchmark::State& st) {
  const auto rho = random_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(qvdp::apply_liouvillian(kParams, rho));
}

qvdp::WignerGridSpec spec() {
  qvdp::WignerGridSpec s;
  s.r_max = 8.0;
  s.n_radii = 60;
  s.n_angles = 64;
  return s;
}

void BM_wigner_serial(benchmark::State& st) {
  const auto rho = random_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(qvdp::reference::wigner_grid(rho, spec()));
}

void BM_wigner_omp(benchmark::State& st) {
  const auto rho = random_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(qvdp::wigner_grid(rho, spec()));
}

}  // namespace

BENCHMARK(BM_apply_serial)->Arg(20)->Arg(60)->Arg(150);
BENCHMARK(BM_apply_omp)->Arg(20)->Arg(60)->Arg(150);
BENCHMARK(BM_wigner_serial)->Arg(10)->Arg(40);
BENCHMARK(BM_wigner_omp)->Arg(10)->Arg(40);

BENCHMARK_MAIN();
