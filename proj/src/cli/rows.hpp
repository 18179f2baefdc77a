#pragma once

#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qvdp/sweep.hpp"

namespace qvdp::cli::detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// '|'-joined regime labels for a parameter point; empty when none applies.
std::string regime_flags(const VdpParams& p);

// Classical d(alpha)/d(Omega) = 1 / (3 gamma2 alpha^2 - gamma1).
double classical_chi(const VdpParams& p);

struct Asymptote {
  double chi = kNaN;
  std::string formula;
};
// Weak-drive susceptibility formula matching the regime, if any.
Asymptote asymptotic_chi(const VdpParams& p);

Truncation truncation_for(const SweepConfig& cfg, const VdpParams& p);
std::vector<std::string> config_meta(const SweepConfig& cfg);
std::string mode_name(Mode m);
std::string fmt(double v);

// Convert a sampled grid to a dataset (r, phi, W) or (x, y, W), optionally with
// W divided by its largest magnitude.
Dataset grid_dataset(const WignerGrid& grid, std::vector<std::string> meta, bool rescaled);

class PointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluates rows[i] = make(i) on a bounded pool of `workers` threads. A throwing
// point becomes fail(i, message); in strict mode the sweep stops and the
// lowest-index failure is rethrown as PointError.
template <class Make, class Fail>
std::vector<std::vector<Cell>> evaluate_points(int n, int workers, bool strict, Make&& make,
                                               Fail&& fail, int* failures) {
  std::vector<std::vector<Cell>> rows(n);
  std::vector<std::string> errors(n);
  std::vector<char> failed(n, 0);
  bool stop = false;
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    bool halted;
#pragma omp atomic read
    halted = stop;
    if (strict && halted) continue;
    try {
      rows[i] = make(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      failed[i] = 1;
      if (strict) {
#pragma omp atomic write
        stop = true;
      }
    }
  }
  int count = 0;
  for (int i = 0; i < n; ++i) {
    if (!failed[i]) continue;
    if (strict) throw PointError("point " + std::to_string(i) + ": " + errors[i]);
    rows[i] = fail(i, errors[i]);
    ++count;
  }
  if (failures) *failures = count;
  return rows;
}

}  // namespace qvdp::cli::detail
