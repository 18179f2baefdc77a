#pragma once

#include <cmath>

#include "qvdp/model.hpp"

namespace qvdp::detail {

// Diagonal of a a^dagger for the N-level ladder: n + 1 below the top, 0 at the top.
inline double raise_norm(int n, int n_levels) { return n + 1 < n_levels ? n + 1.0 : 0.0; }

// Emits every (m, m', coefficient) with rho_dot(n, n') += coefficient * rho(m, m').
// Order is fixed: diagonal term first, then drive neighbours, then the
// dissipative inflows from the same diagonal.
template <class Emit>
void for_each_coupling(const VdpParams& p, int N, int n, int np, Emit&& emit) {
  const double dn = n, dnp = np;
  const double diag = -0.5 * p.gamma1_plus * (raise_norm(n, N) + raise_norm(np, N)) -
                      0.5 * p.gamma1_minus * (dn + dnp) -
                      0.5 * p.gamma2 * (dn * (dn - 1.0) + dnp * (dnp - 1.0));
  emit(n, np, diag);

  const double w = p.omega;
  if (w != 0.0) {
    if (n >= 1) emit(n - 1, np, w * std::sqrt(dn));
    if (n + 1 < N) emit(n + 1, np, -w * std::sqrt(dn + 1.0));
    if (np >= 1) emit(n, np - 1, w * std::sqrt(dnp));
    if (np + 1 < N) emit(n, np + 1, -w * std::sqrt(dnp + 1.0));
  }
  if (p.gamma1_plus != 0.0 && n >= 1 && np >= 1) {
    emit(n - 1, np - 1, p.gamma1_plus * std::sqrt(dn * dnp));
  }
  if (p.gamma1_minus != 0.0 && n + 1 < N && np + 1 < N) {
    emit(n + 1, np + 1, p.gamma1_minus * std::sqrt((dn + 1.0) * (dnp + 1.0)));
  }
  if (p.gamma2 != 0.0 && n + 2 < N && np + 2 < N) {
    emit(n + 2, np + 2,
         p.gamma2 * std::sqrt((dn + 1.0) * (dn + 2.0) * (dnp + 1.0) * (dnp + 2.0)));
  }
}

}  // namespace qvdp::detail
