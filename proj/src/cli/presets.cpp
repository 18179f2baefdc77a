#include <cmath>
#include <numbers>

#include "qvdp/analytic.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/observables.hpp"
#include "qvdp/steady.hpp"
#include "rows.hpp"

namespace qvdp::cli {

namespace {

using detail::fmt;
using detail::kNaN;
namespace fs = std::filesystem;

constexpr double kTailTol = 1e-10;
constexpr double kTol = 1e-9;
constexpr int kNMax = 400;
constexpr double kProfileDrive = 1e-4;

struct Ctx {
  std::string name;
  fs::path dir;
  PresetOptions opt;
  PresetResult result;

  std::string ext() const { return opt.format == Format::json ? ".json" : ".csv"; }

  void emit(const std::string& stem, Dataset ds, const std::vector<std::string>& extra = {}) {
    std::vector<std::string> meta{"preset: " + name};
    meta.insert(meta.end(), extra.begin(), extra.end());
    meta.insert(meta.end(), ds.meta.begin(), ds.meta.end());
    ds.meta = std::move(meta);
    const fs::path path = dir / (stem + ext());
    write_dataset(path, ds, opt.format);
    result.files.push_back(path);
    result.failures += ds.failures;
  }

  SweepConfig base(Mode mode) const {
    SweepConfig c;
    c.mode = mode;
    c.tail_tol = kTailTol;
    c.tol = kTol;
    c.n_max = kNMax;
    c.workers = opt.workers;
    c.strict = opt.strict;
    c.format = opt.format;
    return c;
  }
};

Range logspace(double a, double b, int n) { return {a, b, n, Spacing::log}; }
Range linspace(double a, double b, int n) { return {a, b, n, Spacing::linear}; }

Truncation pinned(int n_levels) {
  Truncation t;
  t.n_levels = n_levels;
  t.tail_tol = kTailTol;
  t.n_max = kNMax;
  return t;
}

std::vector<std::string> truncation_meta(const std::string& n_levels) {
  return {"truncation: n_levels " + n_levels + ", tail_tol " + fmt(kTailTol) + ", n_max " +
              std::to_string(kNMax) + ", grown by ceil(N/4) until the tail is below tail_tol",
          "tol: " + fmt(kTol)};
}

// One Wigner panel per drive plus a summary of the quantum center of mass
// against the classical amplitude.
void wigner_panels(Ctx& ctx, const std::string& prefix, VdpParams p,
                   const std::vector<std::pair<std::string, double>>& drives) {
  Dataset sm;
  sm.columns = {"panel", "gamma1_plus", "gamma1_minus", "gamma2", "omega", "response",
                "center_re", "center_im", "grid_integral", "max_W", "classical_response",
                "regime", "n_levels", "residual", "error"};
  WignerGridSpec spec;
  spec.n_radii = 120;
  spec.n_angles = 128;
  std::vector<WignerGrid> grids(drives.size());
  const int n = static_cast<int>(drives.size());
  auto make = [&](int i) {
    const VdpParams q = p.with_omega(drives[i].second);
    const SteadyStateResult s = solve_steady(q, Truncation::automatic(q, kTailTol, kNMax), kTol);
    grids[i] = wigner_grid(s.rho, spec);
    const cplx com = grids[i].center_of_mass();
    const auto cl = analytic::classical_response({q.gamma1(), q.gamma2, q.omega});
    return std::vector<Cell>{drives[i].first, q.gamma1_plus, q.gamma1_minus, q.gamma2, q.omega,
                             response(s.rho), com.real(), com.imag(), grids[i].integral(),
                             grids[i].max_abs(), cl.amplitude, detail::regime_flags(q),
                             static_cast<long long>(s.n_levels), s.residual, std::string()};
  };
  auto fail = [&](int i, const std::string& msg) {
    const VdpParams q = p.with_omega(drives[i].second);
    return std::vector<Cell>{drives[i].first, q.gamma1_plus, q.gamma1_minus, q.gamma2, q.omega,
                             kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, detail::regime_flags(q), 0LL,
                             kNaN, msg};
  };
  sm.rows = detail::evaluate_points(n, ctx.opt.workers, ctx.opt.strict, make, fail, &sm.failures);
  std::vector<std::string> meta = truncation_meta("auto");
  meta.push_back("grid: polar, n_radii " + std::to_string(spec.n_radii) + ", n_angles " +
                 std::to_string(spec.n_angles) + ", r_max auto");
  for (int i = 0; i < n; ++i) {
    meta.push_back("panel " + drives[i].first + ": omega " + fmt(drives[i].second));
  }
  for (int i = 0; i < n; ++i) {
    if (grids[i].values.empty()) continue;
    std::vector<std::string> pm{"preset: " + ctx.name, "panel: " + drives[i].first,
                                "gamma1_plus: " + fmt(p.gamma1_plus),
                                "gamma1_minus: " + fmt(p.gamma1_minus), "gamma2: " + fmt(p.gamma2),
                                "omega: " + fmt(drives[i].second)};
    const fs::path path = ctx.dir / (prefix + "_wigner_" + drives[i].first + ctx.ext());
    write_dataset(path, detail::grid_dataset(grids[i], pm, true), ctx.opt.format);
    ctx.result.files.push_back(path);
  }
  ctx.emit(prefix + "_panels", std::move(sm), meta);
}

void fig1(Ctx& ctx) {
  SweepConfig c = ctx.base(Mode::drive_sweep);
  c.range = logspace(1e-4, 10.0, 40);
  c.n_levels = 40;
  ctx.emit("fig1", run_sweep(c));
}

void fig2(Ctx& ctx) {
  SweepConfig c = ctx.base(Mode::rate_sweep);
  c.n_levels = 20;
  c.range = logspace(1e-3, 1.0, 25);
  c.sweep = "gamma1_minus";
  ctx.emit("fig2_loss", run_sweep(c), {"branch: gamma1_plus = 0"});
  c.sweep = "gamma1_plus";
  ctx.emit("fig2_gain", run_sweep(c), {"branch: gamma1_minus = 0"});
  SweepConfig d = ctx.base(Mode::drive_sweep);
  d.n_levels = 20;
  d.range = linspace(1e-4, 1e-4, 1);
  ctx.emit("fig2_critical", run_sweep(d), {"point: gamma1_plus = gamma1_minus = 0, weak drive"});
}

void fig3(Ctx& ctx) {
  SweepConfig c = ctx.base(Mode::drive_sweep);
  c.params.gamma1_minus = 0.02;
  c.range = logspace(1e-4, 10.0, 60);
  c.n_levels = 40;
  ctx.emit("fig3_response", run_sweep(c));
  const double dip = std::sqrt(c.params.gamma1_minus) / (2.0 * std::sqrt(2.0));
  wigner_panels(ctx, "fig3", c.params, {{"linear", 0.01}, {"dip", dip}, {"classical", 2.0}});
}

void fig4(Ctx& ctx) {
  const std::vector<std::pair<double, int>> branches{{5.0, 40}, {50.0, 90}, {1000.0, 200}};
  for (const auto& [G, n] : branches) {
    SweepConfig c = ctx.base(Mode::drive_sweep);
    c.params.gamma1_plus = G;
    c.params.gamma1_minus = G;
    c.range = logspace(1e-2, 1e2, 25);
    c.n_levels = n;
    c.chi = false;
    char stem[64];
    std::snprintf(stem, sizeof stem, "fig4_response_G%g", G);
    ctx.emit(stem, run_sweep(c), {"branch: Gamma1 = " + fmt(G)});
  }
  SweepConfig g = ctx.base(Mode::rate_sweep);
  g.sweep = "Gamma1";
  g.range = logspace(1.0, 1000.0, 13);
  ctx.emit("fig4_gain", run_sweep(g),
           {"gain: chi(omega -> 0) / (2 / gamma1_minus); gain_asymptotic = sqrt(Gamma1 / (pi gamma2))"});
}

void fig5(Ctx& ctx) {
  VdpParams p;
  p.gamma1_plus = 50.0;
  p.gamma1_minus = 20.0;
  wigner_panels(ctx, "fig5", p, {{"limit_cycle", 0.5}, {"crossover", 5.0}, {"classical", 50.0}});
}

void figS1(Ctx& ctx) {
  SweepConfig c = ctx.base(Mode::classical);
  c.sweep = "x";
  c.range = linspace(-10.0, 10.0, 401);
  ctx.emit("figS1", run_sweep(c));
}

std::vector<double> coherences(const DensityMatrix& rho) {
  std::vector<double> q(rho.dim(), 0.0);
  for (int n = 1; n < rho.dim(); ++n) q[n] = rho(n, n - 1).real();
  return q;
}

void figS2(Ctx& ctx) {
  VdpParams p;
  p.gamma1_plus = p.gamma1_minus = 1000.0;
  p.omega = kProfileDrive;
  const SteadyStateResult s = solve_steady(p, pinned(200), kTol);
  const double G = p.Gamma1();
  const double eps = std::sqrt(p.gamma2 / G);
  const double eta = p.omega / G;
  Dataset ds;
  ds.columns = {"n", "p_n", "p_asymptotic", "q_n_per_drive", "q_asymptotic_per_drive"};
  const std::vector<double> c = coherences(s.rho);
  for (int n = 0; n < s.n_levels; ++n) {
    const double x = n * eps;
    const double q = std::sqrt(static_cast<double>(n)) * c[n];
    const double qa = 4.0 * eta / std::sqrt(std::numbers::pi) * x * std::exp(-x * x);
    ds.rows.push_back({static_cast<long long>(n), s.rho(n, n).real(),
                       analytic::critical_population_profile(G, p.gamma2, n), q / p.omega, qa / p.omega});
  }
  std::vector<std::string> meta = truncation_meta(std::to_string(s.n_levels));
  meta.insert(meta.begin(), {"gamma1_plus: 1000", "gamma1_minus: 1000", "gamma2: 1",
                             "omega: " + fmt(p.omega) + " (linear response)",
                             "q_n = sqrt(n) rho[n,n-1]; q_asymptotic = (4 eta / sqrt(pi)) x exp(-x^2), "
                             "x = n sqrt(gamma2/Gamma1), eta = omega/Gamma1",
                             "residual: " + fmt(s.residual)});
  ctx.emit("figS2_profiles", std::move(ds), meta);

  SweepConfig r = ctx.base(Mode::rate_sweep);
  r.sweep = "Gamma1";
  r.range = logspace(1e-2, 1e3, 21);
  ctx.emit("figS2_chi", run_sweep(r));
}

void figS4(Ctx& ctx) {
  VdpParams p;
  p.gamma1_plus = 200.0;
  p.gamma1_minus = 20.0;
  p.omega = kProfileDrive;
  const SteadyStateResult s = solve_steady(p, Truncation::automatic(p, kTailTol, kNMax), kTol);
  const double eps = std::sqrt(p.gamma2 / p.gamma1_plus);
  const double zeta = p.gamma1_minus / p.gamma1_plus;
  const double beta = 0.5 * (1.0 - zeta);
  const double eta = p.omega / p.gamma1_plus;
  Dataset ds;
  ds.columns = {"n", "p_n", "p_asymptotic", "chi_n_per_drive", "chi_n_asymptotic_per_drive"};
  const std::vector<double> c = coherences(s.rho);
  for (int n = 0; n < s.n_levels; ++n) {
    const double y = n * eps - beta / eps;
    const double g = std::exp(-2.0 * y * y / (3.0 - zeta));
    const double u = eps * std::sqrt(2.0 / ((3.0 - zeta) * std::numbers::pi)) * g;
    const double v = 4.0 * eta * std::pow(3.0 - zeta, -1.5) * std::sqrt((1.0 - zeta) / std::numbers::pi) * g;
    ds.rows.push_back({static_cast<long long>(n), s.rho(n, n).real(), u, c[n] / p.omega, v / p.omega});
  }
  std::vector<std::string> meta = truncation_meta(std::to_string(s.n_levels));
  meta.insert(meta.begin(), {"gamma1_plus: 200", "gamma1_minus: 20", "gamma2: 1",
                             "omega: " + fmt(p.omega) + " (linear response)",
                             "chi_n = rho[n,n-1]; asymptotes u(y), v(y) with y = n eps - beta/eps, "
                             "eps = sqrt(gamma2/gamma1_plus), beta = (1 - gamma1_minus/gamma1_plus)/2",
                             "residual: " + fmt(s.residual)});
  ctx.emit("figS4_profiles", std::move(ds), meta);

  const std::vector<double> ratios{1.5, 2.0, 3.0, 5.0, 10.0};
  const std::vector<double> losses{1.0, 3.0, 10.0, 20.0};
  std::vector<VdpParams> pts;
  for (double gm : losses)
    for (double rt : ratios) pts.push_back(VdpParams{rt * gm, gm, 1.0, 0.0});
  Dataset sf;
  sf.columns = {"ratio", "gamma1_plus", "gamma1_minus", "gamma2", "chi", "chi_error", "passive_chi",
                "chi_over_passive", "limitcycle_chi", "asymptotic_over_passive", "regime",
                "n_levels", "residual", "error"};
  auto make = [&](int i) {
    const VdpParams& q = pts[i];
    const Susceptibility sus = susceptibility(q, 0.0, Truncation::automatic(q, kTailTol, kNMax), {kTol});
    const double cp = analytic::passive_chi(q.gamma1_minus);
    const double lc = analytic::limitcycle_chi(q.gamma1_plus, q.gamma1_minus, q.gamma2);
    return std::vector<Cell>{q.gamma1_plus / q.gamma1_minus, q.gamma1_plus, q.gamma1_minus, q.gamma2,
                             sus.chi, sus.estimate_error, cp, sus.chi / cp, lc, lc / cp,
                             detail::regime_flags(q), static_cast<long long>(sus.n_levels),
                             sus.residual, std::string()};
  };
  auto fail = [&](int i, const std::string& msg) {
    const VdpParams& q = pts[i];
    const double cp = analytic::passive_chi(q.gamma1_minus);
    const double lc = analytic::limitcycle_chi(q.gamma1_plus, q.gamma1_minus, q.gamma2);
    return std::vector<Cell>{q.gamma1_plus / q.gamma1_minus, q.gamma1_plus, q.gamma1_minus, q.gamma2,
                             kNaN, kNaN, cp, kNaN, lc, lc / cp, detail::regime_flags(q), 0LL, kNaN, msg};
  };
  sf.rows = detail::evaluate_points(static_cast<int>(pts.size()), ctx.opt.workers, ctx.opt.strict,
                                    make, fail, &sf.failures);
  ctx.emit("figS4_surface", std::move(sf), truncation_meta("auto"));
}

void snr_grid(Ctx& ctx, const std::string& stem, const std::vector<VdpParams>& pts,
              std::vector<std::string> meta) {
  Dataset ds;
  ds.columns = {"gamma1_plus", "gamma1_minus", "gamma2", "omega", "response", "sigma", "snr",
                "chi", "passive_chi", "n_levels", "residual", "error"};
  auto make = [&](int i) {
    const VdpParams& q = pts[i];
    const Truncation t = Truncation::automatic(q, kTailTol, kNMax);
    const SteadyStateResult s = solve_steady(q, t, kTol);
    const ResponsePoint pt = response_point(s, q.omega);
    const Susceptibility sus = susceptibility(q, q.omega, t, {kTol});
    const double cp = q.gamma1_minus > 0.0 ? analytic::passive_chi(q.gamma1_minus) : kNaN;
    return std::vector<Cell>{q.gamma1_plus, q.gamma1_minus, q.gamma2, q.omega, pt.response,
                             pt.sigma, pt.snr, sus.chi, cp,
                             static_cast<long long>(std::max(s.n_levels, sus.n_levels)),
                             std::max(s.residual, sus.residual), std::string()};
  };
  auto fail = [&](int i, const std::string& msg) {
    const VdpParams& q = pts[i];
    const double cp = q.gamma1_minus > 0.0 ? analytic::passive_chi(q.gamma1_minus) : kNaN;
    return std::vector<Cell>{q.gamma1_plus, q.gamma1_minus, q.gamma2, q.omega, kNaN, kNaN, kNaN,
                             kNaN, cp, 0LL, kNaN, msg};
  };
  ds.rows = detail::evaluate_points(static_cast<int>(pts.size()), ctx.opt.workers, ctx.opt.strict,
                                    make, fail, &ds.failures);
  std::vector<std::string> tm = truncation_meta("auto");
  meta.insert(meta.end(), tm.begin(), tm.end());
  ctx.emit(stem, std::move(ds), meta);
}

void figS5(Ctx& ctx) {
  const int n = ctx.opt.full_resolution ? 60 : 25;
  const std::string res = "resolution: " + std::to_string(n) + " x " + std::to_string(n);
  {
    const std::vector<double> gm = logspace(1e-2, 1.0, n).values();
    const std::vector<double> om = logspace(1e-3, 10.0, n).values();
    std::vector<VdpParams> pts;
    for (double g : gm)
      for (double w : om) pts.push_back(VdpParams{0.0, g, 1.0, w});
    snr_grid(ctx, "figS5a", pts,
             {"panel: gamma1_plus = 0; gamma1_minus in logspace[1e-2, 1], omega in logspace[1e-3, 10]",
              res, "row order: gamma1_minus outer, omega inner"});
  }
  {
    const std::vector<double> gp = linspace(0.0, 120.0, n).values();
    const std::vector<double> om = logspace(1e-2, 30.0, n).values();
    std::vector<VdpParams> pts;
    for (double g : gp)
      for (double w : om) pts.push_back(VdpParams{g, 30.0, 1.0, w});
    snr_grid(ctx, "figS5b", pts,
             {"panel: gamma1_minus = 30; gamma1_plus in linspace[0, 120], omega in logspace[1e-2, 30]",
              res, "row order: gamma1_plus outer, omega inner"});
  }
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig5",
                                              "figS1", "figS2", "figS4", "figS5"};
  return names;
}

PresetResult figure_preset(const std::string& name, const fs::path& out_dir, const PresetOptions& opt) {
  Ctx ctx{name, out_dir, opt, {}};
  fs::create_directories(out_dir);
  if (name == "fig1") {
    fig1(ctx);
  } else if (name == "fig2") {
    fig2(ctx);
  } else if (name == "fig3") {
    fig3(ctx);
  } else if (name == "fig4") {
    fig4(ctx);
  } else if (name == "fig5") {
    fig5(ctx);
  } else if (name == "figS1") {
    figS1(ctx);
  } else if (name == "figS2") {
    figS2(ctx);
  } else if (name == "figS4") {
    figS4(ctx);
  } else if (name == "figS5") {
    figS5(ctx);
  } else {
    throw ConfigError("unknown figure preset '" + name + "'");
  }
  return ctx.result;
}

}  // namespace qvdp::cli
