#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qvdp/analytic.hpp"
#include "qvdp/errors.hpp"
#include "qvdp/observables.hpp"
#include "qvdp/steady.hpp"
#include "rows.hpp"

namespace qvdp::cli {

namespace detail {

namespace {

bool critical(const VdpParams& p) {
  return std::abs(p.gamma1_plus - p.gamma1_minus) <= 1e-12 * std::max(1.0, p.Gamma1());
}

}  // namespace

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::drive_sweep: return "drive-sweep";
    case Mode::rate_sweep: return "rate-sweep";
    case Mode::wigner: return "wigner";
    case Mode::classical: return "classical";
    case Mode::figure_preset: return "figure-preset";
  }
  return "?";
}

std::string regime_flags(const VdpParams& p) {
  std::vector<std::string> f;
  const double g2 = p.gamma2;
  if (std::max({p.gamma1_plus, p.gamma1_minus, std::abs(p.omega)}) <= 0.1 * g2) f.push_back("three_level");
  if (critical(p) && p.Gamma1() >= 10.0 * g2) f.push_back("critical_gaussian");
  if (critical(p) && p.Gamma1() > 0.0 && p.Gamma1() <= 0.1 * g2) f.push_back("critical_weak");
  if (p.gamma1() >= 10.0 * g2) f.push_back("limit_cycle");
  if (p.omega > 0.0) {
    const auto cl = analytic::classical_response({p.gamma1(), g2, p.omega});
    if (cl.amplitude >= 1.0 && p.gamma1() < 10.0 * g2) f.push_back("classical");
  }
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "|" : "") + f[i];
  return out;
}

double classical_chi(const VdpParams& p) {
  const auto cl = analytic::classical_response({p.gamma1(), p.gamma2, p.omega});
  const double alpha = cl.amplitude;
  const double denom = 3.0 * p.gamma2 * alpha * alpha - p.gamma1();
  return denom == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / denom;
}

Asymptote asymptotic_chi(const VdpParams& p) {
  const double g2 = p.gamma2;
  if (p.gamma1_plus == 0.0 && p.gamma1_minus == 0.0) return {2.0 / g2, "2/gamma2"};
  if (critical(p) && p.Gamma1() >= 10.0 * g2) {
    return {analytic::critical_chi(p.Gamma1(), g2), "2/sqrt(pi*Gamma1*gamma2)"};
  }
  if (critical(p) && p.Gamma1() <= 0.1 * g2) {
    return {analytic::critical_chi_small(p.Gamma1()), "1/(4*Gamma1)"};
  }
  if (p.gamma1() >= 10.0 * g2) {
    return {analytic::limitcycle_chi(p.gamma1_plus, p.gamma1_minus, g2),
            "(2/(3*gamma2))*(1-2*g-/(3*g+))"};
  }
  if (std::max(p.gamma1_plus, p.gamma1_minus) <= 0.1 * g2) {
    return {analytic::three_level_chi(p.gamma1_plus, p.gamma1_minus) / g2,
            "2*(g+ + g-)/(3*g+ + g-)^2"};
  }
  if (p.gamma1_plus == 0.0) return {analytic::passive_chi(p.gamma1_minus), "2/gamma1_minus"};
  return {};
}

Truncation truncation_for(const SweepConfig& cfg, const VdpParams& p) {
  if (cfg.n_levels > 0) {
    Truncation t;
    t.n_levels = cfg.n_levels;
    t.tail_tol = cfg.tail_tol;
    t.n_max = cfg.n_max;
    return t;
  }
  return Truncation::automatic(p, cfg.tail_tol, cfg.n_max);
}

std::vector<std::string> config_meta(const SweepConfig& c) {
  std::vector<std::string> m;
  m.push_back("qvdp dataset");
  m.push_back("mode: " + mode_name(c.mode));
  m.push_back("gamma1_plus: " + fmt(c.params.gamma1_plus));
  m.push_back("gamma1_minus: " + fmt(c.params.gamma1_minus));
  m.push_back("gamma2: " + fmt(c.params.gamma2));
  m.push_back("omega: " + fmt(c.params.omega));
  if (c.mode == Mode::drive_sweep || c.mode == Mode::rate_sweep || c.mode == Mode::classical) {
    m.push_back("sweep: " + c.sweep);
    m.push_back("start: " + fmt(c.range.start));
    m.push_back("stop: " + fmt(c.range.stop));
    m.push_back("count: " + std::to_string(c.range.count));
    m.push_back(std::string("spacing: ") + (c.range.spacing == Spacing::log ? "log" : "linear"));
  }
  if (c.mode != Mode::classical) {
    m.push_back("n_levels: " + (c.n_levels > 0 ? std::to_string(c.n_levels) : std::string("auto")));
    m.push_back("tail_tol: " + fmt(c.tail_tol));
    m.push_back("n_max: " + std::to_string(c.n_max));
    m.push_back("tol: " + fmt(c.tol));
  }
  if (c.mode == Mode::drive_sweep) m.push_back(std::string("chi: ") + (c.chi ? "true" : "false"));
  if (c.mode == Mode::drive_sweep || c.mode == Mode::rate_sweep) {
    m.push_back("chi_method: Richardson central difference, delta = max(1e-3*omega, 1e-4*gamma2)");
  }
  if (c.mode == Mode::wigner) {
    m.push_back(std::string("grid: ") + (c.grid.kind == GridKind::polar ? "polar" : "cartesian"));
    m.push_back("r_max: " + (c.grid.r_max > 0 ? fmt(c.grid.r_max) : std::string("auto")));
    if (c.grid.kind == GridKind::polar) {
      m.push_back("n_radii: " + std::to_string(c.grid.n_radii));
      m.push_back("n_angles: " + std::to_string(c.grid.n_angles));
    } else {
      m.push_back("n_points: " + std::to_string(c.grid.n_points));
    }
  }
  m.push_back("units: rates and drive in the units of the input (gamma2 sets the scale)");
  return m;
}

Dataset grid_dataset(const WignerGrid& grid, std::vector<std::string> meta, bool rescaled) {
  Dataset ds;
  ds.meta = std::move(meta);
  const bool polar = grid.kind == GridKind::polar;
  ds.meta.push_back(std::string("wigner: W(alpha), alpha = ") +
                    (polar ? "r*exp(i*phi)" : "x + i*y") + ", integral W d^2alpha = 1");
  ds.meta.push_back(std::string("layout: ") +
                    (polar ? "polar (Gauss-Legendre radii, uniform angles)" : "cartesian"));
  ds.meta.push_back("r_max: " + fmt(grid.r_max));
  ds.columns = polar ? std::vector<std::string>{"r", "phi", "W"} : std::vector<std::string>{"x", "y", "W"};
  const double scale = rescaled ? grid.max_abs() : 0.0;
  if (rescaled) {
    ds.meta.push_back("W_rescaled: W / max|W| = W / " + fmt(scale));
    ds.columns.push_back("W_rescaled");
  }
  auto push = [&](double a, double b, double w) {
    std::vector<Cell> row{a, b, w};
    if (rescaled) row.push_back(scale > 0 ? w / scale : 0.0);
    ds.rows.push_back(std::move(row));
  };
  if (polar) {
    const std::size_t na = grid.angles.size();
    for (std::size_t i = 0; i < grid.radii.size(); ++i)
      for (std::size_t a = 0; a < na; ++a) push(grid.radii[i], grid.angles[a], grid.values[i * na + a]);
  } else {
    const std::size_t nx = grid.xs.size();
    for (std::size_t iy = 0; iy < grid.ys.size(); ++iy)
      for (std::size_t ix = 0; ix < nx; ++ix) push(grid.xs[ix], grid.ys[iy], grid.values[iy * nx + ix]);
  }
  return ds;
}

}  // namespace detail

namespace {

using detail::kNaN;

double passive_or_nan(double g) { return g > 0.0 ? analytic::passive_chi(g) : kNaN; }

Dataset drive_sweep(const SweepConfig& cfg) {
  Dataset ds;
  ds.meta = detail::config_meta(cfg);
  ds.columns = {"gamma1_plus", "gamma1_minus", "gamma2", "omega", "response", "mean_n", "sigma",
                "snr", "chi", "chi_error", "classical_response", "classical_chi",
                "three_level_response", "two_level_response", "chi_asymptotic",
                "asymptotic_formula", "regime", "n_levels", "residual", "tail_mass", "error"};
  const std::vector<double> omegas = cfg.range.values();
  auto params_at = [&](int i) { return cfg.params.with_omega(omegas[i]); };
  auto oracle = [&](const VdpParams& p) {
    const auto cl = analytic::classical_response({p.gamma1(), p.gamma2, p.omega});
    const double two = p.gamma1_plus == 0.0 && p.gamma1_minus > 0.0
                           ? analytic::two_level_response(p.gamma1_minus, p.omega)
                           : kNaN;
    const auto as = detail::asymptotic_chi(p);
    return std::vector<Cell>{cl.amplitude, detail::classical_chi(p),
                             analytic::three_level_response(p.gamma1_plus, p.gamma1_minus, p.gamma2, p.omega),
                             two, as.chi, as.formula, detail::regime_flags(p)};
  };
  auto make = [&](int i) {
    const VdpParams p = params_at(i);
    const Truncation trunc = detail::truncation_for(cfg, p);
    const SteadyStateResult s = solve_steady(p, trunc, cfg.tol);
    const ResponsePoint pt = response_point(s, p.omega);
    double chi = kNaN, chi_err = kNaN, residual = s.residual;
    if (cfg.chi) {
      const Susceptibility sus = susceptibility(p, p.omega, trunc, {cfg.tol, SolvePath::real_symmetric});
      chi = sus.chi;
      chi_err = sus.estimate_error;
      residual = std::max(residual, sus.residual);
    }
    std::vector<Cell> row{p.gamma1_plus, p.gamma1_minus, p.gamma2, p.omega, pt.response,
                          pt.mean_n, pt.sigma, pt.snr, chi, chi_err};
    for (auto& c : oracle(p)) row.push_back(std::move(c));
    row.insert(row.end(), {Cell{static_cast<long long>(s.n_levels)}, Cell{residual},
                           Cell{s.tail_mass}, Cell{std::string()}});
    return row;
  };
  auto fail = [&](int i, const std::string& msg) {
    const VdpParams p = params_at(i);
    std::vector<Cell> row{p.gamma1_plus, p.gamma1_minus, p.gamma2, p.omega};
    for (int k = 0; k < 6; ++k) row.push_back(kNaN);
    for (auto& c : oracle(p)) row.push_back(std::move(c));
    row.insert(row.end(), {Cell{0LL}, Cell{kNaN}, Cell{kNaN}, Cell{msg}});
    return row;
  };
  ds.rows = detail::evaluate_points(static_cast<int>(omegas.size()), cfg.workers, cfg.strict, make,
                                    fail, &ds.failures);
  return ds;
}

Dataset rate_sweep(const SweepConfig& cfg) {
  Dataset ds;
  ds.meta = detail::config_meta(cfg);
  ds.columns = {"gamma1_plus", "gamma1_minus", "gamma2", "omega", "Gamma1", "chi", "chi_error",
                "gain", "gain_asymptotic", "passive_chi", "classical_chi", "three_level_chi",
                "critical_chi", "critical_chi_small", "limitcycle_chi", "chi_asymptotic",
                "asymptotic_formula", "regime", "n_levels", "residual", "error"};
  const std::vector<double> values = cfg.range.values();
  auto params_at = [&](int i) {
    VdpParams p = cfg.params;
    const double v = values[i];
    if (cfg.sweep == "gamma1_plus") {
      p.gamma1_plus = v;
    } else if (cfg.sweep == "gamma1_minus") {
      p.gamma1_minus = v;
    } else {
      p.gamma1_plus = v;
      p.gamma1_minus = v;
    }
    return p;
  };
  auto oracle = [&](const VdpParams& p) {
    const auto as = detail::asymptotic_chi(p);
    return std::vector<Cell>{
        as.chi / passive_or_nan(p.gamma1_minus),
        passive_or_nan(p.gamma1_minus),
        detail::classical_chi(p),
        analytic::three_level_chi(p.gamma1_plus, p.gamma1_minus) / p.gamma2,
        analytic::critical_chi(p.Gamma1(), p.gamma2),
        analytic::critical_chi_small(p.Gamma1()),
        analytic::limitcycle_chi(p.gamma1_plus, p.gamma1_minus, p.gamma2),
        as.chi,
        as.formula,
        detail::regime_flags(p)};
  };
  auto make = [&](int i) {
    const VdpParams p = params_at(i);
    const Susceptibility sus = susceptibility(p, p.omega, detail::truncation_for(cfg, p),
                                              {cfg.tol, SolvePath::real_symmetric});
    const double passive = passive_or_nan(p.gamma1_minus);
    std::vector<Cell> row{p.gamma1_plus, p.gamma1_minus, p.gamma2, p.omega, p.Gamma1(),
                          sus.chi, sus.estimate_error, sus.chi / passive};
    for (auto& c : oracle(p)) row.push_back(std::move(c));
    row.insert(row.end(), {Cell{static_cast<long long>(sus.n_levels)}, Cell{sus.residual},
                           Cell{std::string()}});
    return row;
  };
  auto fail = [&](int i, const std::string& msg) {
    const VdpParams p = params_at(i);
    std::vector<Cell> row{p.gamma1_plus, p.gamma1_minus, p.gamma2, p.omega, p.Gamma1(),
                          kNaN, kNaN, kNaN};
    for (auto& c : oracle(p)) row.push_back(std::move(c));
    row.insert(row.end(), {Cell{0LL}, Cell{kNaN}, Cell{msg}});
    return row;
  };
  ds.rows = detail::evaluate_points(static_cast<int>(values.size()), cfg.workers, cfg.strict, make,
                                    fail, &ds.failures);
  return ds;
}

Dataset classical_sweep(const SweepConfig& cfg) {
  Dataset ds;
  ds.meta = detail::config_meta(cfg);
  const std::vector<double> values = cfg.range.values();
  if (cfg.sweep == "x") {
    ds.meta.push_back("f: stable root of x*f - f^3 + 1 = 0 with f(0) = 1");
    ds.columns = {"x", "f", "cubic_residual", "asymptote", "asymptote_formula", "asymptote_error"};
    for (double x : values) {
      const long double fl = analytic::classical_f(static_cast<long double>(x));
      const double f = analytic::classical_f(x);
      const long double xl = x;
      const double residual = static_cast<double>(std::abs(xl * fl - fl * fl * fl + 1.0L));
      double asym = kNaN;
      std::string formula;
      if (x > 1.0) {
        asym = std::sqrt(x) + 1.0 / (2.0 * x);
        formula = "sqrt(x)+1/(2x)";
      } else if (x < -1.0) {
        asym = 1.0 / std::abs(x);
        formula = "1/|x|";
      }
      ds.rows.push_back({x, f, residual, asym, formula, std::isnan(asym) ? kNaN : f - asym});
    }
    return ds;
  }
  ds.meta.push_back("alpha: (omega/gamma2)^(1/3) f(gamma1/(omega^(2/3) gamma2^(1/3)))");
  ds.columns = {"gamma1", "gamma2", "omega", "amplitude", "classical_chi", "zero_drive", "phase_free"};
  for (double w : values) {
    const VdpParams p = cfg.params.with_omega(w);
    const auto cl = analytic::classical_response({p.gamma1(), p.gamma2, w});
    ds.rows.push_back({p.gamma1(), p.gamma2, w, cl.amplitude, detail::classical_chi(p),
                       static_cast<long long>(cl.zero_drive), static_cast<long long>(cl.phase_free)});
  }
  return ds;
}

}  // namespace

Dataset run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  switch (cfg.mode) {
    case Mode::drive_sweep: return drive_sweep(cfg);
    case Mode::rate_sweep: return rate_sweep(cfg);
    case Mode::classical: return classical_sweep(cfg);
    default: throw ConfigError("run_sweep: mode " + detail::mode_name(cfg.mode) + " is not a sweep");
  }
}

WignerRun run_wigner(const SweepConfig& cfg) {
  validate(cfg);
  const VdpParams& p = cfg.params;
  const SteadyStateResult s = solve_steady(p, detail::truncation_for(cfg, p), cfg.tol);
  WignerRun run;
  run.grid = wigner_grid(s.rho, cfg.grid);
  Dataset& sm = run.summary;
  sm.meta = detail::config_meta(cfg);
  sm.columns = {"gamma1_plus", "gamma1_minus", "gamma2", "omega", "response", "mean_n",
                "grid_integral", "grid_center_re", "grid_center_im", "grid_second_moment",
                "classical_response", "r_max", "n_levels", "residual", "tail_mass"};
  const ResponsePoint pt = response_point(s, p.omega);
  const cplx com = run.grid.center_of_mass();
  const auto cl = analytic::classical_response({p.gamma1(), p.gamma2, p.omega});
  sm.rows.push_back({p.gamma1_plus, p.gamma1_minus, p.gamma2, p.omega, pt.response, pt.mean_n,
                     run.grid.integral(), com.real(), com.imag(), run.grid.second_moment(),
                     cl.amplitude, run.grid.r_max, static_cast<long long>(s.n_levels), s.residual,
                     s.tail_mass});
  return run;
}

void write_wigner_panel(const std::filesystem::path& path, const WignerGrid& grid,
                        const std::vector<std::string>& meta) {
  write_dataset(path, detail::grid_dataset(grid, meta, true), Format::csv);
}

}  // namespace qvdp::cli
