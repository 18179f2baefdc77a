#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "qvdp/errors.hpp"
#include "qvdp/sweep.hpp"
#include "rows.hpp"

namespace qvdp::cli {

namespace {

namespace fs = std::filesystem;

struct Flags {
  int workers = 0;
  bool strict = false;
  std::string format;
  std::string out;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--workers", f.workers, "Concurrent sweep points (default: config or 1)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--strict", f.strict, "Abort on the first failing point");
  sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

void apply(SweepConfig& c, const Flags& f) {
  if (f.workers > 0) c.workers = f.workers;
  if (f.strict) c.strict = true;
  if (!f.format.empty()) c.format = f.format == "json" ? Format::json : Format::csv;
}

std::string ext(Format f) { return f == Format::json ? ".json" : ".csv"; }

fs::path output_path(const SweepConfig& c, const Flags& f, const std::string& stem) {
  if (!f.out.empty()) return f.out;
  if (!c.output.empty()) return c.output;
  return default_output_dir() / (stem + ext(c.format));
}

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  fs::path p = path;
  const std::string e = p.extension().string();
  p.replace_filename(p.stem().string() + suffix + e);
  return p;
}

int report(const fs::path& path, const Dataset& ds) {
  std::fprintf(stderr, "wrote %s (%zu rows, %d failed)\n", path.string().c_str(), ds.rows.size(),
               ds.failures);
  return ds.failures > 0 ? 1 : 0;
}

int run_config(const SweepConfig& c, const Flags& f) {
  switch (c.mode) {
    case Mode::drive_sweep:
    case Mode::rate_sweep:
    case Mode::classical: {
      const Dataset ds = run_sweep(c);
      const fs::path path = output_path(c, f, detail::mode_name(c.mode));
      write_dataset(path, ds, c.format);
      return report(path, ds);
    }
    case Mode::wigner: {
      const WignerRun run = run_wigner(c);
      const fs::path path = output_path(c, f, "wigner");
      const Dataset grid = detail::grid_dataset(run.grid, detail::config_meta(c), false);
      write_dataset(path, grid, c.format);
      report(path, grid);
      const fs::path summary = with_suffix(path, "_summary");
      write_dataset(summary, run.summary, c.format);
      return report(summary, run.summary);
    }
    case Mode::figure_preset: {
      PresetOptions opt;
      opt.workers = c.workers;
      opt.strict = c.strict;
      opt.format = c.format;
      const fs::path dir = !f.out.empty() ? fs::path(f.out)
                           : !c.output.empty() ? fs::path(c.output)
                                               : default_output_dir("figures");
      const PresetResult r = figure_preset(c.preset, dir, opt);
      for (const auto& p : r.files) std::fprintf(stderr, "wrote %s\n", p.string().c_str());
      return r.failures > 0 ? 1 : 0;
    }
  }
  return 2;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Driven quantum van der Pol oscillator: steady states, response and Wigner maps"};
  app.require_subcommand(1);

  Flags sweep_f, wigner_f, classical_f, figure_f;
  std::string sweep_cfg, wigner_cfg, classical_cfg, figure_name;
  bool full = false;

  auto* sweep = app.add_subcommand("sweep", "Run a configuration file (any mode)");
  sweep->add_option("config", sweep_cfg, "JSON configuration")->required();
  sweep->add_option("--out", sweep_f.out, "Output file (or directory for figure-preset)");
  add_common(sweep, sweep_f);

  auto* wigner = app.add_subcommand("wigner", "Steady-state Wigner grid for a configuration");
  wigner->add_option("config", wigner_cfg, "JSON configuration")->required();
  wigner->add_option("--out", wigner_f.out, "Output file");
  add_common(wigner, wigner_f);

  auto* classical = app.add_subcommand("classical", "Classical response sweep");
  classical->add_option("config", classical_cfg, "JSON configuration")->required();
  classical->add_option("--out", classical_f.out, "Output file");
  add_common(classical, classical_f);

  auto* figure = app.add_subcommand("figure", "Write the datasets behind one figure");
  figure->add_option("name", figure_name, "Preset name")
      ->required()
      ->check(CLI::IsMember(preset_names()));
  figure->add_option("--out", figure_f.out, "Output directory (default: $QVDP_OUTPUT_DIR or ./figures)");
  figure->add_flag("--full", full, "figS5 at 60 x 60 instead of 25 x 25");
  add_common(figure, figure_f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*figure) {
      PresetOptions opt;
      opt.workers = figure_f.workers > 0 ? figure_f.workers : 1;
      opt.strict = figure_f.strict;
      opt.full_resolution = full;
      opt.format = figure_f.format == "json" ? Format::json : Format::csv;
      const fs::path dir = figure_f.out.empty() ? default_output_dir("figures") : fs::path(figure_f.out);
      const PresetResult r = figure_preset(figure_name, dir, opt);
      for (const auto& p : r.files) std::fprintf(stderr, "wrote %s\n", p.string().c_str());
      return r.failures > 0 ? 1 : 0;
    }
    if (*sweep) {
      SweepConfig c = load_config(sweep_cfg);
      apply(c, sweep_f);
      return run_config(c, sweep_f);
    }
    if (*wigner) {
      SweepConfig c = load_config(wigner_cfg, Mode::wigner);
      apply(c, wigner_f);
      return run_config(c, wigner_f);
    }
    SweepConfig c = load_config(classical_cfg, Mode::classical);
    apply(c, classical_f);
    return run_config(c, classical_f);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const detail::PointError& e) {
    std::fprintf(stderr, "error (strict): %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace qvdp::cli
