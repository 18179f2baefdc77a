#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qvdp/model.hpp"
#include "qvdp/wigner.hpp"

namespace qvdp::cli {

// Raised for malformed or invalid run configurations (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { drive_sweep, rate_sweep, wigner, classical, figure_preset };
enum class Spacing { linear, log };
enum class Format { csv, json };

struct Range {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  Spacing spacing = Spacing::linear;

  std::vector<double> values() const;
};

struct SweepConfig {
  Mode mode = Mode::drive_sweep;
  VdpParams params;
  // Swept quantity: omega, gamma1_plus, gamma1_minus, Gamma1 (both one-body
  // rates together), or x (classical mode only).
  std::string sweep = "omega";
  Range range;
  int n_levels = 0;  // 0 selects Truncation::automatic per point
  double tail_tol = 1e-10;
  int n_max = 400;
  double tol = 1e-9;
  bool chi = true;  // drive-sweep: compute the susceptibility at each point
  WignerGridSpec grid;
  std::string preset;  // figure-preset mode
  std::string output;  // empty: <QVDP_OUTPUT_DIR or .>/<mode>.<ext>
  Format format = Format::csv;
  int workers = 1;
  bool strict = false;
};

/// Strict parse of a flat JSON object. Unknown keys, wrong types and invalid
/// values raise ConfigError naming the line (syntax errors) or field. With
/// `implied` set, a missing "mode" defaults to it and a different one is rejected.
SweepConfig parse_config(const std::string& text, std::optional<Mode> implied = std::nullopt);
SweepConfig load_config(const std::filesystem::path& path,
                        std::optional<Mode> implied = std::nullopt);
void validate(const SweepConfig& cfg);

using Cell = std::variant<double, long long, std::string>;

// Column-ordered table with '#' metadata lines; the unit every mode emits.
struct Dataset {
  std::vector<std::string> meta;  // "key: value" lines, written in order
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int failures = 0;  // rows whose error column is non-empty
};

/// 17 significant digits, fixed column order, no timestamps.
void write_csv(std::ostream& os, const Dataset& ds);
void write_json(std::ostream& os, const Dataset& ds);
void write_dataset(const std::filesystem::path& path, const Dataset& ds, Format format);

/// Default output directory: $QVDP_OUTPUT_DIR, else the given fallback.
std::filesystem::path default_output_dir(const std::filesystem::path& fallback = ".");

/// Executes a drive-, rate- or classical sweep. Rows follow parameter order
/// for any worker count. Per-point failures fill the error column, or throw
/// in strict mode.
Dataset run_sweep(const SweepConfig& cfg);

/// Steady state at cfg.params sampled on cfg.grid, plus a summary dataset.
struct WignerRun {
  WignerGrid grid;
  Dataset summary;
};
WignerRun run_wigner(const SweepConfig& cfg);

/// Writes the dataset(s) for one figure into out_dir and returns the paths.
/// Names: fig1 fig2 fig3 fig4 fig5 figS1 figS2 figS4 figS5.
struct PresetOptions {
  int workers = 1;
  bool strict = false;
  bool full_resolution = false;  // figS5: 60x60 instead of 25x25
  Format format = Format::csv;
};
struct PresetResult {
  std::vector<std::filesystem::path> files;
  int failures = 0;
};
PresetResult figure_preset(const std::string& name, const std::filesystem::path& out_dir,
                           const PresetOptions& opt = {});
const std::vector<std::string>& preset_names();

/// Wigner CSV variant used by the figure presets: adds W / max|W| per panel.
void write_wigner_panel(const std::filesystem::path& path, const WignerGrid& grid,
                        const std::vector<std::string>& meta);

/// Full command-line entry point; returns the process exit code
/// (0 ok, 1 per-point failures, 2 configuration error).
int run_cli(int argc, char** argv);

}  // namespace qvdp::cli
