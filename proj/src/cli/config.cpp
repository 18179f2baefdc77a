#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qvdp/errors.hpp"
#include "qvdp/sweep.hpp"

namespace qvdp::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kKeys = {
    "mode",    "gamma1_plus", "gamma1_minus", "gamma2",  "omega",    "sweep",    "start",
    "stop",    "count",       "spacing",      "n_levels", "tail_tol", "n_max",    "tol",
    "chi",     "grid",        "r_max",        "n_radii", "n_angles", "n_points", "probe_levels",
    "preset",  "output",      "format",       "workers", "strict"};

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
  throw ConfigError("config field '" + key + "': " + what);
}

double get_number(const json& doc, const std::string& key, double fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number()) field_error(key, "expected a number");
  return it->get<double>();
}

int get_int(const json& doc, const std::string& key, int fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_number_integer()) field_error(key, "expected an integer");
  const auto v = it->get<long long>();
  if (v < -2147483647LL || v > 2147483647LL) field_error(key, "integer out of range");
  return static_cast<int>(v);
}

bool get_bool(const json& doc, const std::string& key, bool fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_boolean()) field_error(key, "expected true or false");
  return it->get<bool>();
}

std::string get_string(const json& doc, const std::string& key, const std::string& fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_string()) field_error(key, "expected a string");
  return it->get<std::string>();
}

int line_of(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

Mode parse_mode(const std::string& s) {
  if (s == "drive-sweep") return Mode::drive_sweep;
  if (s == "rate-sweep") return Mode::rate_sweep;
  if (s == "wigner") return Mode::wigner;
  if (s == "classical") return Mode::classical;
  if (s == "figure-preset") return Mode::figure_preset;
  field_error("mode", "unknown mode '" + s +
                          "' (drive-sweep, rate-sweep, wigner, classical, figure-preset)");
}

}  // namespace

std::vector<double> Range::values() const {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = start;
    return v;
  }
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    v[i] = spacing == Spacing::log ? start * std::pow(stop / start, t) : start + (stop - start) * t;
  }
  v.back() = stop;
  return v;
}

SweepConfig parse_config(const std::string& text, std::optional<Mode> implied) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error at line " + std::to_string(line_of(text, e.byte)) +
                      ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : doc.items()) {
    if (!kKeys.count(item.key())) throw ConfigError("config field '" + item.key() + "': unknown key");
    if (item.value().is_object() || item.value().is_array()) {
      field_error(item.key(), "nested values are not allowed");
    }
  }

  SweepConfig c;
  if (doc.contains("mode")) {
    c.mode = parse_mode(get_string(doc, "mode", ""));
    if (implied && c.mode != *implied) field_error("mode", "does not match the subcommand");
  } else if (implied) {
    c.mode = *implied;
  } else {
    field_error("mode", "required");
  }

  c.params.gamma1_plus = get_number(doc, "gamma1_plus", 0.0);
  c.params.gamma1_minus = get_number(doc, "gamma1_minus", 0.0);
  c.params.gamma2 = get_number(doc, "gamma2", 1.0);
  c.params.omega = get_number(doc, "omega", 0.0);

  const std::string default_sweep =
      c.mode == Mode::classical ? "x" : c.mode == Mode::rate_sweep ? "gamma1_minus" : "omega";
  c.sweep = get_string(doc, "sweep", default_sweep);
  c.range.start = get_number(doc, "start", c.params.omega);
  c.range.stop = get_number(doc, "stop", c.range.start);
  c.range.count = get_int(doc, "count", 1);
  const std::string spacing = get_string(doc, "spacing", "linear");
  if (spacing == "linear") {
    c.range.spacing = Spacing::linear;
  } else if (spacing == "log") {
    c.range.spacing = Spacing::log;
  } else {
    field_error("spacing", "expected 'linear' or 'log'");
  }

  c.n_levels = get_int(doc, "n_levels", 0);
  c.tail_tol = get_number(doc, "tail_tol", 1e-10);
  c.n_max = get_int(doc, "n_max", 400);
  c.tol = get_number(doc, "tol", 1e-9);
  c.chi = get_bool(doc, "chi", true);

  const std::string grid = get_string(doc, "grid", "polar");
  if (grid == "polar") {
    c.grid.kind = GridKind::polar;
  } else if (grid == "cartesian") {
    c.grid.kind = GridKind::cartesian;
  } else {
    field_error("grid", "expected 'polar' or 'cartesian'");
  }
  c.grid.r_max = get_number(doc, "r_max", 0.0);
  c.grid.n_radii = get_int(doc, "n_radii", c.grid.n_radii);
  c.grid.n_angles = get_int(doc, "n_angles", c.grid.n_angles);
  c.grid.n_points = get_int(doc, "n_points", c.grid.n_points);
  c.grid.probe_levels = get_int(doc, "probe_levels", 0);

  c.preset = get_string(doc, "preset", "");
  c.output = get_string(doc, "output", "");
  const std::string format = get_string(doc, "format", "csv");
  if (format == "csv") {
    c.format = Format::csv;
  } else if (format == "json") {
    c.format = Format::json;
  } else {
    field_error("format", "expected 'csv' or 'json'");
  }
  c.workers = get_int(doc, "workers", 1);
  c.strict = get_bool(doc, "strict", false);

  validate(c);
  return c;
}

SweepConfig load_config(const std::filesystem::path& path, std::optional<Mode> implied) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), implied);
}

void validate(const SweepConfig& c) {
  auto finite = [](double v) { return std::isfinite(v); };
  const VdpParams& p = c.params;
  if (!finite(p.gamma1_plus) || p.gamma1_plus < 0.0) field_error("gamma1_plus", "must be >= 0");
  if (!finite(p.gamma1_minus) || p.gamma1_minus < 0.0) field_error("gamma1_minus", "must be >= 0");
  if (!finite(p.gamma2) || p.gamma2 <= 0.0) field_error("gamma2", "must be > 0");
  if (!finite(p.omega)) field_error("omega", "must be finite");

  const bool swept = c.mode == Mode::drive_sweep || c.mode == Mode::rate_sweep ||
                     c.mode == Mode::classical;
  if (swept) {
    const Range& r = c.range;
    if (r.count < 1) field_error("count", "range is empty (count must be >= 1)");
    if (!finite(r.start)) field_error("start", "must be finite");
    if (!finite(r.stop)) field_error("stop", "must be finite");
    if (r.count > 1 && r.start == r.stop) field_error("stop", "range is empty (start == stop)");
    if (r.spacing == Spacing::log && (r.start <= 0.0 || r.stop <= 0.0)) {
      field_error(r.start <= 0.0 ? "start" : "stop", "log range requires positive endpoints");
    }
    const std::string& s = c.sweep;
    if (c.mode == Mode::drive_sweep && s != "omega") {
      field_error("sweep", "drive-sweep sweeps 'omega'");
    }
    if (c.mode == Mode::rate_sweep && s != "gamma1_plus" && s != "gamma1_minus" && s != "Gamma1") {
      field_error("sweep", "rate-sweep sweeps 'gamma1_plus', 'gamma1_minus' or 'Gamma1'");
    }
    if (c.mode == Mode::classical && s != "x" && s != "omega") {
      field_error("sweep", "classical sweeps 'x' or 'omega'");
    }
    const double lo = std::min(r.start, r.stop);
    if (c.mode == Mode::drive_sweep && lo < 0.0) field_error("start", "drive must be >= 0");
    if (c.mode == Mode::rate_sweep && lo < 0.0) field_error("start", "rates must be >= 0");
    if (c.mode == Mode::rate_sweep && (p.omega < 0.0)) field_error("omega", "must be >= 0");
  }
  if (c.mode == Mode::wigner && p.omega < 0.0) field_error("omega", "must be >= 0");
  if (c.mode == Mode::figure_preset) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), c.preset) == names.end()) {
      field_error("preset", "unknown preset '" + c.preset + "'");
    }
  }

  if (c.n_levels != 0 && c.n_levels < 3) field_error("n_levels", "must be 0 (automatic) or >= 3");
  if (!(c.tail_tol > 0.0)) field_error("tail_tol", "must be > 0");
  if (c.n_max < 3) field_error("n_max", "must be >= 3");
  if (c.n_levels > c.n_max) field_error("n_levels", "exceeds n_max");
  if (!(c.tol > 0.0)) field_error("tol", "must be > 0");
  if (c.grid.r_max < 0.0 || !finite(c.grid.r_max)) field_error("r_max", "must be >= 0");
  if (c.grid.n_radii < 1) field_error("n_radii", "must be >= 1");
  if (c.grid.n_angles < 1) field_error("n_angles", "must be >= 1");
  if (c.grid.n_points < 2) field_error("n_points", "must be >= 2");
  if (c.grid.probe_levels < 0) field_error("probe_levels", "must be >= 0");
  if (c.workers < 1) field_error("workers", "must be >= 1");
}

}  // namespace qvdp::cli
