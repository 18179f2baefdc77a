#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "qvdp/errors.hpp"
#include "qvdp/sweep.hpp"

namespace qvdp::cli {

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += (ch == '\n' || ch == '\r') ? ' ' : ch;
  }
  return out + "\"";
}

struct CsvCell {
  std::string operator()(double v) const { return fmt(v); }
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(const std::string& s) const { return csv_quote(s); }
};

struct JsonCell {
  std::string operator()(double v) const { return std::isfinite(v) ? fmt(v) : "null"; }
  std::string operator()(long long v) const { return std::to_string(v); }
  std::string operator()(const std::string& s) const { return nlohmann::json(s).dump(); }
};

}  // namespace

void write_csv(std::ostream& os, const Dataset& ds) {
  for (const auto& m : ds.meta) os << "# " << m << '\n';
  for (std::size_t c = 0; c < ds.columns.size(); ++c) os << (c ? "," : "") << ds.columns[c];
  os << '\n';
  for (const auto& row : ds.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << std::visit(CsvCell{}, row[c]);
    os << '\n';
  }
}

void write_json(std::ostream& os, const Dataset& ds) {
  using nlohmann::json;
  os << "{\n  \"meta\": [";
  for (std::size_t i = 0; i < ds.meta.size(); ++i) os << (i ? ", " : "") << json(ds.meta[i]).dump();
  os << "],\n  \"columns\": [";
  for (std::size_t i = 0; i < ds.columns.size(); ++i) {
    os << (i ? ", " : "") << json(ds.columns[i]).dump();
  }
  os << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < ds.rows.size(); ++r) {
    os << (r ? ",\n    [" : "\n    [");
    const auto& row = ds.rows[r];
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? ", " : "") << std::visit(JsonCell{}, row[c]);
    os << ']';
  }
  os << (ds.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void write_dataset(const std::filesystem::path& path, const Dataset& ds, Format format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  if (format == Format::json) {
    write_json(out, ds);
  } else {
    write_csv(out, ds);
  }
  if (!out) throw Error("write failed for " + path.string());
}

std::filesystem::path default_output_dir(const std::filesystem::path& fallback) {
  const char* env = std::getenv("QVDP_OUTPUT_DIR");
  if (env && *env) return env;
  return fallback;
}

}  // namespace qvdp::cli
