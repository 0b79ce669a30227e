#include "hbq_cli/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hbq/errors.hpp"

namespace hbq::cli {

using nlohmann::json;

namespace fs = std::filesystem;

json RunManifest::to_json() const {
  json files = json::array();
  for (const auto& p : outputs) files.push_back(p.filename().string());
  return {{"config", config},           {"artifact_version", version},
          {"runtime_seconds", runtime_seconds}, {"outputs", files},
          {"conventions", conventions}, {"empty", empty}};
}

json conventions_block(const ResultSet& rs) {
  json c = {
      {"transform_normalization", "forward coeff(k) = (1/N) sum_j f_j exp(-i k X_j); inverse unnormalized"},
      {"wavenumbers", "k in [-N/2, N/2-1], physical wavenumber pi*k/L"},
      {"odd_derivative_nyquist", "k = -N/2 mode dropped"},
      {"antiderivative_zero_mode", 0},
      {"I1_monitor", "2L*mean(u)"},
      {"quadrature", "(2L/N) sum_j"},
      {"float_format", "%.17g"},
  };
  if (const auto* t = rs.find_metadata("blowup_threshold")) c["blowup_threshold"] = std::stod(*t);
  else c["blowup_threshold"] = 100.0;
  if (const auto* d = rs.find_metadata("dealiasing")) c["dealiasing"] = *d;
  return c;
}

std::string csv_name(const ResultSet& rs, const Table& table) {
  if (table.name == rs.scenario) return rs.scenario + ".csv";
  return rs.scenario + "_" + table.name + ".csv";
}

void write_csv(const Table& table, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  out.precision(17);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
  if (!out) throw IoError("I/O failure writing " + path.string());
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  Table t;
  t.name = path.stem().string();
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV " + path.string());
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) t.columns.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw InvalidArgument("bad number '" + cell + "' in " + path.string());
      row.push_back(v);
    }
    t.add_row(std::move(row));
  }
  return t;
}

RunManifest write_resultset(const ResultSet& rs, const fs::path& out_dir, const json& config_echo,
                            double runtime_seconds) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  RunManifest m;
  m.config = config_echo;
  m.runtime_seconds = runtime_seconds;
  m.conventions = conventions_block(rs);
  m.empty = rs.empty();
  for (const auto& t : rs.tables) {
    const fs::path p = out_dir / csv_name(rs, t);
    write_csv(t, p);
    m.outputs.push_back(p);
  }
  if (rs.tables.empty()) {
    // Header-only placeholder so every run leaves a primary CSV behind.
    const fs::path p = out_dir / (rs.scenario + ".csv");
    write_csv(Table{rs.scenario, {}, {}}, p);
    m.outputs.push_back(p);
  }

  const fs::path manifest_path = out_dir / "manifest.json";
  json manifest = json::object();
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    manifest = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (manifest.is_discarded() || !manifest.is_object()) manifest = json::object();
  }
  manifest["artifact_version"] = kArtifactVersion;
  manifest["conventions"] = m.conventions;
  json entry = m.to_json();
  json meta = json::object();
  for (const auto& [k, v] : rs.metadata) meta[k] = v;
  entry["metadata"] = meta;
  manifest["runs"][rs.scenario] = entry;

  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("I/O failure writing " + manifest_path.string());
  return m;
}

}  // namespace hbq::cli
