#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbq/experiments.hpp"

namespace hbq::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunManifest {
  nlohmann::json config;
  std::string version = kArtifactVersion;
  double runtime_seconds = 0.0;
  std::vector<std::filesystem::path> outputs;
  nlohmann::json conventions;
  bool empty = false;

  nlohmann::json to_json() const;
};

/// Fixed conventions recorded with every run.
nlohmann::json conventions_block(const ResultSet& rs);

/// CSV file name of a table: the primary table is <scenario>.csv, the
/// others <scenario>_<table>.csv.
std::string csv_name(const ResultSet& rs, const Table& table);

/// Writes one CSV per table (header row, 17 significant digits) and merges
/// this run into <out_dir>/manifest.json under runs.<scenario>.
RunManifest write_resultset(const ResultSet& rs, const std::filesystem::path& out_dir,
                            const nlohmann::json& config_echo = {}, double runtime_seconds = 0.0);

void write_csv(const Table& table, const std::filesystem::path& path);
Table read_csv(const std::filesystem::path& path);

}  // namespace hbq::cli
