#pragma once

// The pdm-lab subcommands. Each writes one or more CSV files into an output
// directory and returns the paths it wrote.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pdm/scenario.hpp"

namespace pdm::cli {

/// Shortest round-trip form with at most 17 significant digits, '.' decimal point.
std::string format_number(double value);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& provenance, const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(std::size_t value) { return cell(static_cast<long long>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
  void separator();
};

const std::vector<std::string>& subcommand_names();

/// Runs `name` on the scenario; throws std::invalid_argument for unknown names
/// and ConfigError for missing scenario keys.
std::vector<std::filesystem::path> run_subcommand(const std::string& name, const Scenario& scenario,
                                                  const std::filesystem::path& out_dir);

struct ManifestInfo {
  std::string subcommand;
  std::string config_path;
  std::vector<std::string> overrides;
  std::string resolved_scenario;
  std::string version;
  std::vector<std::filesystem::path> outputs;
};

void write_manifest(const std::filesystem::path& out_dir, const ManifestInfo& info);

}  // namespace pdm::cli
