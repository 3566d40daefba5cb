// Sweep harness over the noise level and the csv/json/svg emitters.
#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tbq/optimize.hpp"

namespace tbq {

enum class OutputFormat { kCsv, kJson, kSvg };

/// Throws std::invalid_argument for anything but csv, json or svg.
OutputFormat parse_format(std::string_view name);

/// Column order of every emitted table.
inline constexpr std::array<std::string_view, 5> kSweepColumns = {
    "linear", "linear_delay", "quadratic", "envelope", "idrf"};

/// Maps a scenario name accepted on the command line to its column.
std::string_view column_for_scenario(std::string_view scenario);

struct SweepConfig {
  std::vector<double> sigma_n_values;
  double sigma_s = 1.0;
  double grid_step = 0.01;
  double grid_range = 3.0;
  std::vector<std::string> scenarios = {"linear", "delay", "quadratic", "envelope", "idrf"};
  std::string output_path;
  OutputFormat format = OutputFormat::kCsv;

  /// Throws std::invalid_argument on an empty or unsorted sigma_n list, unknown
  /// scenarios or non-positive grid settings.
  void validate() const;
};

struct ScenarioOutcome {
  double mse = 0.0;
  std::vector<double> params;
  std::size_t evaluations = 0;
  std::vector<std::string> notes;
};

struct SweepRow {
  double sigma_n = 0.0;
  std::map<std::string, ScenarioOutcome, std::less<>> results;  // keyed by column

  std::optional<double> value(std::string_view column) const;
};

using SweepTable = std::vector<SweepRow>;

/// One row per sigma_n, ascending. Rows are independent and may run in parallel.
SweepTable run_sweep(const SweepConfig& cfg);

std::string emit_csv(const SweepTable& table);
std::string emit_json(const SweepTable& table);
std::string emit_svg(const SweepTable& table);
/// Throws std::invalid_argument on an empty table.
std::string emit(const SweepTable& table, OutputFormat format);

/// Writes emit(table, format) to `path`; throws std::runtime_error naming the path on failure.
void write_table(const SweepTable& table, OutputFormat format, const std::string& path);

/// Inverse of emit_json for the numeric fields.
SweepTable parse_table_json(const std::string& text);

std::string report_to_json(const DistortionReport& report, int indent = 2);

/// Merges a JSON config document into `cfg`; keys mirror the sweep flags.
void apply_config_json(const std::string& text, SweepConfig& cfg);

}  // namespace tbq
