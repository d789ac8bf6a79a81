#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gossip/config.hpp"
#include "gossip/core_math.hpp"
#include "gossip/simulator.hpp"

namespace gossip {

class FormatError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// One experiment cell. Analytic and exact cells leave the sampling fields
/// (standard errors, queries, seed) empty.
struct ExperimentRow {
  std::string model;    // analytic | exact | simulation
  std::string variant;  // blind | smart
  std::int64_t num_nodes = 0;
  std::int64_t fanout = 0;
  std::int64_t copies = 0;
  double cooperation = 1.0;
  double stifling = 0.0;
  double mean_rounds = 0.0;
  std::optional<double> stderr_rounds;
  double mean_active = 0.0;
  std::optional<double> stderr_active;
  std::optional<double> mean_queries;
  std::int64_t replications = 0;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ExperimentRow&, const ExperimentRow&) = default;
};

extern const std::vector<std::string> kCsvColumns;

ExperimentRow row_from_metrics(const SearchConfig& config, Variant variant,
                               const SearchMetrics& metrics);
ExperimentRow row_from_report(const SimReport& report);

/// Lexicographic order over (model, variant, N, k, m, c, s, seed).
void sort_rows(std::vector<ExperimentRow>& rows);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Header plus rows, in sorted order.
std::string write_csv(std::vector<ExperimentRow> rows);
std::vector<ExperimentRow> parse_csv(const std::string& text);

std::string write_json(std::vector<ExperimentRow> rows);
std::vector<ExperimentRow> parse_json(const std::string& text);

extern const std::string kToolVersion;

/// Everything needed to rerun a command: the subcommand, its full
/// configuration as key/value text, the seeds and the tool version.
struct Manifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> settings;
  std::vector<std::uint64_t> seeds;
  std::string rng_algorithm{kRngAlgorithm};
  std::string output_path;
  std::string output_format;

  std::string to_json() const;
};

/// Writes to a temporary sibling and renames it into place.
void write_file_atomically(const std::string& path, const std::string& text);

/// Manifest path for an output file: "<path>.manifest.json".
std::string manifest_path(const std::string& output_path);

}  // namespace gossip
