#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gossip/analytic_blind.hpp"
#include "gossip/analytic_smart.hpp"
#include "gossip/exact_blind.hpp"
#include "gossip/simulator.hpp"

namespace gossip {

class FitError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

enum class FitForm { logarithmic, linear };
enum class LogBase { two, natural, ten };

std::string_view to_string(LogBase base) noexcept;

/// y = slope * x + intercept, where x is N (linear) or log_b N.
struct FitResult {
  FitForm form = FitForm::linear;
  LogBase base = LogBase::natural;  // meaningful for logarithmic fits
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> grid;
  std::vector<double> values;
};

/// Ordinary least squares. Needs at least three distinct grid points.
FitResult fit_linear(std::span<const double> grid,
                     std::span<const double> values);

/// One fit per logarithm base (2, e, 10).
std::vector<FitResult> fit_logarithmic(std::span<const double> grid,
                                       std::span<const double> values);

std::vector<FitResult> fit_scaling(std::span<const double> grid,
                                   std::span<const double> values,
                                   FitForm form);

const FitResult& best_fit(const std::vector<FitResult>& fits);

/// Default N grid for scaling sweeps: 10..50 and 10^2..10^5.
std::vector<std::int64_t> default_scaling_grid();

/// Approximate blind metrics for each N of the grid.
std::vector<SearchMetrics> scaling_series(std::span<const std::int64_t> grid,
                                          const SearchConfig& base);

struct AccuracyCell {
  std::int64_t fanout = 1;
  std::int64_t copies = 1;
  std::int64_t num_nodes = 10;
  AccuracyReport report;
};

std::vector<std::pair<std::int64_t, std::int64_t>> default_accuracy_pairs();
std::vector<std::int64_t> default_accuracy_nodes();

/// Exact vs approximate blind search at c = 1 for every (k, m) and N.
std::vector<AccuracyCell> accuracy_table(
    std::span<const std::pair<std::int64_t, std::int64_t>> fanout_copies,
    std::span<const std::int64_t> nodes,
    const ExactOptions& exact = {Arithmetic::rational, kDefaultExactBudget,
                                 ExactBaseline::reference_table()},
    double epsilon = kDefaultEpsilon);

/// Two blocks (rounds, active) with one row per (k, m), one column per N.
std::string format_accuracy_table(const std::vector<AccuracyCell>& cells);

struct ModelRun {
  SearchConfig config;
  Variant variant = Variant::blind;
  BehaviorProfile profile;
};

ModelRun make_run(const SearchConfig& config, Variant variant);

struct ComparisonPair {
  std::string label;
  ModelRun baseline;
  ModelRun variant;
};

struct ComparisonRow {
  std::string label;
  SearchMetrics baseline;
  SearchMetrics variant;
  double rounds_change = 0.0;  // percent
  double active_change = 0.0;  // percent
};

enum class MetricSource { simulation, analytic };

double relative_change(double baseline, double variant);

/// Relative changes for each pair. Both sides of a pair must share N.
/// Simulation runs use the same plan (and master seed) for every run.
std::vector<ComparisonRow> compare_models(
    std::span<const ComparisonPair> pairs, MetricSource source,
    const ExperimentPlan& plan = {});

/// Copies 1->3, fanout 1->3, smart vs blind, stiflers vs plain
/// non-cooperation with s = 1 - c, smart vs blind under stifling.
std::vector<ComparisonPair> standard_comparisons(std::int64_t num_nodes);

SearchMetrics evaluate(const ModelRun& run, MetricSource source,
                       const ExperimentPlan& plan);

struct BenchPoint {
  std::int64_t num_nodes = 0;
  double approx_seconds = 0.0;
  double exact_seconds = 0.0;
};

struct BenchTable {
  std::int64_t rounds = 0;
  std::vector<BenchPoint> points;
  double approx_exponent = 0.0;  // log-log slope of time against N
  double exact_exponent = 0.0;
};

/// Times the approximate pmf and the exact B(rounds) (floating rows, matrix
/// power by repeated squaring) over the grid.
BenchTable benchmark_complexity(std::span<const std::int64_t> nodes,
                                std::int64_t rounds,
                                double min_seconds_per_point = 0.05);

}  // namespace gossip
