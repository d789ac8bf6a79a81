#include "gossip/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

namespace gossip {

std::string_view to_string(LogBase base) noexcept {
  switch (base) {
    case LogBase::two: return "log2";
    case LogBase::natural: return "ln";
    case LogBase::ten: return "log10";
  }
  return "log";
}

FitResult fit_linear(std::span<const double> grid,
                     std::span<const double> values) {
  if (grid.size() != values.size()) throw FitError("grid and values differ in length");
  std::vector<double> distinct(grid.begin(), grid.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 3) throw FitError("fit needs at least three distinct grid points");
  for (double v : values) {
    if (!std::isfinite(v)) throw FitError("fit values must be finite");
  }
  const double n = static_cast<double>(grid.size());
  const double mx = std::accumulate(grid.begin(), grid.end(), 0.0) / n;
  const double my = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double dx = grid[i] - mx;
    const double dy = values[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  FitResult fit;
  fit.form = FitForm::linear;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = values[i] - (fit.slope * grid[i] + fit.intercept);
    sse += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
  fit.grid.assign(grid.begin(), grid.end());
  fit.values.assign(values.begin(), values.end());
  return fit;
}

std::vector<FitResult> fit_logarithmic(std::span<const double> grid,
                                       std::span<const double> values) {
  std::vector<FitResult> fits;
  for (LogBase base : {LogBase::two, LogBase::natural, LogBase::ten}) {
    std::vector<double> x;
    for (double g : grid) {
      if (!(g > 0.0)) throw FitError("logarithmic fit needs positive grid points");
      switch (base) {
        case LogBase::two: x.push_back(std::log2(g)); break;
        case LogBase::natural: x.push_back(std::log(g)); break;
        case LogBase::ten: x.push_back(std::log10(g)); break;
      }
    }
    FitResult fit = fit_linear(x, values);
    fit.form = FitForm::logarithmic;
    fit.base = base;
    fit.grid.assign(grid.begin(), grid.end());
    fits.push_back(std::move(fit));
  }
  return fits;
}

std::vector<FitResult> fit_scaling(std::span<const double> grid,
                                   std::span<const double> values,
                                   FitForm form) {
  if (form == FitForm::linear) return {fit_linear(grid, values)};
  return fit_logarithmic(grid, values);
}

const FitResult& best_fit(const std::vector<FitResult>& fits) {
  if (fits.empty()) throw FitError("no fits to choose from");
  // Ties keep the earliest base.
  return *std::max_element(fits.begin(), fits.end(),
                           [](const FitResult& a, const FitResult& b) {
                             return a.r_squared < b.r_squared;
                           });
}

std::vector<std::int64_t> default_scaling_grid() {
  return {10, 20, 30, 40, 50, 100, 1000, 10000, 100000};
}

std::vector<SearchMetrics> scaling_series(std::span<const std::int64_t> grid,
                                          const SearchConfig& base) {
  std::vector<SearchMetrics> out;
  for (std::int64_t n : grid) {
    SearchConfig config = base;
    config.num_nodes = n;
    out.push_back(blind_metrics(config));
  }
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> default_accuracy_pairs() {
  return {{1, 1}, {1, 3}, {3, 1}};
}

std::vector<std::int64_t> default_accuracy_nodes() {
  return {10, 20, 30, 40, 50};
}

std::vector<AccuracyCell> accuracy_table(
    std::span<const std::pair<std::int64_t, std::int64_t>> fanout_copies,
    std::span<const std::int64_t> nodes, const ExactOptions& exact,
    double epsilon) {
  std::vector<AccuracyCell> cells;
  for (const auto& [k, m] : fanout_copies) {
    for (std::int64_t n : nodes) {
      SearchConfig config;
      config.num_nodes = n;
      config.fanout = k;
      config.copies = m;
      config.epsilon = epsilon;
      const SearchMetrics approx = blind_metrics(config);
      // The baseline is evaluated to a much tighter tail than the model
      // under test.
      SearchConfig tight = config;
      tight.epsilon = std::min(epsilon, 1e-12);
      const SearchMetrics reference = exact_metrics(tight, exact);
      cells.push_back({k, m, n, relative_accuracy(reference, approx)});
    }
  }
  return cells;
}

std::string format_accuracy_table(const std::vector<AccuracyCell>& cells) {
  std::vector<std::int64_t> nodes;
  std::vector<std::pair<std::int64_t, std::int64_t>> rows;
  for (const auto& c : cells) {
    if (std::find(nodes.begin(), nodes.end(), c.num_nodes) == nodes.end())
      nodes.push_back(c.num_nodes);
    const std::pair<std::int64_t, std::int64_t> key{c.fanout, c.copies};
    if (std::find(rows.begin(), rows.end(), key) == rows.end()) rows.push_back(key);
  }
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  for (int block = 0; block < 2; ++block) {
    out << (block == 0 ? "Relative accuracy (%), mean number of rounds\n"
                       : "Relative accuracy (%), mean number of active nodes\n");
    out << std::setw(12) << "";
    for (auto n : nodes) out << std::setw(9) << ("N=" + std::to_string(n));
    out << '\n';
    for (const auto& [k, m] : rows) {
      out << std::setw(12)
          << ("k=" + std::to_string(k) + ", m=" + std::to_string(m));
      for (auto n : nodes) {
        for (const auto& c : cells) {
          if (c.fanout == k && c.copies == m && c.num_nodes == n) {
            const auto& metric = block == 0 ? c.report.rounds : c.report.active;
            out << std::setw(9) << metric.percent;
          }
        }
      }
      out << '\n';
    }
  }
  return out.str();
}

ModelRun make_run(const SearchConfig& config, Variant variant) {
  return {config, variant, BehaviorProfile::from_config(config)};
}

double relative_change(double baseline, double variant) {
  if (baseline == 0.0) throw DomainError("relative change against a zero baseline");
  return (variant - baseline) / baseline * 100.0;
}

SearchMetrics evaluate(const ModelRun& run, MetricSource source,
                       const ExperimentPlan& plan) {
  if (source == MetricSource::analytic) {
    return run.variant == Variant::blind ? blind_metrics(run.config)
                                         : smart_metrics(run.config);
  }
  const SimReport report =
      run_experiment(run.config, run.variant, run.profile, plan);
  return {report.rounds.mean, report.active.mean, ModelSource::simulation};
}

std::vector<ComparisonRow> compare_models(std::span<const ComparisonPair> pairs,
                                          MetricSource source,
                                          const ExperimentPlan& plan) {
  std::vector<ComparisonRow> rows;
  for (const auto& pair : pairs) {
    if (pair.baseline.config.num_nodes != pair.variant.config.num_nodes) {
      throw ConfigError("comparison '" + pair.label +
                        "' pairs runs with different N");
    }
    ComparisonRow row;
    row.label = pair.label;
    row.baseline = evaluate(pair.baseline, source, plan);
    row.variant = evaluate(pair.variant, source, plan);
    row.rounds_change =
        relative_change(row.baseline.mean_rounds, row.variant.mean_rounds);
    row.active_change =
        relative_change(row.baseline.mean_active, row.variant.mean_active);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ComparisonPair> standard_comparisons(std::int64_t num_nodes) {
  auto config = [num_nodes](std::int64_t k, std::int64_t m, double c, double s) {
    SearchConfig cfg;
    cfg.num_nodes = num_nodes;
    cfg.fanout = k;
    cfg.copies = m;
    cfg.cooperation = c;
    cfg.stifling = s;
    return cfg;
  };
  const auto blind = Variant::blind;
  const auto smart = Variant::smart;
  std::vector<ComparisonPair> pairs;
  pairs.push_back({"copies 1->3 (blind, c=1)", make_run(config(1, 1, 1, 0), blind),
                   make_run(config(1, 3, 1, 0), blind)});
  pairs.push_back({"fanout 1->3 (blind, c=1)", make_run(config(1, 1, 1, 0), blind),
                   make_run(config(3, 1, 1, 0), blind)});
  for (double c : {1.0, 0.5}) {
    for (auto [k, m] : {std::pair{1, 1}, std::pair{1, 3}, std::pair{3, 1}}) {
      std::ostringstream label;
      label << "smart vs blind (k=" << k << ", m=" << m << ", c=" << c << ")";
      pairs.push_back({label.str(), make_run(config(k, m, c, 0), blind),
                       make_run(config(k, m, c, 0), smart)});
    }
  }
  for (double s : {0.2, 0.5}) {
    std::ostringstream label;
    label << "stifler s=" << s << " vs plain c=" << 1.0 - s << " (blind)";
    pairs.push_back({label.str(), make_run(config(1, 1, 1.0 - s, 0), blind),
                     make_run(config(1, 1, 1.0, s), blind)});
  }
  pairs.push_back({"smart vs blind (stifler s=0.8)",
                   make_run(config(1, 1, 1, 0.8), blind),
                   make_run(config(1, 1, 1, 0.8), smart)});
  return pairs;
}

namespace {

template <typename F>
double seconds_per_call(F&& call, double min_seconds) {
  using clock = std::chrono::steady_clock;
  double best = 0.0;
  for (int batch = 0; batch < 3; ++batch) {
    std::int64_t calls = 0;
    const auto start = clock::now();
    double elapsed = 0.0;
    do {
      call();
      ++calls;
      elapsed = std::chrono::duration<double>(clock::now() - start).count();
    } while (elapsed < min_seconds);
    const double per_call = elapsed / static_cast<double>(calls);
    if (batch == 0 || per_call < best) best = per_call;
  }
  return best;
}

}  // namespace

BenchTable benchmark_complexity(std::span<const std::int64_t> nodes,
                                std::int64_t rounds,
                                double min_seconds_per_point) {
  BenchTable table;
  table.rounds = rounds;
  volatile double sink = 0.0;
  for (std::int64_t n : nodes) {
    SearchConfig config;
    config.num_nodes = n;
    BenchPoint point;
    point.num_nodes = n;
    point.approx_seconds = seconds_per_call(
        [&] { sink = sink + blind_round_pmf(config).pmf.residual; },
        min_seconds_per_point);
    ExactOptions options;
    options.arithmetic = Arithmetic::floating;
    options.size_budget = std::max<std::int64_t>(n, kDefaultExactBudget);
    point.exact_seconds = seconds_per_call(
        [&] { sink = sink + ExactBlindModel(config, options).find_by(rounds); },
        min_seconds_per_point);
    table.points.push_back(point);
  }
  if (table.points.size() >= 3) {
    std::vector<double> x, ya, ye;
    for (const auto& p : table.points) {
      x.push_back(std::log(static_cast<double>(p.num_nodes)));
      ya.push_back(std::log(p.approx_seconds));
      ye.push_back(std::log(p.exact_seconds));
    }
    table.approx_exponent = fit_linear(x, ya).slope;
    table.exact_exponent = fit_linear(x, ye).slope;
  }
  return table;
}

}  // namespace gossip
