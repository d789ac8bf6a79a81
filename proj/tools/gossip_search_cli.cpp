#include <CLI11.hpp>

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gossip/analysis.hpp"
#include "gossip/analytic_blind.hpp"
#include "gossip/analytic_smart.hpp"
#include "gossip/csv.hpp"
#include "gossip/errors.hpp"
#include "gossip/exact_blind.hpp"
#include "gossip/simulator.hpp"

namespace {

using namespace gossip;

struct Options {
  SearchConfig config;
  std::string variant = "blind";
  std::int64_t instances = 100;
  std::int64_t runs = 100;
  std::uint64_t seed = 1;
  bool decide_once = false;
  std::string arithmetic = "rational";
  std::int64_t budget = kDefaultExactBudget;
  bool reference_baseline = false;
  std::string source = "simulation";
  std::vector<std::int64_t> grid;
  std::int64_t rounds = 64;
  double min_seconds = 0.05;
  std::string out;
  std::string format = "csv";
};

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--nodes", o.config.num_nodes, "Number of nodes N, initiator included")
      ->capture_default_str();
  cmd->add_option("--fanout", o.config.fanout, "Queries per active node per round (k)")
      ->capture_default_str();
  cmd->add_option("--copies", o.config.copies, "File copies m")->capture_default_str();
  cmd->add_option("--coop", o.config.cooperation, "Cooperation probability c")
      ->capture_default_str();
  cmd->add_option("--stifle", o.config.stifling, "Stifling probability s")
      ->capture_default_str();
  cmd->add_option("--epsilon", o.config.epsilon, "Tail truncation threshold")
      ->capture_default_str();
  cmd->add_option("--round-cap", o.config.round_cap, "Hard limit on evaluated rounds")
      ->capture_default_str();
}

void add_sampling_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--instances", o.instances, "Random file placements")
      ->capture_default_str();
  cmd->add_option("--runs", o.runs, "Searches per placement")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_flag("--decide-once", o.decide_once,
                "A node that declines to cooperate never joins later");
}

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Output file (stdout when omitted)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_exact_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--arithmetic", o.arithmetic, "Transition row arithmetic")
      ->check(CLI::IsMember({"rational", "floating"}))
      ->capture_default_str();
  cmd->add_option("--budget", o.budget, "Largest N accepted by the matrix models")
      ->capture_default_str();
}

Arithmetic arithmetic_of(const Options& o) {
  return o.arithmetic == "floating" ? Arithmetic::floating : Arithmetic::rational;
}

ExperimentPlan plan_of(const Options& o) {
  if (o.instances < 1 || o.runs < 1) {
    throw ConfigError("--instances and --runs must be at least 1");
  }
  return {o.instances, o.runs, o.seed};
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::vector<std::pair<std::string, std::string>> config_settings(const Options& o) {
  const auto& c = o.config;
  return {{"nodes", std::to_string(c.num_nodes)},
          {"fanout", std::to_string(c.fanout)},
          {"copies", std::to_string(c.copies)},
          {"coop", fmt(c.cooperation)},
          {"stifle", fmt(c.stifling)},
          {"epsilon", fmt(c.epsilon)},
          {"round_cap", std::to_string(c.round_cap)}};
}

std::vector<std::pair<std::string, std::string>> sampling_settings(const Options& o) {
  return {{"variant", o.variant},
          {"instances", std::to_string(o.instances)},
          {"runs", std::to_string(o.runs)},
          {"seed", std::to_string(o.seed)},
          {"decide_once", o.decide_once ? "true" : "false"}};
}

void emit(const std::string& command, const Options& o, const std::string& text,
          std::vector<std::pair<std::string, std::string>> settings,
          std::vector<std::uint64_t> seeds) {
  Manifest manifest;
  manifest.command = command;
  manifest.settings = std::move(settings);
  manifest.seeds = std::move(seeds);
  manifest.output_path = o.out.empty() ? "-" : o.out;
  manifest.output_format = o.format;
  if (o.out.empty()) {
    std::cout << text;
    std::cerr << manifest.to_json();
  } else {
    write_file_atomically(o.out, text);
    write_file_atomically(manifest_path(o.out), manifest.to_json());
  }
}

std::string render(std::vector<ExperimentRow> rows, const Options& o) {
  sort_rows(rows);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return o.format == "json" ? write_json(rows) : write_csv(rows);
}

void cmd_analytic_blind(const Options& o) {
  o.config.validate();
  const SearchMetrics m = blind_metrics(o.config);
  emit("analytic-blind", o, render({row_from_metrics(o.config, Variant::blind, m)}, o),
       config_settings(o), {});
}

void cmd_analytic_smart(const Options& o) {
  o.config.validate();
  const SearchMetrics m =
      smart_metrics(o.config, SmartOptions{arithmetic_of(o), o.budget});
  auto settings = config_settings(o);
  settings.emplace_back("arithmetic", o.arithmetic);
  settings.emplace_back("budget", std::to_string(o.budget));
  emit("analytic-smart", o, render({row_from_metrics(o.config, Variant::smart, m)}, o),
       settings, {});
}

void cmd_exact_blind(const Options& o) {
  o.config.validate();
  ExactOptions options;
  options.arithmetic = arithmetic_of(o);
  options.size_budget = o.budget;
  if (o.reference_baseline) options.baseline = ExactBaseline::reference_table();
  const SearchMetrics m = exact_metrics(o.config, options);
  auto settings = config_settings(o);
  settings.emplace_back("arithmetic", o.arithmetic);
  settings.emplace_back("budget", std::to_string(o.budget));
  settings.emplace_back("reference_baseline", o.reference_baseline ? "true" : "false");
  emit("exact-blind", o, render({row_from_metrics(o.config, Variant::blind, m)}, o),
       settings, {});
}

void cmd_simulate(const Options& o) {
  o.config.validate();
  BehaviorProfile profile = BehaviorProfile::from_config(o.config);
  profile.decide_once = o.decide_once;
  const SimReport report =
      run_experiment(o.config, parse_variant(o.variant), profile, plan_of(o));
  auto settings = config_settings(o);
  for (auto& kv : sampling_settings(o)) settings.push_back(std::move(kv));
  emit("simulate", o, render({row_from_report(report)}, o), settings, {o.seed});
}

void cmd_accuracy_table(const Options& o) {
  const auto pairs = default_accuracy_pairs();
  const auto nodes = o.grid.empty() ? default_accuracy_nodes() : o.grid;
  ExactOptions exact{Arithmetic::rational, o.budget, ExactBaseline::reference_table()};
  const auto cells = accuracy_table(pairs, nodes, exact, o.config.epsilon);
  std::vector<ExperimentRow> rows;
  for (const auto& cell : cells) {
    SearchConfig c;
    c.num_nodes = cell.num_nodes;
    c.fanout = cell.fanout;
    c.copies = cell.copies;
    rows.push_back(row_from_metrics(
        c, Variant::blind,
        {cell.report.rounds.exact, cell.report.active.exact, ModelSource::exact_blind}));
    rows.push_back(row_from_metrics(
        c, Variant::blind,
        {cell.report.rounds.approx, cell.report.active.approx,
         ModelSource::analytic_blind}));
  }
  std::cout << format_accuracy_table(cells);
  std::ostringstream grid;
  for (std::size_t i = 0; i < nodes.size(); ++i) grid << (i ? " " : "") << nodes[i];
  emit("accuracy-table", o, render(rows, o),
       {{"grid", grid.str()}, {"epsilon", fmt(o.config.epsilon)},
        {"budget", std::to_string(o.budget)}},
       {});
}

void cmd_compare(const Options& o) {
  const MetricSource source =
      o.source == "analytic" ? MetricSource::analytic : MetricSource::simulation;
  const ExperimentPlan plan = plan_of(o);
  std::vector<ComparisonPair> pairs;
  for (auto& pair : standard_comparisons(o.config.num_nodes)) {
    const bool smart_stifler =
        (pair.variant.variant == Variant::smart && pair.variant.config.stifler_mode());
    if (source == MetricSource::analytic && smart_stifler) {
      std::cout << "skipped (no analytic model): " << pair.label << '\n';
      continue;
    }
    if (o.decide_once) {
      pair.baseline.profile.decide_once = true;
      pair.variant.profile.decide_once = true;
    }
    pairs.push_back(std::move(pair));
  }
  const auto rows = compare_models(pairs, source, plan);
  std::vector<ExperimentRow> cells;
  std::cout << std::fixed << std::setprecision(2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::cout << r.label << ": rounds " << r.baseline.mean_rounds << " -> "
              << r.variant.mean_rounds << " (" << std::showpos << r.rounds_change
              << std::noshowpos << "%), active " << r.baseline.mean_active << " -> "
              << r.variant.mean_active << " (" << std::showpos << r.active_change
              << std::noshowpos << "%)\n";
    for (const ModelRun* run : {&pairs[i].baseline, &pairs[i].variant}) {
      if (source == MetricSource::simulation) {
        cells.push_back(row_from_report(
            run_experiment(run->config, run->variant, run->profile, plan)));
      } else {
        cells.push_back(row_from_metrics(run->config, run->variant,
                                         evaluate(*run, source, plan)));
      }
    }
  }
  emit("compare", o, render(cells, o),
       {{"nodes", std::to_string(o.config.num_nodes)}, {"source", o.source},
        {"instances", std::to_string(o.instances)}, {"runs", std::to_string(o.runs)},
        {"seed", std::to_string(o.seed)},
        {"decide_once", o.decide_once ? "true" : "false"}},
       source == MetricSource::simulation ? std::vector<std::uint64_t>{o.seed}
                                          : std::vector<std::uint64_t>{});
}

void print_fit(const char* name, const FitResult& f) {
  std::cout << name << ": ";
  if (f.form == FitForm::linear) {
    std::cout << "y = " << f.slope << " * N + " << f.intercept;
  } else {
    std::cout << "y = " << f.slope << " * " << to_string(f.base) << "(N) + " << f.intercept;
  }
  std::cout << "  (R^2 = " << f.r_squared << ")\n";
}

void cmd_fit(const Options& o) {
  const auto grid = o.grid.empty() ? default_scaling_grid() : o.grid;
  SearchConfig base = o.config;
  base.num_nodes = grid.front();
  const auto series = scaling_series(grid, base);
  std::vector<double> x, rounds, active;
  std::vector<ExperimentRow> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    x.push_back(static_cast<double>(grid[i]));
    rounds.push_back(series[i].mean_rounds);
    active.push_back(series[i].mean_active);
    SearchConfig c = base;
    c.num_nodes = grid[i];
    rows.push_back(row_from_metrics(c, Variant::blind, series[i]));
  }
  std::cout << std::setprecision(6);
  print_fit("E[A] linear", fit_linear(x, active));
  const auto log_fits = fit_logarithmic(x, rounds);
  for (const auto& f : log_fits) print_fit("E[r] logarithmic", f);
  std::cout << "best base for E[r]: " << to_string(best_fit(log_fits).base) << '\n';
  std::ostringstream g;
  for (std::size_t i = 0; i < grid.size(); ++i) g << (i ? " " : "") << grid[i];
  auto settings = config_settings(o);
  settings.emplace_back("grid", g.str());
  emit("fit", o, render(rows, o), settings, {});
}

void cmd_bench(const Options& o) {
  const std::vector<std::int64_t> grid =
      o.grid.empty() ? std::vector<std::int64_t>{50, 100, 200} : o.grid;
  const BenchTable table = benchmark_complexity(grid, o.rounds, o.min_seconds);
  std::ostringstream text;
  std::cout << "N  approx_seconds  exact_seconds\n";
  text << "N,approx_seconds,exact_seconds\n";
  for (const auto& p : table.points) {
    std::cout << p.num_nodes << "  " << p.approx_seconds << "  " << p.exact_seconds << '\n';
    text << p.num_nodes << ',' << format_double(p.approx_seconds) << ','
         << format_double(p.exact_seconds) << '\n';
  }
  std::cout << "approx exponent " << table.approx_exponent << ", exact exponent "
            << table.exact_exponent << '\n';
  std::string body = text.str();
  if (o.format == "json") {
    std::ostringstream j;
    j << "{\"rounds\": " << table.rounds << ", \"approx_exponent\": "
      << format_double(table.approx_exponent) << ", \"exact_exponent\": "
      << format_double(table.exact_exponent) << ", \"points\": [";
    for (std::size_t i = 0; i < table.points.size(); ++i) {
      const auto& p = table.points[i];
      j << (i ? ", " : "") << "{\"N\": " << p.num_nodes << ", \"approx_seconds\": "
        << format_double(p.approx_seconds) << ", \"exact_seconds\": "
        << format_double(p.exact_seconds) << "}";
    }
    j << "]}\n";
    body = j.str();
  }
  std::ostringstream g;
  for (std::size_t i = 0; i < grid.size(); ++i) g << (i ? " " : "") << grid[i];
  emit("bench", o, body,
       {{"grid", g.str()}, {"rounds", std::to_string(o.rounds)},
        {"min_seconds", fmt(o.min_seconds)}},
       {});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gossip-based file search on complete graphs: analytic, exact and "
               "simulated metrics"};
  app.set_version_flag("--version", gossip::kToolVersion);
  app.require_subcommand(1);
  Options o;

  auto* blind = app.add_subcommand("analytic-blind", "Mean-field blind search model");
  add_model_flags(blind, o);
  add_output_flags(blind, o);

  auto* smart = app.add_subcommand("analytic-smart", "Markov smart search model");
  add_model_flags(smart, o);
  add_exact_flags(smart, o);
  add_output_flags(smart, o);

  auto* exact = app.add_subcommand("exact-blind", "Exact Markov blind search model");
  add_model_flags(exact, o);
  add_exact_flags(exact, o);
  exact->add_flag("--reference-baseline", o.reference_baseline,
                  "Use the accuracy-table conventions (N non-initiator nodes, "
                  "unconditional active means)");
  add_output_flags(exact, o);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation");
  add_model_flags(sim, o);
  sim->add_option("--variant", o.variant, "Search variant")
      ->check(CLI::IsMember({"blind", "smart"}))
      ->capture_default_str();
  add_sampling_flags(sim, o);
  add_output_flags(sim, o);

  auto* acc = app.add_subcommand("accuracy-table", "Exact vs approximate blind accuracy");
  acc->add_option("--grid", o.grid, "Node counts (default 10 20 30 40 50)")->delimiter(',');
  acc->add_option("--epsilon", o.config.epsilon, "Tail truncation threshold")
      ->capture_default_str();
  acc->add_option("--budget", o.budget, "Largest chain accepted")->capture_default_str();
  add_output_flags(acc, o);

  auto* cmp = app.add_subcommand("compare", "Relative changes between model variants");
  cmp->add_option("--nodes", o.config.num_nodes, "Number of nodes")->capture_default_str();
  cmp->add_option("--source", o.source, "Where metrics come from")
      ->check(CLI::IsMember({"simulation", "analytic"}))
      ->capture_default_str();
  add_sampling_flags(cmp, o);
  add_output_flags(cmp, o);

  auto* fit = app.add_subcommand("fit", "Least-squares scaling fits of the blind model");
  add_model_flags(fit, o);
  fit->add_option("--grid", o.grid, "Node counts (default 10..50 and 10^2..10^5)")->delimiter(',');
  add_output_flags(fit, o);

  auto* bench = app.add_subcommand("bench", "Timing of approximate vs exact evaluation");
  bench->add_option("--grid", o.grid, "Node counts (default 50 100 200)")->delimiter(',');
  bench->add_option("--rounds", o.rounds, "Round r of the exact B(r)")->capture_default_str();
  bench->add_option("--min-seconds", o.min_seconds, "Minimum timing window per point")
      ->capture_default_str();
  add_output_flags(bench, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(gossip::ErrorKind::configuration);
  }

  try {
    if (*blind) cmd_analytic_blind(o);
    else if (*smart) cmd_analytic_smart(o);
    else if (*exact) cmd_exact_blind(o);
    else if (*sim) cmd_simulate(o);
    else if (*acc) cmd_accuracy_table(o);
    else if (*cmp) cmd_compare(o);
    else if (*fit) cmd_fit(o);
    else if (*bench) cmd_bench(o);
  } catch (const gossip::GossipError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
