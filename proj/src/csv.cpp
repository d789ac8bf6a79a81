#include "gossip/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace gossip {

const std::vector<std::string> kCsvColumns = {
    "model",        "variant",       "N",           "k",
    "m",            "c",             "s",           "mean_rounds",
    "stderr_rounds", "mean_active",  "stderr_active", "mean_queries",
    "replications", "seed"};

const std::string kToolVersion = "1.0.0";

namespace {

std::string model_name(ModelSource source) {
  switch (source) {
    case ModelSource::analytic_blind:
    case ModelSource::analytic_smart:
      return "analytic";
    case ModelSource::exact_blind:
      return "exact";
    case ModelSource::simulation:
      return "simulation";
  }
  return "unknown";
}

double parse_double(const std::string& text, const char* column) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(std::string("bad number in column ") + column + ": '" +
                      text + "'");
  }
  return value;
}

template <typename Int>
Int parse_integer(const std::string& text, const char* column) {
  Int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(std::string("bad integer in column ") + column + ": '" +
                      text + "'");
  }
  return value;
}

std::optional<double> parse_optional(const std::string& text,
                                     const char* column) {
  if (text.empty()) return std::nullopt;
  return parse_double(text, column);
}

std::string optional_text(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void check_text_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") != std::string::npos) {
    throw FormatError("text field may not contain separators: '" + value + "'");
  }
}

nlohmann::json optional_json(const std::optional<double>& value) {
  return value ? nlohmann::json(*value) : nlohmann::json(nullptr);
}

std::optional<double> json_optional(const nlohmann::json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<double>();
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) throw FormatError("cannot serialize a non-finite value");
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) throw FormatError("number formatting failed");
  return std::string(buffer, ptr);
}

ExperimentRow row_from_metrics(const SearchConfig& config, Variant variant,
                               const SearchMetrics& metrics) {
  ExperimentRow row;
  row.model = model_name(metrics.source);
  row.variant = std::string(to_string(variant));
  row.num_nodes = config.num_nodes;
  row.fanout = config.fanout;
  row.copies = config.copies;
  row.cooperation = config.cooperation;
  row.stifling = config.stifling;
  row.mean_rounds = metrics.mean_rounds;
  row.mean_active = metrics.mean_active;
  return row;
}

ExperimentRow row_from_report(const SimReport& report) {
  ExperimentRow row;
  row.model = "simulation";
  row.variant = std::string(to_string(report.variant));
  row.num_nodes = report.config.num_nodes;
  row.fanout = report.config.fanout;
  row.copies = report.config.copies;
  row.cooperation = report.config.cooperation;
  row.stifling = report.config.stifling;
  row.mean_rounds = report.rounds.mean;
  row.stderr_rounds = report.rounds.standard_error;
  row.mean_active = report.active.mean;
  row.stderr_active = report.active.standard_error;
  row.mean_queries = report.queries.mean;
  row.replications = report.replications();
  row.seed = report.plan.master_seed;
  return row;
}

void sort_rows(std::vector<ExperimentRow>& rows) {
  auto key = [](const ExperimentRow& r) {
    return std::tie(r.model, r.variant, r.num_nodes, r.fanout, r.copies,
                    r.cooperation, r.stifling, r.seed);
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ExperimentRow& a, const ExperimentRow& b) {
                     return key(a) < key(b);
                   });
}

std::string write_csv(std::vector<ExperimentRow> rows) {
  sort_rows(rows);
  std::string out;
  for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
    if (i) out += ',';
    out += kCsvColumns[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    check_text_field(r.model);
    check_text_field(r.variant);
    const std::vector<std::string> fields = {
        r.model,
        r.variant,
        std::to_string(r.num_nodes),
        std::to_string(r.fanout),
        std::to_string(r.copies),
        format_double(r.cooperation),
        format_double(r.stifling),
        format_double(r.mean_rounds),
        optional_text(r.stderr_rounds),
        format_double(r.mean_active),
        optional_text(r.stderr_active),
        optional_text(r.mean_queries),
        std::to_string(r.replications),
        r.seed ? std::to_string(*r.seed) : std::string()};
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  }
  return out;
}

std::vector<ExperimentRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (split_line(line) != kCsvColumns) throw FormatError("unexpected CSV header: " + line);
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != kCsvColumns.size()) {
      throw FormatError("expected " + std::to_string(kCsvColumns.size()) +
                        " fields, got " + std::to_string(f.size()));
    }
    ExperimentRow r;
    r.model = f[0];
    r.variant = f[1];
    r.num_nodes = parse_integer<std::int64_t>(f[2], "N");
    r.fanout = parse_integer<std::int64_t>(f[3], "k");
    r.copies = parse_integer<std::int64_t>(f[4], "m");
    r.cooperation = parse_double(f[5], "c");
    r.stifling = parse_double(f[6], "s");
    r.mean_rounds = parse_double(f[7], "mean_rounds");
    r.stderr_rounds = parse_optional(f[8], "stderr_rounds");
    r.mean_active = parse_double(f[9], "mean_active");
    r.stderr_active = parse_optional(f[10], "stderr_active");
    r.mean_queries = parse_optional(f[11], "mean_queries");
    r.replications = parse_integer<std::int64_t>(f[12], "replications");
    if (!f[13].empty()) r.seed = parse_integer<std::uint64_t>(f[13], "seed");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string write_json(std::vector<ExperimentRow> rows) {
  sort_rows(rows);
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["model"] = r.model;
    j["variant"] = r.variant;
    j["N"] = r.num_nodes;
    j["k"] = r.fanout;
    j["m"] = r.copies;
    j["c"] = r.cooperation;
    j["s"] = r.stifling;
    j["mean_rounds"] = r.mean_rounds;
    j["stderr_rounds"] = optional_json(r.stderr_rounds);
    j["mean_active"] = r.mean_active;
    j["stderr_active"] = optional_json(r.stderr_active);
    j["mean_queries"] = optional_json(r.mean_queries);
    j["replications"] = r.replications;
    j["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::vector<ExperimentRow> parse_json(const std::string& text) {
  std::vector<ExperimentRow> rows;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array()) throw FormatError("expected a JSON array of rows");
    for (const auto& j : doc) {
      ExperimentRow r;
      r.model = j.at("model").get<std::string>();
      r.variant = j.at("variant").get<std::string>();
      r.num_nodes = j.at("N").get<std::int64_t>();
      r.fanout = j.at("k").get<std::int64_t>();
      r.copies = j.at("m").get<std::int64_t>();
      r.cooperation = j.at("c").get<double>();
      r.stifling = j.at("s").get<double>();
      r.mean_rounds = j.at("mean_rounds").get<double>();
      r.stderr_rounds = json_optional(j.at("stderr_rounds"));
      r.mean_active = j.at("mean_active").get<double>();
      r.stderr_active = json_optional(j.at("stderr_active"));
      r.mean_queries = json_optional(j.at("mean_queries"));
      r.replications = j.at("replications").get<std::int64_t>();
      if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
      rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed JSON rows: ") + e.what());
  }
  return rows;
}

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "gossip-search";
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : settings) config[key] = value;
  j["config"] = std::move(config);
  j["seeds"] = seeds;
  j["rng_algorithm"] = rng_algorithm;
  j["output"] = {{"path", output_path}, {"format", output_format}};
  return j.dump(2) + "\n";
}

void write_file_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open '" + temp.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw ConfigError("failed writing '" + temp.string() + "'");
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) throw ConfigError("cannot move output into place at '" + path + "': " + ec.message());
}

std::string manifest_path(const std::string& output_path) {
  return output_path + ".manifest.json";
}

}  // namespace gossip
