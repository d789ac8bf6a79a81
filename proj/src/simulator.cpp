#include "gossip/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include "gossip/errors.hpp"

namespace gossip {

std::string_view to_string(Variant variant) noexcept {
  return variant == Variant::blind ? "blind" : "smart";
}

Variant parse_variant(std::string_view text) {
  if (text == "blind") return Variant::blind;
  if (text == "smart") return Variant::smart;
  throw ConfigError("unknown variant '" + std::string(text) + "'");
}

BehaviorProfile BehaviorProfile::from_config(const SearchConfig& config) {
  BehaviorProfile profile;
  if (config.stifler_mode()) {
    profile.mode = ProfileMode::stifler;
    profile.stifling = config.stifling;
    profile.counting = ActiveCount::searchers;
  } else {
    profile.cooperation = config.cooperation;
  }
  return profile;
}

void BehaviorProfile::validate() const {
  if (!(cooperation >= 0.0 && cooperation <= 1.0) ||
      !(stifling >= 0.0 && stifling <= 1.0)) {
    throw ConfigError("behaviour probabilities must lie in [0, 1]");
  }
  if (mode == ProfileMode::plain && stifling != 0.0) {
    throw ConfigError("plain profile requires s = 0");
  }
  if (mode == ProfileMode::stifler && cooperation != 1.0) {
    throw ConfigError("stifler profile requires c = 1");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Status : std::uint8_t { unqueried, active, declined, stifler };

// k distinct values from [0, n), Floyd's algorithm.
void sample_distinct(std::int64_t n, std::int64_t k, Rng& rng,
                     std::vector<std::int64_t>& out) {
  out.clear();
  for (std::int64_t j = n - k; j < n; ++j) {
    std::uniform_int_distribution<std::int64_t> pick(0, j);
    const std::int64_t t = pick(rng);
    if (std::find(out.begin(), out.end(), t) == out.end()) {
      out.push_back(t);
    } else {
      out.push_back(j);
    }
  }
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t master_seed, std::int64_t instance,
                               std::int64_t run) noexcept {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(instance));
  return splitmix64(h ^ (static_cast<std::uint64_t>(run) + 0x5bd1e995ULL));
}

std::uint64_t placement_seed(std::uint64_t master_seed,
                             std::int64_t instance) noexcept {
  std::uint64_t h = splitmix64(master_seed ^ 0xa0761d6478bd642fULL);
  return splitmix64(h ^ static_cast<std::uint64_t>(instance));
}

std::vector<std::int64_t> draw_placement(std::int64_t num_nodes,
                                         std::int64_t copies, Rng& rng) {
  std::vector<std::int64_t> picks;
  sample_distinct(num_nodes - 1, copies, rng, picks);
  for (auto& p : picks) p += 1;
  std::sort(picks.begin(), picks.end());
  return picks;
}

RunRecord simulate_search(const SearchConfig& config, Variant variant,
                          const BehaviorProfile& profile,
                          std::span<const std::int64_t> placement, Rng& rng) {
  config.validate();
  profile.validate();
  const std::int64_t n = config.num_nodes;
  const std::int64_t k = config.fanout;

  std::vector<Status> status(static_cast<std::size_t>(n), Status::unqueried);
  std::vector<char> holds(static_cast<std::size_t>(n), 0);
  for (std::int64_t h : placement) {
    if (h < 1 || h >= n) throw ConfigError("file placement outside 1..N-1");
    holds[h] = 1;
  }
  status[0] = Status::active;

  // Smart search draws targets from the nodes never queried before.
  std::vector<std::int64_t> pool;
  if (variant == Variant::smart) {
    pool.resize(static_cast<std::size_t>(n - 1));
    std::iota(pool.begin(), pool.end(), 1);
  }

  std::bernoulli_distribution joins(profile.cooperation);
  std::bernoulli_distribution stifles(profile.stifling);

  RunRecord record;
  std::vector<std::int64_t> actives{0};
  std::vector<std::int64_t> picks;
  std::vector<std::int64_t> hit_list;
  std::vector<char> hit(static_cast<std::size_t>(n), 0);

  for (std::int64_t round = 1;; ++round) {
    if (round > config.round_cap) {
      throw NumericalInstabilityError("simulation exceeded the round cap");
    }
    hit_list.clear();
    bool found = false;
    auto mark = [&](std::int64_t target) {
      if (holds[target]) found = true;
      if (!hit[target]) {
        hit[target] = 1;
        hit_list.push_back(target);
      }
    };

    // (1) queries
    for (std::int64_t node : actives) {
      if (variant == Variant::blind) {
        sample_distinct(n - 1, k, rng, picks);
        for (std::int64_t p : picks) mark(p >= node ? p + 1 : p);
        record.queries_sent += k;
      } else {
        const auto available = static_cast<std::int64_t>(pool.size());
        const std::int64_t count = std::min(k, available);
        sample_distinct(available, count, rng, picks);
        for (std::int64_t p : picks) mark(pool[p]);
        record.queries_sent += count;
      }
    }

    // (2) activation of queried inactive nodes
    for (std::int64_t target : hit_list) {
      hit[target] = 0;
      Status& st = status[target];
      if (st == Status::active) continue;
      if (profile.mode == ProfileMode::plain) {
        if (st == Status::declined && profile.decide_once) continue;
        st = joins(rng) ? Status::active : Status::declined;
      } else {
        st = Status::active;
      }
    }
    if (variant == Variant::smart) {
      std::erase_if(pool, [&](std::int64_t node) {
        return std::find(hit_list.begin(), hit_list.end(), node) !=
               hit_list.end();
      });
    }

    if (found) {
      record.rounds = round;
      record.active_at_discovery =
          profile.counting == ActiveCount::searchers
              ? static_cast<std::int64_t>(actives.size())
              : std::count(status.begin(), status.end(), Status::active);
      return record;
    }

    // (3) stifling, never the initiator
    if (profile.stifling > 0.0) {
      for (std::int64_t node = 1; node < n; ++node) {
        if (status[node] == Status::active && stifles(rng)) {
          status[node] = Status::stifler;
        }
      }
    }
    actives.clear();
    for (std::int64_t node = 0; node < n; ++node) {
      if (status[node] == Status::active) actives.push_back(node);
    }
  }
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  const double count = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / (count - 1.0) / count);
  }
  return s;
}

RunRecord simulate_replication(const SearchConfig& config, Variant variant,
                               const BehaviorProfile& profile,
                               std::uint64_t master_seed, std::int64_t instance,
                               std::int64_t run) {
  Rng placement_rng(placement_seed(master_seed, instance));
  const auto placement =
      draw_placement(config.num_nodes, config.copies, placement_rng);
  const std::uint64_t seed = replication_seed(master_seed, instance, run);
  Rng rng(seed);
  RunRecord record = simulate_search(config, variant, profile, placement, rng);
  record.instance = instance;
  record.run = run;
  record.seed = seed;
  return record;
}

SimReport aggregate(const SearchConfig& config, Variant variant,
                    const BehaviorProfile& profile, const ExperimentPlan& plan,
                    std::vector<RunRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              return std::tie(a.instance, a.run) < std::tie(b.instance, b.run);
            });
  SimReport report;
  report.config = config;
  report.variant = variant;
  report.profile = profile;
  report.plan = plan;
  std::vector<double> rounds, active, queries;
  for (const auto& r : records) {
    rounds.push_back(static_cast<double>(r.rounds));
    active.push_back(static_cast<double>(r.active_at_discovery));
    queries.push_back(static_cast<double>(r.queries_sent));
  }
  report.rounds = summarize(rounds);
  report.active = summarize(active);
  report.queries = summarize(queries);
  report.records = std::move(records);
  return report;
}

SimReport run_experiment(const SearchConfig& config, Variant variant,
                         const BehaviorProfile& profile,
                         const ExperimentPlan& plan) {
  config.validate();
  profile.validate();
  if (plan.instances < 1 || plan.runs_per_instance < 1) {
    throw ConfigError("instances and runs per instance must be positive");
  }
  std::vector<RunRecord> records;
  records.reserve(static_cast<std::size_t>(plan.instances * plan.runs_per_instance));
  for (std::int64_t i = 0; i < plan.instances; ++i) {
    Rng placement_rng(placement_seed(plan.master_seed, i));
    const auto placement =
        draw_placement(config.num_nodes, config.copies, placement_rng);
    for (std::int64_t r = 0; r < plan.runs_per_instance; ++r) {
      const std::uint64_t seed = replication_seed(plan.master_seed, i, r);
      Rng rng(seed);
      RunRecord rec = simulate_search(config, variant, profile, placement, rng);
      rec.instance = i;
      rec.run = r;
      rec.seed = seed;
      records.push_back(rec);
    }
  }
  return aggregate(config, variant, profile, plan, std::move(records));
}

}  // namespace gossip
