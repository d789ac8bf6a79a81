#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gossip/config.hpp"

namespace gossip {

enum class Variant { blind, smart };

std::string_view to_string(Variant variant) noexcept;
Variant parse_variant(std::string_view text);

enum class ProfileMode { plain, stifler };

/// Which nodes make up the active count reported at discovery.
enum class ActiveCount {
  with_new_activations,  // searchers plus the nodes their last queries woke
  searchers,             // nodes that queried in the discovery round
};

/// How queried nodes behave. Plain mode: a queried inactive node joins with
/// probability c, decided once per round however many queries it receives.
/// Stifler mode: every queried non-active node joins, former stiflers
/// included, and each active non-initiator then drops out with probability
/// s, so a queried stifler is back in the next round with probability 1 - s.
struct BehaviorProfile {
  ProfileMode mode = ProfileMode::plain;
  double cooperation = 1.0;
  double stifling = 0.0;
  /// Plain mode only: a node that declined once never joins later.
  bool decide_once = false;
  ActiveCount counting = ActiveCount::with_new_activations;

  static BehaviorProfile from_config(const SearchConfig& config);
  void validate() const;
};

struct RunRecord {
  std::int64_t rounds = 0;
  std::int64_t active_at_discovery = 0;
  std::int64_t queries_sent = 0;
  std::int64_t instance = 0;
  std::int64_t run = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

using Rng = std::mt19937_64;
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64";

/// Stream seed for one replication, derived from the master seed alone so
/// replications can run in any order.
std::uint64_t replication_seed(std::uint64_t master_seed, std::int64_t instance,
                               std::int64_t run) noexcept;
std::uint64_t placement_seed(std::uint64_t master_seed,
                             std::int64_t instance) noexcept;

/// Uniform m-subset of the non-initiator nodes 1..N-1, sorted.
std::vector<std::int64_t> draw_placement(std::int64_t num_nodes,
                                         std::int64_t copies, Rng& rng);

/// One search from the initiator (node 0) until a file holder is queried.
/// `placement` lists the holders. Ids and seed in the result are left zero.
RunRecord simulate_search(const SearchConfig& config, Variant variant,
                          const BehaviorProfile& profile,
                          std::span<const std::int64_t> placement, Rng& rng);

struct Summary {
  double mean = 0.0;
  double standard_error = 0.0;
};

Summary summarize(std::span<const double> values);

struct ExperimentPlan {
  std::int64_t instances = 100;
  std::int64_t runs_per_instance = 100;
  std::uint64_t master_seed = 1;
};

struct SimReport {
  SearchConfig config;
  Variant variant = Variant::blind;
  BehaviorProfile profile;
  ExperimentPlan plan;
  std::string rng_algorithm{kRngAlgorithm};
  Summary rounds;
  Summary active;
  Summary queries;
  std::vector<RunRecord> records;  // sorted by (instance, run)

  std::int64_t replications() const noexcept {
    return static_cast<std::int64_t>(records.size());
  }
};

RunRecord simulate_replication(const SearchConfig& config, Variant variant,
                               const BehaviorProfile& profile,
                               std::uint64_t master_seed, std::int64_t instance,
                               std::int64_t run);

/// Builds a report from records in any order.
SimReport aggregate(const SearchConfig& config, Variant variant,
                    const BehaviorProfile& profile, const ExperimentPlan& plan,
                    std::vector<RunRecord> records);

/// `instances` random file placements times `runs_per_instance` searches.
SimReport run_experiment(const SearchConfig& config, Variant variant,
                         const BehaviorProfile& profile,
                         const ExperimentPlan& plan = {});

}  // namespace gossip
