#include "oracles.hpp"

#include <bit>
#include <map>
#include <utility>

namespace oracle {

std::vector<std::uint32_t> subsets(int n, int k) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) == k) out.push_back(mask);
  }
  return out;
}

namespace {

// Spreads the bits of `compact` (over `slots` positions) onto the set
// bits of `positions`.
std::uint32_t deposit(std::uint32_t compact, const std::vector<int>& positions) {
  std::uint32_t out = 0;
  for (std::size_t b = 0; b < positions.size(); ++b) {
    if (compact & (1u << b)) out |= 1u << positions[b];
  }
  return out;
}

std::vector<int> bits_of(std::uint32_t mask, int nodes) {
  std::vector<int> v;
  for (int b = 0; b < nodes; ++b) {
    if (mask & (1u << b)) v.push_back(b);
  }
  return v;
}

// Every joint choice of the actives: a list of (union of targets, weight).
// `choices[a]` lists the target masks open to active node a.
std::map<std::uint32_t, double> joint_hits(
    const std::vector<std::vector<std::uint32_t>>& choices) {
  std::map<std::uint32_t, double> acc{{0u, 1.0}};
  for (const auto& options : choices) {
    std::map<std::uint32_t, double> next;
    const double w = 1.0 / static_cast<double>(options.size());
    for (const auto& [hit, p] : acc) {
      for (std::uint32_t t : options) next[hit | t] += p * w;
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

SearchOutcome enumerate_blind(int nodes, int fanout, int copies, double tail,
                              int max_rounds) {
  SearchOutcome out;
  const auto placements = subsets(nodes - 1, copies);
  const double placement_weight = 1.0 / static_cast<double>(placements.size());

  // Target options for each node: k-subsets of everyone else.
  std::vector<std::vector<std::uint32_t>> options(nodes);
  for (int node = 0; node < nodes; ++node) {
    std::vector<int> others;
    for (int b = 0; b < nodes; ++b) {
      if (b != node) others.push_back(b);
    }
    for (std::uint32_t s : subsets(nodes - 1, fanout)) {
      options[node].push_back(deposit(s, others));
    }
  }

  std::map<std::uint32_t, std::map<std::uint32_t, double>> hits_cache;
  for (std::uint32_t placement : placements) {
    const std::uint32_t files = placement << 1;  // holders among 1..N-1
    std::map<std::uint32_t, double> states{{1u, placement_weight}};
    for (int round = 1; round <= max_rounds && !states.empty(); ++round) {
      if (static_cast<int>(out.round_pmf.size()) < round) out.round_pmf.push_back(0.0);
      std::map<std::uint32_t, double> next;
      for (const auto& [active, p] : states) {
        auto it = hits_cache.find(active);
        if (it == hits_cache.end()) {
          std::vector<std::vector<std::uint32_t>> choices;
          for (int a : bits_of(active, nodes)) choices.push_back(options[a]);
          it = hits_cache.emplace(active, joint_hits(choices)).first;
        }
        for (const auto& [hit, q] : it->second) {
          const std::uint32_t after = active | hit;
          if (hit & files) {
            out.round_pmf[round - 1] += p * q;
            out.mean_rounds += round * p * q;
            out.mean_active += std::popcount(after) * p * q;
          } else {
            next[after] += p * q;
          }
        }
      }
      states = std::move(next);
      double left = 0.0;
      for (const auto& kv : states) left += kv.second;
      if (left < tail * placement_weight) break;
    }
    for (const auto& kv : states) out.residual += kv.second;
  }
  return out;
}

SearchOutcome enumerate_smart(int nodes, int fanout, int copies) {
  SearchOutcome out;
  const auto placements = subsets(nodes - 1, copies);
  const double placement_weight = 1.0 / static_cast<double>(placements.size());
  for (std::uint32_t placement : placements) {
    const std::uint32_t files = placement << 1;
    // State: the set of queried nodes plus the initiator; all of them are
    // active because every queried node joins.
    std::map<std::uint32_t, double> states{{1u, placement_weight}};
    for (int round = 1; !states.empty(); ++round) {
      if (static_cast<int>(out.round_pmf.size()) < round) out.round_pmf.push_back(0.0);
      std::map<std::uint32_t, double> next;
      for (const auto& [active, p] : states) {
        const std::uint32_t everyone = (1u << nodes) - 1;
        const auto pool = bits_of(everyone & ~active, nodes);
        const int take = std::min<int>(fanout, static_cast<int>(pool.size()));
        std::vector<std::uint32_t> picks;
        for (std::uint32_t s : subsets(static_cast<int>(pool.size()), take)) {
          picks.push_back(deposit(s, pool));
        }
        std::vector<std::vector<std::uint32_t>> choices(
            static_cast<std::size_t>(std::popcount(active)), picks);
        for (const auto& [hit, q] : joint_hits(choices)) {
          const std::uint32_t after = active | hit;
          if (hit & files) {
            out.round_pmf[round - 1] += p * q;
            out.mean_rounds += round * p * q;
            out.mean_active += std::popcount(after) * p * q;
          } else {
            next[after] += p * q;
          }
        }
      }
      states = std::move(next);
    }
  }
  return out;
}

double occupancy_by_enumeration(int empty, int groups, int group_size,
                                int bins) {
  const auto groups_of = subsets(bins, group_size);
  std::map<std::uint32_t, double> filled{{0u, 1.0}};
  const double w = 1.0 / static_cast<double>(groups_of.size());
  for (int g = 0; g < groups; ++g) {
    std::map<std::uint32_t, double> next;
    for (const auto& [mask, p] : filled) {
      for (std::uint32_t s : groups_of) next[mask | s] += p * w;
    }
    filled = std::move(next);
  }
  double total = 0.0;
  for (const auto& [mask, p] : filled) {
    if (bins - std::popcount(mask) == empty) total += p;
  }
  return total;
}

std::vector<double> blind_row_by_enumeration(int active, int nodes, int fanout) {
  std::vector<std::vector<std::uint32_t>> choices;
  for (int node = 0; node < active; ++node) {
    std::vector<int> others;
    for (int b = 0; b < nodes; ++b) {
      if (b != node) others.push_back(b);
    }
    std::vector<std::uint32_t> opts;
    for (std::uint32_t s : subsets(nodes - 1, fanout)) opts.push_back(deposit(s, others));
    choices.push_back(std::move(opts));
  }
  const std::uint32_t start = (1u << active) - 1;
  std::vector<double> row(static_cast<std::size_t>(nodes), 0.0);
  for (const auto& [hit, q] : joint_hits(choices)) {
    row[static_cast<std::size_t>(std::popcount(start | hit)) - 1] += q;
  }
  return row;
}

}  // namespace oracle
