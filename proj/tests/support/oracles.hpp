#pragma once

// Brute-force reference computations over explicit node sets. They share
// no code with the library models and are only practical for tiny graphs.

#include <cstdint>
#include <vector>

namespace oracle {

struct SearchOutcome {
  std::vector<double> round_pmf;  // index 0 holds round 1
  double mean_rounds = 0.0;
  double mean_active = 0.0;       // active nodes once the finding round ends
  double residual = 0.0;
};

/// Blind search, every queried node joins. Averages over all placements of
/// the m copies. Runs until the unfound mass drops below `tail` or
/// `max_rounds` is reached.
SearchOutcome enumerate_blind(int nodes, int fanout, int copies,
                              double tail = 1e-17, int max_rounds = 2000);

/// Smart search, every queried node joins, targets drawn from the nodes
/// nobody has queried yet (fanout clamped to what is left).
SearchOutcome enumerate_smart(int nodes, int fanout, int copies);

/// Probability that exactly `empty` of `bins` bins stay empty after
/// `groups` groups of `group_size` distinct balls, by enumerating all
/// group choices.
double occupancy_by_enumeration(int empty, int groups, int group_size,
                                int bins);

/// Row of the blind chain: `active` nodes each query `fanout` distinct
/// neighbours. Index j - 1 holds the probability of j active nodes after.
std::vector<double> blind_row_by_enumeration(int active, int nodes,
                                             int fanout);

/// All k-subsets of {0..n-1} as bit masks.
std::vector<std::uint32_t> subsets(int n, int k);

}  // namespace oracle
