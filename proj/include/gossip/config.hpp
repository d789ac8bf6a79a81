#pragma once

#include <cstdint>
#include <string>

namespace gossip {

inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr std::int64_t kDefaultRoundCap = 1'000'000;

/// Parameter tuple for one model evaluation on a complete graph.
///
/// `num_nodes` counts the initiator. The file sits on `copies` of the other
/// num_nodes - 1 nodes. Every active node sends `fanout` queries per round.
/// Behaviour is driven either by `cooperation` (probability that a queried
/// node joins the search) or by `stifling` (probability that an active node
/// drops out after each round); when stifling is positive, cooperation must
/// be 1.
struct SearchConfig {
  std::int64_t num_nodes = 10;
  std::int64_t fanout = 1;
  std::int64_t copies = 1;
  double cooperation = 1.0;
  double stifling = 0.0;
  double epsilon = kDefaultEpsilon;
  std::int64_t round_cap = kDefaultRoundCap;

  bool stifler_mode() const noexcept { return stifling > 0.0; }

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  std::string describe() const;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

}  // namespace gossip
