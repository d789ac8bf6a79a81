#pragma once

#include <cstdint>
#include <vector>

#include "gossip/config.hpp"
#include "gossip/core_math.hpp"

namespace gossip {

enum class Behaviour { cooperative, stifler };

/// Deterministic mean-field path of the active-node count for blind search.
/// Entry r-1 holds round r; A(1) = 1 is the initiator alone.
struct ActiveTrajectory {
  std::vector<double> raw;
  std::vector<std::int64_t> rounded;  // nearest integer, ties rounded up
  Behaviour behaviour = Behaviour::cooperative;
};

/// Streams A(1), A(2), ... for either behaviour. Each step is O(1), so an
/// evaluation costs O(k + r_max) regardless of N.
class ActiveRecursion {
 public:
  ActiveRecursion(const SearchConfig& config, Behaviour behaviour);

  double current() const noexcept { return active_; }
  std::int64_t current_rounded() const noexcept;
  void advance() noexcept;

 private:
  double nodes_;
  double exponent_;  // k/(N-1) + k^2 / (2 (N-1)^2)
  double cooperation_;
  double stifling_;
  Behaviour behaviour_;
  double active_ = 1.0;
};

std::int64_t round_active(double active, std::int64_t num_nodes) noexcept;

/// A(r+1) = N c + A(r)(1-c) - (N - A(r)) c exp(-A(r) x). Requires s = 0.
ActiveTrajectory cooperative_trajectory(const SearchConfig& config,
                                        std::int64_t length);

/// A(r+1) = 1 + (N-1)(1-s) - (N - A(r))(1-s) exp(-A(r) x). Requires c = 1.
ActiveTrajectory stifler_trajectory(const SearchConfig& config,
                                    std::int64_t length);

struct BlindEvaluation {
  RoundPmf pmf;
  ActiveTrajectory trajectory;  // r_max + 1 entries
};

/// S(r) = 1 - (1 - p_s)^Â(r), driven by the recursion that matches the
/// config's behaviour (stifler when s > 0).
BlindEvaluation blind_round_pmf(const SearchConfig& config);

/// E[r] and E[A] = sum Â(r+1) p(r). Under stifling, E[A] counts nodes that
/// are active when the file is found.
SearchMetrics blind_metrics(const SearchConfig& config);

}  // namespace gossip
