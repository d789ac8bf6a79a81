#include "gossip/analytic_blind.hpp"

#include <algorithm>
#include <cmath>

namespace gossip {

ActiveRecursion::ActiveRecursion(const SearchConfig& config,
                                 Behaviour behaviour)
    : nodes_(static_cast<double>(config.num_nodes)),
      cooperation_(config.cooperation),
      stifling_(config.stifling),
      behaviour_(behaviour) {
  const double k = static_cast<double>(config.fanout);
  const double others = static_cast<double>(config.num_nodes - 1);
  exponent_ = k / others + (k * k) / (2.0 * others * others);
}

std::int64_t round_active(double active, std::int64_t num_nodes) noexcept {
  const auto rounded = static_cast<std::int64_t>(std::floor(active + 0.5));
  return std::clamp<std::int64_t>(rounded, 1, num_nodes);
}

std::int64_t ActiveRecursion::current_rounded() const noexcept {
  return round_active(active_, static_cast<std::int64_t>(nodes_));
}

void ActiveRecursion::advance() noexcept {
  const double a = active_;
  const double miss = std::exp(-a * exponent_);
  double next;
  if (behaviour_ == Behaviour::cooperative) {
    const double c = cooperation_;
    next = nodes_ * c + a * (1.0 - c) - (nodes_ - a) * c * miss;
  } else {
    const double keep = 1.0 - stifling_;
    next = 1.0 + (nodes_ - 1.0) * keep - (nodes_ - a) * keep * miss;
  }
  active_ = std::clamp(next, 1.0, nodes_);
}

namespace {

ActiveTrajectory run_recursion(const SearchConfig& config, Behaviour behaviour,
                               std::int64_t length) {
  ActiveTrajectory out;
  out.behaviour = behaviour;
  ActiveRecursion rec(config, behaviour);
  for (std::int64_t r = 0; r < length; ++r) {
    out.raw.push_back(rec.current());
    out.rounded.push_back(rec.current_rounded());
    rec.advance();
  }
  return out;
}

Behaviour behaviour_of(const SearchConfig& config) {
  return config.stifler_mode() ? Behaviour::stifler : Behaviour::cooperative;
}

}  // namespace

ActiveTrajectory cooperative_trajectory(const SearchConfig& config,
                                        std::int64_t length) {
  config.validate();
  if (config.stifling != 0.0) {
    throw ConfigError("cooperative trajectory requires stifling = 0");
  }
  return run_recursion(config, Behaviour::cooperative, length);
}

ActiveTrajectory stifler_trajectory(const SearchConfig& config,
                                    std::int64_t length) {
  config.validate();
  if (config.cooperation != 1.0) {
    throw ConfigError("stifler trajectory requires cooperation = 1");
  }
  return run_recursion(config, Behaviour::stifler, length);
}

BlindEvaluation blind_round_pmf(const SearchConfig& config) {
  config.validate();
  const double miss_one =
      1.0 - single_search_success(config.num_nodes, config.fanout,
                                  config.copies);
  BlindEvaluation out;
  out.trajectory.behaviour = behaviour_of(config);
  ActiveRecursion rec(config, out.trajectory.behaviour);

  // Trajectory and pmf advance in lock-step; memory stays O(r_max).
  auto success = [&](std::int64_t) {
    const std::int64_t searchers = rec.current_rounded();
    out.trajectory.raw.push_back(rec.current());
    out.trajectory.rounded.push_back(searchers);
    rec.advance();
    return 1.0 - std::pow(miss_one, static_cast<double>(searchers));
  };
  out.pmf = round_pmf(success, config.epsilon, config.round_cap);
  out.trajectory.raw.push_back(rec.current());
  out.trajectory.rounded.push_back(rec.current_rounded());
  return out;
}

SearchMetrics blind_metrics(const SearchConfig& config) {
  const BlindEvaluation eval = blind_round_pmf(config);
  std::vector<double> weights(eval.trajectory.rounded.begin() + 1,
                              eval.trajectory.rounded.end());
  return metrics_from_pmf(eval.pmf, weights, ModelSource::analytic_blind);
}

}  // namespace gossip
