#include "gossip/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gossip {

void SearchConfig::validate() const {
  auto fail = [this](const std::string& msg) {
    throw ConfigError(msg + " (" + describe() + ")");
  };
  if (num_nodes < 2) fail("num_nodes must be at least 2");
  if (fanout < 1 || fanout > num_nodes - 1)
    fail("fanout must lie in [1, num_nodes - 1]");
  if (copies < 1 || copies > num_nodes - 1)
    fail("copies must lie in [1, num_nodes - 1]");
  if (!(cooperation >= 0.0 && cooperation <= 1.0))
    fail("cooperation must lie in [0, 1]");
  if (!(stifling >= 0.0 && stifling <= 1.0))
    fail("stifling must lie in [0, 1]");
  if (stifling > 0.0 && cooperation != 1.0)
    fail("stifling requires cooperation = 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must lie in (0, 1)");
  if (round_cap < 1) fail("round_cap must be positive");
}

std::string SearchConfig::describe() const {
  std::ostringstream out;
  out << "N=" << num_nodes << " k=" << fanout << " m=" << copies
      << " c=" << cooperation << " s=" << stifling << " eps=" << epsilon;
  return out.str();
}

double binomial_ratio(std::int64_t a, std::int64_t b, std::int64_t k) {
  if (k < 0 || b < k) throw DomainError("binomial_ratio requires 0 <= k <= b");
  if (a < k) return 0.0;
  double ratio = 1.0;
  for (std::int64_t j = 0; j < k; ++j) {
    ratio *= static_cast<double>(a - j) / static_cast<double>(b - j);
  }
  return ratio;
}

double single_search_success(std::int64_t num_nodes, std::int64_t fanout,
                             std::int64_t copies) {
  if (num_nodes < 2 || fanout < 1 || copies < 1 || fanout > num_nodes - 1 ||
      copies > num_nodes - 1) {
    throw ConfigError("single_search_success requires 1 <= k, m <= N - 1");
  }
  const std::int64_t candidates = num_nodes - 1;
  return 1.0 - binomial_ratio(candidates - copies, candidates, fanout);
}

double conditional_search_success(std::int64_t num_nodes,
                                  std::int64_t active, std::int64_t fanout,
                                  std::int64_t copies) {
  if (active < 1 || active > num_nodes || fanout < 1 || copies < 1) {
    throw ConfigError("conditional_search_success: invalid parameters");
  }
  const std::int64_t candidates = num_nodes - active;
  if (fanout > candidates) {
    throw DomainError("fanout exceeds the number of unqueried candidates");
  }
  if (copies > candidates) {
    throw DomainError("copies exceed the number of unqueried candidates");
  }
  return 1.0 - binomial_ratio(candidates - copies, candidates, fanout);
}

double RoundPmf::total() const noexcept {
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0) +
         residual;
}

RoundPmf round_pmf(const SuccessSequence& success, double epsilon,
                   std::int64_t round_cap, std::int64_t support_bound) {
  RoundPmf pmf;
  pmf.epsilon = epsilon;
  double survival = 1.0;
  for (std::int64_t r = 1;; ++r) {
    double s = success(r);
    if (!(s >= -1e-12 && s <= 1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "success probability " << s << " at round " << r
          << " outside [0, 1]";
      throw NumericalInstabilityError(msg.str());
    }
    s = std::clamp(s, 0.0, 1.0);
    pmf.probabilities.push_back(s * survival);
    survival *= 1.0 - s;
    pmf.residual = survival;
    if (survival < epsilon) {
      pmf.stop = StopReason::epsilon;
      return pmf;
    }
    if (support_bound > 0 && r >= support_bound) {
      pmf.stop = StopReason::support_bound;
      return pmf;
    }
    if (r >= round_cap) {
      std::ostringstream msg;
      msg << "survival " << survival << " still above epsilon " << epsilon
          << " after round cap " << round_cap;
      throw TruncationError(msg.str(), std::move(pmf));
    }
  }
}

std::string_view to_string(ModelSource source) noexcept {
  switch (source) {
    case ModelSource::analytic_blind: return "analytic-blind";
    case ModelSource::analytic_smart: return "analytic-smart";
    case ModelSource::exact_blind: return "exact-blind";
    case ModelSource::simulation: return "simulation";
  }
  return "unknown";
}

SearchMetrics metrics_from_pmf(const RoundPmf& pmf,
                               std::span<const double> active_weights,
                               ModelSource source) {
  if (static_cast<std::int64_t>(active_weights.size()) < pmf.r_max()) {
    throw std::logic_error("metrics_from_pmf: fewer active weights than rounds");
  }
  if (pmf.stop == StopReason::epsilon && !(pmf.residual < pmf.epsilon)) {
    throw std::logic_error("metrics_from_pmf: pmf was not truncated at epsilon");
  }
  SearchMetrics metrics;
  metrics.source = source;
  for (std::size_t i = 0; i < pmf.probabilities.size(); ++i) {
    const double p = pmf.probabilities[i];
    metrics.mean_rounds += static_cast<double>(i + 1) * p;
    metrics.mean_active += active_weights[i] * p;
  }
  return metrics;
}

}  // namespace gossip
