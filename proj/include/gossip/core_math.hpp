#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "gossip/config.hpp"
#include "gossip/errors.hpp"

namespace gossip {

/// C(a, k) / C(b, k) as a product of k ratios; zero when a < k.
/// Requires 0 <= k <= b.
double binomial_ratio(std::int64_t a, std::int64_t b, std::int64_t k);

/// Probability that k distinct uniform queries among the N-1 non-initiator
/// nodes hit at least one of the m file holders.
double single_search_success(std::int64_t num_nodes, std::int64_t fanout,
                             std::int64_t copies);

/// Same, when v nodes are already active and only the N-v others are
/// candidates. Throws DomainError when k or m exceeds N-v.
double conditional_search_success(std::int64_t num_nodes,
                                  std::int64_t active, std::int64_t fanout,
                                  std::int64_t copies);

enum class StopReason {
  epsilon,        // survival product dropped below epsilon
  support_bound,  // caller-supplied last round reached
};

/// Truncated distribution of the round at which the file is first found.
struct RoundPmf {
  std::vector<double> probabilities;  // index 0 holds p(1)
  double residual = 1.0;              // mass beyond r_max
  double epsilon = kDefaultEpsilon;
  StopReason stop = StopReason::epsilon;

  std::int64_t r_max() const noexcept {
    return static_cast<std::int64_t>(probabilities.size());
  }
  /// Sum of p(r) plus the residual; 1 up to rounding.
  double total() const noexcept;
};

/// Raised when the survival product stays above epsilon until the round cap.
class TruncationError : public NumericalInstabilityError {
 public:
  TruncationError(const std::string& what, RoundPmf partial)
      : NumericalInstabilityError(what), partial_(std::move(partial)) {}

  const RoundPmf& partial() const noexcept { return partial_; }

 private:
  RoundPmf partial_;
};

/// Produces S(r) for r = 1, 2, ... in order.
using SuccessSequence = std::function<double(std::int64_t round)>;

/// p(r) = S(r) * prod_{i<r} (1 - S(i)), stopping at the first r whose
/// survival product is below epsilon, or at `support_bound` when positive.
RoundPmf round_pmf(const SuccessSequence& success, double epsilon,
                   std::int64_t round_cap, std::int64_t support_bound = 0);

enum class ModelSource {
  analytic_blind,
  analytic_smart,
  exact_blind,
  simulation,
};

std::string_view to_string(ModelSource source) noexcept;

struct SearchMetrics {
  double mean_rounds = 0.0;
  double mean_active = 0.0;
  ModelSource source = ModelSource::analytic_blind;
};

/// E[r] = sum r p(r) and E[A] = sum w(r) p(r), where w(r) is the number of
/// active nodes credited to a discovery at round r (index 0 holds w(1)).
/// Residual mass contributes nothing.
SearchMetrics metrics_from_pmf(const RoundPmf& pmf,
                               std::span<const double> active_weights,
                               ModelSource source);

}  // namespace gossip
