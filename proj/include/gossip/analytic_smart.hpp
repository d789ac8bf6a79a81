#pragma once

#include <Eigen/Dense>
#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "gossip/config.hpp"
#include "gossip/core_math.hpp"
#include "gossip/markov.hpp"
#include "gossip/rational.hpp"

namespace gossip {

// Generalized occupancy: r independent groups of k balls, each group in k
// distinct bins out of n. p_v(r, k, n) is the chance that exactly v bins
// stay empty; defined for n > k, 0 <= v <= n - k, r >= 1.
mpq_class occupancy_exactly_empty_exact(std::int64_t empty, std::int64_t groups,
                                        std::int64_t group_size,
                                        std::int64_t bins);

/// Floating mode evaluates the alternating sum in double and throws
/// NumericalInstabilityError when cancellation makes the result unreliable.
double occupancy_exactly_empty(std::int64_t empty, std::int64_t groups,
                               std::int64_t group_size, std::int64_t bins,
                               Arithmetic arithmetic = Arithmetic::rational);

/// Row x_i of the smart-search chain before cooperation: the x_i active
/// nodes each query k distinct nodes among the N - x_i unqueried ones.
/// Index j - 1 holds state j. When N - x_i <= k every active node queries
/// all remaining nodes and the row is concentrated on N.
std::vector<mpq_class> smart_transition_row_exact(std::int64_t active,
                                                  std::int64_t num_nodes,
                                                  std::int64_t fanout);
std::vector<double> smart_transition_row(
    std::int64_t active, std::int64_t num_nodes, std::int64_t fanout,
    Arithmetic arithmetic = Arithmetic::rational);

/// Each of the x_j - x_i queried nodes joins independently with
/// probability c: p(x_i, x_i + a) = sum_{d >= a} p(x_i, x_i + d) B(d, a, c).
std::vector<double> cooperation_mixing(const std::vector<double>& row,
                                       std::int64_t active, double cooperation);

struct SmartOptions {
  Arithmetic arithmetic = Arithmetic::rational;
  std::int64_t size_budget = kDefaultExactBudget;
};

TransitionMatrix build_transition_matrix(const SearchConfig& config,
                                         const SmartOptions& options = {});

/// p_s(v) with the boundary clamps: 1 when m > N - v, fanout reduced to
/// N - v when fewer candidates remain.
double clamped_search_success(std::int64_t num_nodes, std::int64_t active,
                              std::int64_t fanout, std::int64_t copies);

/// Markov model of smart search. Holds Q and evaluates
/// S(r) = sum_v Q^{r-1}(1, v) (1 - (1 - p_s(v))^v).
class SmartModel {
 public:
  explicit SmartModel(const SearchConfig& config,
                      const SmartOptions& options = {});

  const TransitionMatrix& matrix() const noexcept { return matrix_; }

  double success_by_round(std::int64_t round) const;

  /// Last round of the pmf support when every queried node cooperates.
  std::int64_t support_bound() const noexcept;

  RoundPmf round_pmf() const;

  /// E[r], and E[A] = sum E[alpha(r)] p(r) with E[alpha(r)] the mean of
  /// Q^r(1, .).
  SearchMetrics metrics() const;

 private:
  double success_given(const Eigen::RowVectorXd& distribution) const;

  SearchConfig config_;
  TransitionMatrix matrix_;
  std::vector<double> search_success_;  // index v - 1
};

double smart_success_by_round(const SearchConfig& config, std::int64_t round,
                              const SmartOptions& options = {});
SearchMetrics smart_metrics(const SearchConfig& config,
                            const SmartOptions& options = {});

}  // namespace gossip
