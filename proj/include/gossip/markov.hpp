#pragma once

#include <Eigen/Dense>
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace gossip {

inline constexpr std::int64_t kDefaultExactBudget = 200;

/// Round-to-round transition probabilities over the active-node count.
/// States are 1..order; entry (i, j) is the probability of moving from i to
/// j active nodes in one round.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(std::int64_t order);

  std::int64_t order() const noexcept { return order_; }
  bool is_exact() const noexcept { return exact_.has_value(); }

  double at(std::int64_t from, std::int64_t to) const {
    return values_(from - 1, to - 1);
  }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  /// Installs a row. `row[j - 1]` is the probability of landing in state j.
  void set_row(std::int64_t from, const std::vector<double>& row);
  void set_row_exact(std::int64_t from, const std::vector<mpq_class>& row);

  /// Drops the rational entries after a floating-point transformation.
  void discard_exact() noexcept { exact_.reset(); }

  /// True when every rational row sums to exactly 1. Requires is_exact().
  bool rows_sum_to_one_exactly() const;
  double max_row_sum_deviation() const;
  bool is_upper_triangular() const;

  /// Distribution over states after `rounds` transitions from state 1.
  Eigen::RowVectorXd first_row_power(std::int64_t rounds) const;

  /// Q^rounds by repeated squaring: O(log(rounds) * order^3).
  Eigen::MatrixXd power(std::int64_t rounds) const;

 private:
  std::int64_t order_;
  Eigen::MatrixXd values_;
  std::optional<std::vector<mpq_class>> exact_;
};

/// Mean of a distribution over states 1..order.
double mean_state(const Eigen::RowVectorXd& distribution);

}  // namespace gossip
