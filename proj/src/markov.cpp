#include "gossip/markov.hpp"

#include <cmath>
#include <stdexcept>

namespace gossip {

TransitionMatrix::TransitionMatrix(std::int64_t order)
    : order_(order),
      values_(Eigen::MatrixXd::Zero(order, order)),
      exact_(std::vector<mpq_class>(static_cast<std::size_t>(order * order))) {}

void TransitionMatrix::set_row(std::int64_t from,
                               const std::vector<double>& row) {
  if (static_cast<std::int64_t>(row.size()) != order_) {
    throw std::logic_error("transition row has the wrong length");
  }
  for (std::int64_t j = 0; j < order_; ++j) values_(from - 1, j) = row[j];
  exact_.reset();
}

void TransitionMatrix::set_row_exact(std::int64_t from,
                                     const std::vector<mpq_class>& row) {
  if (static_cast<std::int64_t>(row.size()) != order_) {
    throw std::logic_error("transition row has the wrong length");
  }
  for (std::int64_t j = 0; j < order_; ++j) {
    values_(from - 1, j) = row[j].get_d();
    if (exact_) (*exact_)[(from - 1) * order_ + j] = row[j];
  }
}

bool TransitionMatrix::rows_sum_to_one_exactly() const {
  if (!exact_) throw std::logic_error("matrix carries no rational entries");
  for (std::int64_t i = 0; i < order_; ++i) {
    mpq_class sum = 0;
    for (std::int64_t j = 0; j < order_; ++j) sum += (*exact_)[i * order_ + j];
    if (sum != 1) return false;
  }
  return true;
}

double TransitionMatrix::max_row_sum_deviation() const {
  return (values_.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

bool TransitionMatrix::is_upper_triangular() const {
  for (std::int64_t i = 0; i < order_; ++i)
    for (std::int64_t j = 0; j < i; ++j)
      if (values_(i, j) != 0.0) return false;
  return true;
}

Eigen::RowVectorXd TransitionMatrix::first_row_power(
    std::int64_t rounds) const {
  Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(order_);
  dist(0) = 1.0;
  for (std::int64_t r = 0; r < rounds; ++r) dist = dist * values_;
  return dist;
}

Eigen::MatrixXd TransitionMatrix::power(std::int64_t rounds) const {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(order_, order_);
  Eigen::MatrixXd base = values_;
  while (rounds > 0) {
    if (rounds & 1) result = result * base;
    rounds >>= 1;
    if (rounds > 0) base = base * base;
  }
  return result;
}

double mean_state(const Eigen::RowVectorXd& distribution) {
  double mean = 0.0;
  for (Eigen::Index j = 0; j < distribution.size(); ++j) {
    mean += static_cast<double>(j + 1) * distribution(j);
  }
  return mean;
}

}  // namespace gossip
