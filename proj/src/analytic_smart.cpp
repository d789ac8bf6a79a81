#include "gossip/analytic_smart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gossip {

namespace {

void check_occupancy_domain(std::int64_t empty, std::int64_t groups,
                            std::int64_t group_size, std::int64_t bins) {
  if (group_size < 1 || bins <= group_size) {
    throw DomainError("occupancy requires n > k >= 1");
  }
  if (empty < 0 || empty > bins - group_size || groups < 1) {
    throw DomainError("occupancy requires 0 <= v <= n - k and r >= 1");
  }
}

// sum_{i} (-1)^i C(M, i) P[M - i] for i = 0..M - k, where P[t] = C(t, k)^r.
mpz_class alternating_occupancy_sum(std::int64_t filled,
                                    std::int64_t group_size,
                                    const std::vector<mpz_class>& powers) {
  mpz_class sum = 0;
  mpz_class choose = 1;  // C(filled, i)
  for (std::int64_t i = 0; i <= filled - group_size; ++i) {
    if (i % 2 == 0) {
      sum += choose * powers[filled - i];
    } else {
      sum -= choose * powers[filled - i];
    }
    choose *= filled - i;
    choose /= i + 1;
  }
  return sum;
}

std::vector<mpz_class> group_powers(std::int64_t bins, std::int64_t group_size,
                                    std::int64_t groups) {
  std::vector<mpz_class> powers(static_cast<std::size_t>(bins + 1));
  for (std::int64_t t = group_size; t <= bins; ++t) {
    powers[t] = power(binomial_exact(t, group_size), groups);
  }
  return powers;
}

double log_binomial(std::int64_t n, std::int64_t k) {
  return std::lgamma(static_cast<double>(n + 1)) -
         std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

std::vector<double> to_double(const std::vector<mpq_class>& row) {
  std::vector<double> out;
  out.reserve(row.size());
  for (const auto& x : row) out.push_back(x.get_d());
  return out;
}

}  // namespace

mpq_class occupancy_exactly_empty_exact(std::int64_t empty, std::int64_t groups,
                                        std::int64_t group_size,
                                        std::int64_t bins) {
  check_occupancy_domain(empty, groups, group_size, bins);
  const std::int64_t filled = bins - empty;
  const auto powers = group_powers(filled, group_size, groups);
  mpq_class p(binomial_exact(bins, empty) *
                  alternating_occupancy_sum(filled, group_size, powers),
              power(binomial_exact(bins, group_size), groups));
  p.canonicalize();
  return p;
}

double occupancy_exactly_empty(std::int64_t empty, std::int64_t groups,
                               std::int64_t group_size, std::int64_t bins,
                               Arithmetic arithmetic) {
  if (arithmetic == Arithmetic::rational) {
    return occupancy_exactly_empty_exact(empty, groups, group_size, bins)
        .get_d();
  }
  check_occupancy_domain(empty, groups, group_size, bins);
  const std::int64_t filled = bins - empty;
  const double log_lead = log_binomial(bins, empty);
  double sum = 0.0;
  double largest = 0.0;
  for (std::int64_t i = 0; i <= filled - group_size; ++i) {
    const double ratio = binomial_ratio(filled - i, bins, group_size);
    if (ratio == 0.0) continue;
    const double term =
        std::exp(log_lead + log_binomial(filled, i) +
                 static_cast<double>(groups) * std::log(ratio));
    largest = std::max(largest, term);
    sum += (i % 2 == 0) ? term : -term;
  }
  const double error_bound = largest * static_cast<double>(filled + 1) * 1e-14;
  if (sum < -1e-12 || error_bound > 1e-9) {
    std::ostringstream msg;
    msg << "occupancy p_" << empty << "(" << groups << ", " << group_size
        << ", " << bins << ") lost precision in floating mode (sum " << sum
        << ", error bound " << error_bound << "); use rational mode";
    throw NumericalInstabilityError(msg.str());
  }
  return std::clamp(sum, 0.0, 1.0);
}

std::vector<mpq_class> smart_transition_row_exact(std::int64_t active,
                                                  std::int64_t num_nodes,
                                                  std::int64_t fanout) {
  if (active < 1 || active > num_nodes || fanout < 1) {
    throw DomainError("smart transition row requires 1 <= x_i <= N, k >= 1");
  }
  std::vector<mpq_class> row(static_cast<std::size_t>(num_nodes));
  const std::int64_t unqueried = num_nodes - active;
  if (unqueried <= fanout) {
    row[num_nodes - 1] = 1;
    return row;
  }
  const auto powers = group_powers(unqueried, fanout, active);
  const mpz_class denominator = powers[unqueried];
  for (std::int64_t next = active + fanout; next <= num_nodes; ++next) {
    const std::int64_t empty = num_nodes - next;
    const std::int64_t filled = unqueried - empty;
    if (filled > fanout * active) continue;
    mpq_class p(binomial_exact(unqueried, empty) *
                    alternating_occupancy_sum(filled, fanout, powers),
                denominator);
    p.canonicalize();
    row[next - 1] = p;
  }
  return row;
}

std::vector<double> smart_transition_row(std::int64_t active,
                                         std::int64_t num_nodes,
                                         std::int64_t fanout,
                                         Arithmetic arithmetic) {
  if (arithmetic == Arithmetic::rational) {
    return to_double(smart_transition_row_exact(active, num_nodes, fanout));
  }
  if (active < 1 || active > num_nodes || fanout < 1) {
    throw DomainError("smart transition row requires 1 <= x_i <= N, k >= 1");
  }
  std::vector<double> row(static_cast<std::size_t>(num_nodes), 0.0);
  const std::int64_t unqueried = num_nodes - active;
  if (unqueried <= fanout) {
    row[num_nodes - 1] = 1.0;
    return row;
  }
  for (std::int64_t next = active + fanout; next <= num_nodes; ++next) {
    if (next - active > fanout * active) continue;
    row[next - 1] = occupancy_exactly_empty(num_nodes - next, active, fanout,
                                            unqueried, Arithmetic::floating);
  }
  return row;
}

std::vector<double> cooperation_mixing(const std::vector<double>& row,
                                       std::int64_t active,
                                       double cooperation) {
  const auto order = static_cast<std::int64_t>(row.size());
  if (cooperation == 1.0) return row;
  std::vector<double> out(row.size(), 0.0);
  const std::int64_t reach = order - active;
  // pmf[d][a] = B(d, a, c), built by the Pascal recurrence.
  std::vector<std::vector<double>> pmf(static_cast<std::size_t>(reach + 1));
  pmf[0] = {1.0};
  for (std::int64_t d = 1; d <= reach; ++d) {
    pmf[d].assign(static_cast<std::size_t>(d + 1), 0.0);
    for (std::int64_t a = 0; a < d; ++a) {
      pmf[d][a] += pmf[d - 1][a] * (1.0 - cooperation);
      pmf[d][a + 1] += pmf[d - 1][a] * cooperation;
    }
  }
  for (std::int64_t d = 0; d <= reach; ++d) {
    const double p = row[active - 1 + d];
    if (p == 0.0) continue;
    for (std::int64_t a = 0; a <= d; ++a) out[active - 1 + a] += p * pmf[d][a];
  }
  return out;
}

TransitionMatrix build_transition_matrix(const SearchConfig& config,
                                         const SmartOptions& options) {
  config.validate();
  const std::int64_t n = config.num_nodes;
  if (n > options.size_budget) {
    std::ostringstream msg;
    msg << "smart transition matrix for N=" << n << " exceeds the budget of "
        << options.size_budget
        << " nodes; use simulation or the blind analytic model instead";
    throw SizeBudgetError(msg.str());
  }
  const double c = config.cooperation;
  TransitionMatrix matrix(n);
  for (std::int64_t from = 1; from <= n; ++from) {
    if (options.arithmetic == Arithmetic::rational && (c == 1.0 || c == 0.0)) {
      std::vector<mpq_class> row;
      if (c == 1.0) {
        row = smart_transition_row_exact(from, n, config.fanout);
      } else {
        row.assign(static_cast<std::size_t>(n), mpq_class(0));
        row[from - 1] = 1;
      }
      matrix.set_row_exact(from, row);
    } else {
      matrix.set_row(from, cooperation_mixing(
                               smart_transition_row(from, n, config.fanout,
                                                    options.arithmetic),
                               from, c));
    }
  }
  return matrix;
}

double clamped_search_success(std::int64_t num_nodes, std::int64_t active,
                              std::int64_t fanout, std::int64_t copies) {
  const std::int64_t candidates = num_nodes - active;
  if (copies > candidates) return 1.0;
  const std::int64_t queries = std::min(fanout, candidates);
  return 1.0 - binomial_ratio(candidates - copies, candidates, queries);
}

SmartModel::SmartModel(const SearchConfig& config, const SmartOptions& options)
    : config_(config), matrix_(build_transition_matrix(config, options)) {
  if (config.stifler_mode()) {
    throw ConfigError("the smart analytic model has no stifler variant");
  }
  for (std::int64_t v = 1; v <= config.num_nodes; ++v) {
    search_success_.push_back(clamped_search_success(
        config.num_nodes, v, config.fanout, config.copies));
  }
}

double SmartModel::success_given(const Eigen::RowVectorXd& distribution) const {
  double s = 0.0;
  for (Eigen::Index j = 0; j < distribution.size(); ++j) {
    const double p = distribution(j);
    if (p == 0.0) continue;
    s += p * (1.0 - std::pow(1.0 - search_success_[j],
                             static_cast<double>(j + 1)));
  }
  return s;
}

double SmartModel::success_by_round(std::int64_t round) const {
  if (round < 1) throw ConfigError("round must be at least 1");
  return success_given(matrix_.first_row_power(round - 1));
}

std::int64_t SmartModel::support_bound() const noexcept {
  if (config_.cooperation != 1.0) return 0;
  return (config_.num_nodes - 1 + config_.fanout - 1) / config_.fanout;
}

RoundPmf SmartModel::round_pmf() const {
  Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(matrix_.order());
  dist(0) = 1.0;
  auto success = [&](std::int64_t) {
    const double s = success_given(dist);
    dist = dist * matrix_.values();
    return s;
  };
  return gossip::round_pmf(success, config_.epsilon, config_.round_cap,
                           support_bound());
}

SearchMetrics SmartModel::metrics() const {
  Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(matrix_.order());
  dist(0) = 1.0;
  std::vector<double> weights;
  auto success = [&](std::int64_t) {
    const double s = success_given(dist);
    dist = dist * matrix_.values();
    weights.push_back(mean_state(dist));
    return s;
  };
  const RoundPmf pmf = gossip::round_pmf(success, config_.epsilon,
                                         config_.round_cap, support_bound());
  return metrics_from_pmf(pmf, weights, ModelSource::analytic_smart);
}

double smart_success_by_round(const SearchConfig& config, std::int64_t round,
                              const SmartOptions& options) {
  return SmartModel(config, options).success_by_round(round);
}

SearchMetrics smart_metrics(const SearchConfig& config,
                            const SmartOptions& options) {
  return SmartModel(config, options).metrics();
}

}  // namespace gossip
