#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "gossip/config.hpp"
#include "gossip/core_math.hpp"
#include "gossip/markov.hpp"
#include "gossip/rational.hpp"

namespace gossip {

/// Row i of the exact blind chain (every query is answered, c = 1): each of
/// the i active nodes queries k distinct nodes among its N - 1 neighbours.
/// Index j - 1 holds the probability of reaching j active nodes.
///
/// Rational route: inclusion-exclusion over the set of newly hit nodes,
///   P(i -> i+w) = C(I, w) sum_{l<=w} (-1)^l C(w, l) g(I - w + l),
/// where I = N - i and g(t) = [C(N-1-t, k) / C(N-1, k)]^i is the chance that
/// t given inactive nodes all go unqueried.
std::vector<mpq_class> exact_blind_transition_row_exact(std::int64_t active,
                                                        std::int64_t num_nodes,
                                                        std::int64_t fanout);

/// Floating route: a positive-term recursion over the active nodes (how
/// many inactive nodes each one hits, then how many of those are new), so
/// it stays stable where the alternating sum cancels catastrophically.
std::vector<double> exact_blind_transition_row(
    std::int64_t active, std::int64_t num_nodes, std::int64_t fanout,
    Arithmetic arithmetic = Arithmetic::rational);

/// Which active count is credited to a discovery at round r.
enum class ActiveWeighting {
  at_discovery,  // state entered by the transition in which the file is found
  unconditional, // mean of Q^r(1, .), ignoring the discovery condition
};

/// Conventions of the baseline against which the approximation is scored.
struct ExactBaseline {
  std::int64_t extra_nodes = 0;  // chain evaluated on N + extra_nodes nodes
  ActiveWeighting weighting = ActiveWeighting::at_discovery;

  /// Convention reproducing the reference accuracy tables: the chain counts
  /// N non-initiator nodes and E[A] uses unconditional round means.
  static ExactBaseline reference_table() {
    return {1, ActiveWeighting::unconditional};
  }
};

struct ExactOptions {
  Arithmetic arithmetic = Arithmetic::rational;
  std::int64_t size_budget = kDefaultExactBudget;
  ExactBaseline baseline{};
};

/// B(r) for r = 1..r_max; B(0) = 0 is implicit.
struct FindByCurve {
  std::vector<double> find_by;

  RoundPmf pmf(double epsilon) const;
};

class ExactBlindModel {
 public:
  explicit ExactBlindModel(const SearchConfig& config,
                           const ExactOptions& options = {});

  std::int64_t chain_nodes() const noexcept { return chain_nodes_; }
  const TransitionMatrix& matrix() const noexcept { return matrix_; }

  /// Probability that none of the other active nodes holds the file.
  double not_found(std::int64_t active) const noexcept {
    return not_found_[active - 1];
  }

  /// B(r) = sum_i [1 - C(N-i, m) / C(N-1, m)] Q^r(1, i), with Q^r by
  /// repeated squaring.
  double find_by(std::int64_t round) const;

  /// B(1), B(2), ... until 1 - B(r) < epsilon.
  FindByCurve find_by_curve() const;

  SearchMetrics metrics() const;

 private:
  SearchConfig config_;
  ExactOptions options_;
  std::int64_t chain_nodes_;
  TransitionMatrix matrix_;
  std::vector<double> not_found_;
};

TransitionMatrix build_exact_blind_matrix(std::int64_t num_nodes,
                                          std::int64_t fanout,
                                          const ExactOptions& options = {});

double exact_find_by(const SearchConfig& config, std::int64_t round,
                     const ExactOptions& options = {});
SearchMetrics exact_metrics(const SearchConfig& config,
                            const ExactOptions& options = {});

struct MetricAccuracy {
  double exact = 0.0;
  double approx = 0.0;
  double percent = 0.0;  // rounded to two decimals
};

struct AccuracyReport {
  MetricAccuracy rounds;
  MetricAccuracy active;
};

/// (1 - |exact - approx| / exact) * 100, clamped to [0, 100] and rounded to
/// two decimals. Throws DomainError when exact is zero.
double relative_accuracy_percent(double exact, double approx);

AccuracyReport relative_accuracy(const SearchMetrics& exact,
                                 const SearchMetrics& approx);

}  // namespace gossip
