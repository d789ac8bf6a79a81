#include "gossip/exact_blind.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gossip {

namespace {

void check_row_domain(std::int64_t active, std::int64_t num_nodes,
                      std::int64_t fanout) {
  if (num_nodes < 2 || active < 1 || active > num_nodes || fanout < 1 ||
      fanout > num_nodes - 1) {
    throw DomainError("exact blind row requires 1 <= i <= N, 1 <= k <= N-1");
  }
}

// Pascal triangle in double, rows 0..n.
std::vector<std::vector<double>> pascal(std::int64_t n) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n + 1));
  for (std::int64_t a = 0; a <= n; ++a) {
    c[a].assign(static_cast<std::size_t>(a + 1), 1.0);
    for (std::int64_t b = 1; b < a; ++b) c[a][b] = c[a - 1][b - 1] + c[a - 1][b];
  }
  return c;
}

double choose(const std::vector<std::vector<double>>& c, std::int64_t n,
              std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  return c[n][k];
}

}  // namespace

std::vector<mpq_class> exact_blind_transition_row_exact(std::int64_t active,
                                                        std::int64_t num_nodes,
                                                        std::int64_t fanout) {
  check_row_domain(active, num_nodes, fanout);
  const std::int64_t inactive = num_nodes - active;
  const std::int64_t neighbours = num_nodes - 1;
  // miss[t] * denominator^-1 = g(t)
  std::vector<mpz_class> miss(static_cast<std::size_t>(inactive + 1));
  for (std::int64_t t = 0; t <= inactive; ++t) {
    miss[t] = power(binomial_exact(neighbours - t, fanout), active);
  }
  const mpz_class denominator = power(binomial_exact(neighbours, fanout), active);

  std::vector<mpq_class> row(static_cast<std::size_t>(num_nodes));
  for (std::int64_t hit = 0; hit <= inactive; ++hit) {
    if (hit > fanout * active) break;
    mpz_class sum = 0;
    mpz_class c = 1;  // C(hit, l)
    for (std::int64_t l = 0; l <= hit; ++l) {
      const mpz_class term = c * miss[inactive - hit + l];
      if (l % 2 == 0) sum += term; else sum -= term;
      c *= hit - l;
      c /= l + 1;
    }
    mpq_class p(binomial_exact(inactive, hit) * sum, denominator);
    p.canonicalize();
    row[active + hit - 1] = p;
  }
  return row;
}

std::vector<double> exact_blind_transition_row(std::int64_t active,
                                               std::int64_t num_nodes,
                                               std::int64_t fanout,
                                               Arithmetic arithmetic) {
  if (arithmetic == Arithmetic::rational) {
    const auto exact = exact_blind_transition_row_exact(active, num_nodes, fanout);
    std::vector<double> out;
    out.reserve(exact.size());
    for (const auto& x : exact) out.push_back(x.get_d());
    return out;
  }
  check_row_domain(active, num_nodes, fanout);
  const auto c = pascal(num_nodes);
  const std::int64_t inactive = num_nodes - active;
  const double all_choices = choose(c, num_nodes - 1, fanout);

  // Inactive nodes hit by one active node: hypergeometric over neighbours.
  std::vector<double> hits(static_cast<std::size_t>(fanout + 1), 0.0);
  for (std::int64_t h = 0; h <= fanout; ++h) {
    hits[h] = choose(c, inactive, h) * choose(c, active - 1, fanout - h) /
              all_choices;
  }

  // dist[u]: probability that u distinct inactive nodes are hit so far.
  std::vector<double> dist(static_cast<std::size_t>(inactive + 1), 0.0);
  dist[0] = 1.0;
  for (std::int64_t node = 0; node < active; ++node) {
    std::vector<double> next(dist.size(), 0.0);
    for (std::int64_t u = 0; u <= inactive; ++u) {
      if (dist[u] == 0.0) continue;
      for (std::int64_t h = 0; h <= std::min(fanout, inactive); ++h) {
        if (hits[h] == 0.0) continue;
        const double same = choose(c, inactive, h);
        for (std::int64_t fresh = 0; fresh <= h && u + fresh <= inactive;
             ++fresh) {
          const double p_fresh = choose(c, inactive - u, fresh) *
                                 choose(c, u, h - fresh) / same;
          next[u + fresh] += dist[u] * hits[h] * p_fresh;
        }
      }
    }
    dist = std::move(next);
  }
  std::vector<double> row(static_cast<std::size_t>(num_nodes), 0.0);
  for (std::int64_t u = 0; u <= inactive; ++u) row[active + u - 1] = dist[u];
  return row;
}

TransitionMatrix build_exact_blind_matrix(std::int64_t num_nodes,
                                          std::int64_t fanout,
                                          const ExactOptions& options) {
  if (num_nodes > options.size_budget) {
    std::ostringstream msg;
    msg << "exact blind chain on " << num_nodes << " nodes exceeds the budget"
        << " of " << options.size_budget
        << "; use the blind analytic model or simulation instead";
    throw SizeBudgetError(msg.str());
  }
  TransitionMatrix matrix(num_nodes);
  for (std::int64_t i = 1; i <= num_nodes; ++i) {
    if (options.arithmetic == Arithmetic::rational) {
      matrix.set_row_exact(i, exact_blind_transition_row_exact(i, num_nodes, fanout));
    } else {
      matrix.set_row(i, exact_blind_transition_row(i, num_nodes, fanout,
                                                   Arithmetic::floating));
    }
  }
  return matrix;
}

RoundPmf FindByCurve::pmf(double epsilon) const {
  RoundPmf out;
  out.epsilon = epsilon;
  double previous = 0.0;
  for (double b : find_by) {
    out.probabilities.push_back(b - previous);
    previous = b;
  }
  out.residual = 1.0 - previous;
  return out;
}

namespace {

std::int64_t checked_chain_nodes(const SearchConfig& config,
                                 const ExactOptions& options) {
  config.validate();
  if (config.cooperation != 1.0 || config.stifling != 0.0) {
    throw ConfigError("the exact blind model covers c = 1, s = 0 only");
  }
  if (options.baseline.extra_nodes < 0) {
    throw ConfigError("extra_nodes must be non-negative");
  }
  return config.num_nodes + options.baseline.extra_nodes;
}

}  // namespace

ExactBlindModel::ExactBlindModel(const SearchConfig& config,
                                 const ExactOptions& options)
    : config_(config),
      options_(options),
      chain_nodes_(checked_chain_nodes(config, options)),
      matrix_(build_exact_blind_matrix(chain_nodes_, config.fanout, options)) {
  for (std::int64_t i = 1; i <= chain_nodes_; ++i) {
    // C(N - i, m) / C(N - 1, m): the i - 1 non-initiator actives miss the file.
    not_found_.push_back(
        binomial_ratio(chain_nodes_ - i, chain_nodes_ - 1, config.copies));
  }
}

double ExactBlindModel::find_by(std::int64_t round) const {
  if (round < 0) throw ConfigError("round must be non-negative");
  if (round == 0) return 0.0;
  const Eigen::MatrixXd q = matrix_.power(round);
  double b = 0.0;
  for (std::int64_t i = 1; i <= chain_nodes_; ++i) {
    b += (1.0 - not_found(i)) * q(0, i - 1);
  }
  return b;
}

FindByCurve ExactBlindModel::find_by_curve() const {
  FindByCurve curve;
  Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(chain_nodes_);
  dist(0) = 1.0;
  const Eigen::Map<const Eigen::RowVectorXd> nf(not_found_.data(), chain_nodes_);
  for (std::int64_t r = 1; r <= config_.round_cap; ++r) {
    dist = dist * matrix_.values();
    const double survival = dist.dot(nf);
    curve.find_by.push_back(1.0 - survival);
    if (survival < config_.epsilon) return curve;
  }
  RoundPmf partial = curve.pmf(config_.epsilon);
  throw TruncationError("exact blind survival above epsilon at round cap",
                        std::move(partial));
}

SearchMetrics ExactBlindModel::metrics() const {
  const Eigen::Index n = chain_nodes_;
  const Eigen::Map<const Eigen::VectorXd> nf(not_found_.data(), n);
  Eigen::VectorXd state(n);
  for (Eigen::Index j = 0; j < n; ++j) state(j) = static_cast<double>(j + 1);
  const Eigen::VectorXd next_state_mean = matrix_.values() * state;
  const Eigen::VectorXd state_nf = state.cwiseProduct(nf);

  SearchMetrics out;
  out.source = ModelSource::exact_blind;
  Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(n);
  dist(0) = 1.0;
  double survival = 1.0;
  for (std::int64_t r = 1; r <= config_.round_cap; ++r) {
    const Eigen::RowVectorXd next = dist * matrix_.values();
    const double next_survival = next.dot(nf);
    const double found_now = survival - next_survival;
    out.mean_rounds += static_cast<double>(r) * found_now;
    if (options_.baseline.weighting == ActiveWeighting::at_discovery) {
      // sum_{i,j} d(i) Q(i,j) (nf(i) - nf(j)) j
      out.mean_active += dist.cwiseProduct(nf.transpose())
                             .dot(next_state_mean.transpose()) -
                         next.dot(state_nf);
    } else {
      out.mean_active += found_now * mean_state(next);
    }
    dist = next;
    survival = next_survival;
    if (survival < config_.epsilon) return out;
  }
  throw NumericalInstabilityError(
      "exact blind survival above epsilon at round cap");
}

double exact_find_by(const SearchConfig& config, std::int64_t round,
                     const ExactOptions& options) {
  return ExactBlindModel(config, options).find_by(round);
}

SearchMetrics exact_metrics(const SearchConfig& config,
                            const ExactOptions& options) {
  return ExactBlindModel(config, options).metrics();
}

double relative_accuracy_percent(double exact, double approx) {
  if (exact == 0.0) {
    throw DomainError("relative accuracy undefined for a zero exact value");
  }
  const double percent =
      std::clamp((1.0 - std::abs(exact - approx) / exact) * 100.0, 0.0, 100.0);
  return std::round(percent * 100.0) / 100.0;
}

AccuracyReport relative_accuracy(const SearchMetrics& exact,
                                 const SearchMetrics& approx) {
  AccuracyReport report;
  report.rounds = {exact.mean_rounds, approx.mean_rounds,
                   relative_accuracy_percent(exact.mean_rounds,
                                             approx.mean_rounds)};
  report.active = {exact.mean_active, approx.mean_active,
                   relative_accuracy_percent(exact.mean_active,
                                             approx.mean_active)};
  return report;
}

}  // namespace gossip
