#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gossip/exact_blind.hpp"
#include "gossip/simulator.hpp"

using namespace gossip;

namespace {

SearchConfig make(std::int64_t n, std::int64_t k, std::int64_t m, double c = 1.0,
                  double s = 0.0) {
  SearchConfig cfg;
  cfg.num_nodes = n;
  cfg.fanout = k;
  cfg.copies = m;
  cfg.cooperation = c;
  cfg.stifling = s;
  return cfg;
}

}  // namespace

TEST_CASE("variant names round-trip") {
  CHECK(parse_variant("blind") == Variant::blind);
  CHECK(parse_variant("smart") == Variant::smart);
  CHECK(to_string(Variant::smart) == "smart");
  CHECK_THROWS_AS(parse_variant("clever"), ConfigError);
}

TEST_CASE("profiles follow the configuration") {
  const auto plain = BehaviorProfile::from_config(make(10, 1, 1, 0.4));
  CHECK(plain.mode == ProfileMode::plain);
  CHECK(plain.cooperation == 0.4);
  CHECK(plain.counting == ActiveCount::with_new_activations);
  const auto stif = BehaviorProfile::from_config(make(10, 1, 1, 1.0, 0.3));
  CHECK(stif.mode == ProfileMode::stifler);
  CHECK(stif.stifling == 0.3);
  CHECK(stif.counting == ActiveCount::searchers);
  BehaviorProfile bad;
  bad.cooperation = 0.5;
  bad.mode = ProfileMode::stifler;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("placements are sorted m-subsets of the non-initiators") {
  Rng rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto p = draw_placement(10, 4, rng);
    REQUIRE(p.size() == 4);
    CHECK(std::is_sorted(p.begin(), p.end()));
    CHECK(std::adjacent_find(p.begin(), p.end()) == p.end());
    CHECK(p.front() >= 1);
    CHECK(p.back() <= 9);
  }
}

TEST_CASE("querying everyone finds the file in the first round") {
  for (auto variant : {Variant::blind, Variant::smart}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Rng rng(seed);
      const auto cfg = make(12, 11, 1);
      const auto placement = draw_placement(12, 1, rng);
      const auto rec =
          simulate_search(cfg, variant, BehaviorProfile::from_config(cfg), placement, rng);
      CHECK(rec.rounds == 1);
      CHECK(rec.active_at_discovery == 12);
      CHECK(rec.queries_sent == 11);
    }
  }
}

TEST_CASE("every non-initiator holding the file gives one round") {
  Rng rng(3);
  const auto cfg = make(9, 1, 8);
  for (int t = 0; t < 100; ++t) {
    const auto placement = draw_placement(9, 8, rng);
    CHECK(simulate_search(cfg, Variant::blind, BehaviorProfile::from_config(cfg), placement,
                          rng)
              .rounds == 1);
  }
}

TEST_CASE("replications are deterministic and independent of order") {
  const auto cfg = make(20, 2, 1, 0.7);
  const auto profile = BehaviorProfile::from_config(cfg);
  const auto a = simulate_replication(cfg, Variant::blind, profile, 42, 3, 5);
  const auto b = simulate_replication(cfg, Variant::blind, profile, 42, 3, 5);
  CHECK(a == b);
  CHECK(a.seed == replication_seed(42, 3, 5));
  CHECK(replication_seed(42, 3, 5) != replication_seed(42, 5, 3));
  CHECK(replication_seed(42, 0, 0) != replication_seed(43, 0, 0));

  const ExperimentPlan plan{6, 7, 99};
  const auto report = run_experiment(cfg, Variant::blind, profile, plan);
  CHECK(report.replications() == 42);
  auto shuffled = report.records;
  std::mt19937 shuffle_rng(1);
  std::shuffle(shuffled.begin(), shuffled.end(), shuffle_rng);
  const auto again = aggregate(cfg, Variant::blind, profile, plan, shuffled);
  CHECK(again.records == report.records);
  CHECK(again.rounds.mean == report.rounds.mean);
  CHECK(again.active.standard_error == report.active.standard_error);
  CHECK(again.queries.mean == report.queries.mean);
  CHECK(report.rng_algorithm == kRngAlgorithm);
}

TEST_CASE("report means are plain averages of the records") {
  const auto cfg = make(15, 1, 2, 0.6);
  const auto report = run_experiment(cfg, Variant::smart, BehaviorProfile::from_config(cfg),
                                     ExperimentPlan{5, 9, 11});
  double rounds = 0, active = 0, queries = 0;
  for (const auto& r : report.records) {
    rounds += static_cast<double>(r.rounds);
    active += static_cast<double>(r.active_at_discovery);
    queries += static_cast<double>(r.queries_sent);
  }
  const double n = static_cast<double>(report.records.size());
  CHECK(report.rounds.mean == doctest::Approx(rounds / n).epsilon(1e-14));
  CHECK(report.active.mean == doctest::Approx(active / n).epsilon(1e-14));
  CHECK(report.queries.mean == doctest::Approx(queries / n).epsilon(1e-14));
}

TEST_CASE("default plan has ten thousand replications") {
  const auto cfg = make(10, 1, 1);
  const auto report = run_experiment(cfg, Variant::blind, BehaviorProfile::from_config(cfg));
  CHECK(report.replications() == 10000);
}

TEST_CASE("run records respect their invariants") {
  for (auto variant : {Variant::blind, Variant::smart}) {
    for (double c : {1.0, 0.5, 0.0}) {
      const auto cfg = make(16, 2, 1, c);
      const auto report = run_experiment(cfg, variant, BehaviorProfile::from_config(cfg),
                                         ExperimentPlan{10, 20, 5});
      for (const auto& r : report.records) {
        CHECK(r.rounds >= 1);
        CHECK(r.active_at_discovery >= 1);
        CHECK(r.active_at_discovery <= 16);
        if (variant == Variant::blind) CHECK(r.queries_sent >= 2 * r.rounds);
      }
    }
    const auto stif = make(16, 1, 1, 1.0, 0.5);
    const auto report = run_experiment(stif, variant, BehaviorProfile::from_config(stif),
                                       ExperimentPlan{10, 20, 5});
    for (const auto& r : report.records) {
      CHECK(r.active_at_discovery >= 1);
      CHECK(r.active_at_discovery <= 16);
    }
  }
}

TEST_CASE("queries per round equal k times the searchers") {
  // With c = 0 only the initiator ever searches.
  const auto cfg = make(30, 3, 1, 0.0);
  const auto report = run_experiment(cfg, Variant::blind, BehaviorProfile::from_config(cfg),
                                     ExperimentPlan{5, 20, 8});
  for (const auto& r : report.records) {
    CHECK(r.queries_sent == 3 * r.rounds);
    CHECK(r.active_at_discovery == 1);
  }
}

TEST_CASE("smart search never exceeds its round bound") {
  for (std::int64_t k : {1, 2, 4}) {
    const auto cfg = make(13, k, 1);
    const auto report = run_experiment(cfg, Variant::smart, BehaviorProfile::from_config(cfg),
                                       ExperimentPlan{20, 50, 17});
    const std::int64_t bound = (13 - 1 + k - 1) / k;
    for (const auto& r : report.records) CHECK(r.rounds <= bound);
  }
}

TEST_CASE("blind simulation agrees with the exact chain") {
  const auto cfg = make(10, 1, 1);
  const auto report = run_experiment(cfg, Variant::blind, BehaviorProfile::from_config(cfg),
                                     ExperimentPlan{100, 100, 2024});
  const auto exact = exact_metrics(cfg);
  CHECK(std::abs(report.rounds.mean - exact.mean_rounds) < 3.0 * report.rounds.standard_error);
  CHECK(std::abs(report.active.mean - exact.mean_active) < 3.0 * report.active.standard_error);
}

TEST_CASE("decide-once makes plain non-cooperation slower") {
  const auto cfg = make(30, 1, 1, 0.5);
  auto profile = BehaviorProfile::from_config(cfg);
  const auto redecide = run_experiment(cfg, Variant::blind, profile, ExperimentPlan{50, 40, 3});
  profile.decide_once = true;
  const auto once = run_experiment(cfg, Variant::blind, profile, ExperimentPlan{50, 40, 3});
  CHECK(once.rounds.mean > redecide.rounds.mean);
  CHECK(once.active.mean < redecide.active.mean);
}

TEST_CASE("the round cap stops a runaway search") {
  auto cfg = make(200, 1, 1, 0.0);
  cfg.round_cap = 3;
  Rng rng(1);
  const std::vector<std::int64_t> placement{199};
  bool thrown = false;
  for (int t = 0; t < 20 && !thrown; ++t) {
    try {
      simulate_search(cfg, Variant::blind, BehaviorProfile::from_config(cfg), placement, rng);
    } catch (const NumericalInstabilityError&) {
      thrown = true;
    }
  }
  CHECK(thrown);
}

TEST_CASE("summary statistics") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto s = summarize(v);
  CHECK(s.mean == 2.5);
  CHECK(s.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(summarize(std::vector<double>{}).mean == 0.0);
}
