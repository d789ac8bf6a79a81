#include <doctest.h>

#include <cmath>
#include <cstring>

#include "gossip/analytic_blind.hpp"

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

double exponent(double n, double k) {
  return k / (n - 1) + k * k / (2 * (n - 1) * (n - 1));
}

}  // namespace

TEST_CASE("rounding is to the nearest integer with ties up, clamped") {
  CHECK(round_active(1.49, 10) == 1);
  CHECK(round_active(1.5, 10) == 2);
  CHECK(round_active(2.5, 10) == 3);
  CHECK(round_active(9.7, 10) == 10);
  CHECK(round_active(0.2, 10) == 1);
  CHECK(round_active(10.4, 10) == 10);
}

TEST_CASE("cooperative trajectory examples") {
  const auto none = cooperative_trajectory(make(10, 1, 1, 0.0), 30);
  for (auto a : none.rounded) CHECK(a == 1);

  const auto t = cooperative_trajectory(make(10, 1, 1), 3);
  CHECK(t.raw[0] == 1.0);
  const double a2 = 10.0 - 9.0 * std::exp(-exponent(10, 1));
  CHECK(t.raw[1] == doctest::Approx(a2).epsilon(1e-14));
  CHECK(t.raw[1] == doctest::Approx(1.996).epsilon(1e-3));
  CHECK(t.rounded[1] == 2);
}

TEST_CASE("N is a fixed point of the recursion") {
  for (double c : {0.3, 1.0}) {
    ActiveRecursion rec(make(10, 2, 1, c), Behaviour::cooperative);
    for (int i = 0; i < 10000 && rec.current() < 10.0 - 1e-12; ++i) rec.advance();
    REQUIRE(rec.current() == doctest::Approx(10.0).epsilon(1e-12));
    for (int i = 0; i < 5; ++i) {
      rec.advance();
      CHECK(rec.current() == doctest::Approx(10.0).epsilon(1e-12));
      CHECK(rec.current_rounded() == 10);
    }
  }
}

TEST_CASE("stifler trajectory examples") {
  const auto t = stifler_trajectory(make(10, 1, 1, 1.0, 0.5), 3);
  const double a2 = 1.0 + 4.5 - 4.5 * std::exp(-exponent(10, 1));
  CHECK(t.raw[1] == doctest::Approx(a2).epsilon(1e-14));
  CHECK(t.raw[1] == doctest::Approx(1.498).epsilon(1e-3));
  CHECK(t.rounded[1] == 1);

  const auto full = stifler_trajectory(make(10, 1, 1, 1.0, 1.0), 20);
  for (double a : full.raw) CHECK(a == 1.0);
}

TEST_CASE("stifler recursion at s = 0 is bitwise the cooperative one at c = 1") {
  for (std::int64_t n : {2, 10, 37, 50, 1000, 100000}) {
    for (std::int64_t k : {1, 3}) {
      if (k >= n) continue;
      const auto a = cooperative_trajectory(make(n, k, 1), 200);
      const auto b = stifler_trajectory(make(n, k, 1), 200);
      REQUIRE(a.raw.size() == b.raw.size());
      CHECK(std::memcmp(a.raw.data(), b.raw.data(), a.raw.size() * sizeof(double)) == 0);
      CHECK(a.rounded == b.rounded);
    }
  }
}

TEST_CASE("trajectories stay inside [1, N]; c = 1 is non-decreasing and reaches N") {
  for (std::int64_t n : {5, 10, 50, 500}) {
    for (double c : {0.1, 0.5, 1.0}) {
      const auto t = cooperative_trajectory(make(n, 1, 1, c), 400);
      for (std::size_t r = 0; r < t.raw.size(); ++r) {
        CHECK(t.raw[r] >= 1.0);
        CHECK(t.raw[r] <= static_cast<double>(n));
        if (c == 1.0 && r > 0) CHECK(t.raw[r] >= t.raw[r - 1]);
      }
      if (c == 1.0) CHECK(t.rounded.back() == n);
    }
    for (double s : {0.2, 0.8}) {
      const auto t = stifler_trajectory(make(n, 1, 1, 1.0, s), 400);
      for (double a : t.raw) {
        CHECK(a >= 1.0);
        CHECK(a <= static_cast<double>(n));
      }
    }
  }
}

TEST_CASE("trajectory builders enforce their behaviour") {
  CHECK_THROWS_AS(cooperative_trajectory(make(10, 1, 1, 1.0, 0.3), 5), ConfigError);
  CHECK_THROWS_AS(stifler_trajectory(make(10, 1, 1, 0.5, 0.0), 5), ConfigError);
}

TEST_CASE("blind pmf edge cases") {
  const auto all = blind_round_pmf(make(10, 1, 9));
  REQUIRE(all.pmf.r_max() == 1);
  CHECK(all.pmf.probabilities[0] == 1.0);
  CHECK(all.pmf.residual == 0.0);

  for (auto [n, k, m] : {std::tuple{10, 1, 1}, std::tuple{20, 3, 2}, std::tuple{7, 2, 3}}) {
    const auto geo = blind_round_pmf(make(n, k, m, 0.0));
    const double ps = single_search_success(n, k, m);
    for (std::int64_t r = 1; r <= geo.pmf.r_max(); ++r) {
      CHECK(geo.pmf.probabilities[r - 1] ==
            doctest::Approx(std::pow(1 - ps, r - 1) * ps).epsilon(1e-12));
    }
    CHECK(geo.trajectory.raw.size() == static_cast<std::size_t>(geo.pmf.r_max() + 1));
  }
}

TEST_CASE("blind metrics: geometric limit and bounds") {
  CHECK(std::abs(blind_metrics(make(10, 1, 1, 0.0)).mean_rounds - 9.0) < 2e-4);
  auto tight = make(10, 1, 1, 0.0);
  tight.epsilon = 1e-14;
  CHECK(std::abs(blind_metrics(tight).mean_rounds - 9.0) < 1e-9);

  const auto one = blind_metrics(make(10, 2, 9));
  CHECK(one.mean_rounds == 1.0);
  CHECK(one.mean_active == 3.0);

  for (std::int64_t n : {10, 30, 50}) {
    for (double c : {0.0, 0.5, 1.0}) {
      const auto m = blind_metrics(make(n, 1, 1, c));
      CHECK(m.mean_rounds >= 1.0);
      CHECK(m.mean_active >= 1.0 - 1e-6);
      CHECK(m.mean_active <= static_cast<double>(n));
    }
  }
}

TEST_CASE("mean rounds fall as m, k or c grow") {
  for (std::int64_t n = 10; n <= 50; ++n) {
    for (double c : {0.25, 0.5, 0.75}) {
      const double base = blind_metrics(make(n, 1, 1, c)).mean_rounds;
      CHECK(blind_metrics(make(n, 1, 3, c)).mean_rounds <= base);
      CHECK(blind_metrics(make(n, 3, 1, c)).mean_rounds <= base);
      CHECK(blind_metrics(make(n, 1, 1, c + 0.25)).mean_rounds <= base);
    }
    CHECK(blind_metrics(make(n, 3, 3)).mean_rounds <= blind_metrics(make(n, 1, 3)).mean_rounds);
    CHECK(blind_metrics(make(n, 3, 3)).mean_rounds <= blind_metrics(make(n, 3, 1)).mean_rounds);
  }
}

TEST_CASE("heavy stifling approaches the single-searcher limit") {
  for (std::int64_t n : {10, 50}) {
    for (std::int64_t m : {1, 3}) {
      const auto metrics = blind_metrics(make(n, 1, m, 1.0, 0.999));
      const double limit = static_cast<double>(n - 1) / static_cast<double>(m);
      CHECK(std::abs(metrics.mean_rounds - limit) / limit < 0.02);
    }
  }
}

TEST_CASE("large N stays cheap and finite") {
  const auto m = blind_metrics(make(100000, 1, 1));
  CHECK(std::isfinite(m.mean_rounds));
  CHECK(m.mean_rounds > 10.0);
  CHECK(m.mean_active > 1000.0);
}
