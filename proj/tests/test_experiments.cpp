#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cfvp/config.hpp"
#include "cfvp/errors.hpp"
#include "cfvp/experiments.hpp"

using namespace cfvp;

namespace {

std::vector<SweepPoint> series(std::vector<double> lambdas, std::vector<double> gs) {
  std::vector<SweepPoint> pts;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    SweepPoint p;
    p.k_a = 8;
    p.k_b = 8;
    p.lambda = lambdas[i];
    p.mean_g = gs[i];
    p.realizations = 100;
    pts.push_back(p);
  }
  return pts;
}

SweepConfig small_config() {
  SweepConfig c;
  c.n = 300;
  c.k_a = {4};
  c.k_b = {4};
  c.realizations = 8;
  c.lambda_grid = {0.0, 0.3, 0.6, 0.9};
  c.q_grid = {0.0, 0.5, 1.0};
  c.master_seed = 17;
  return c;
}

bool is_monotone(const std::vector<double>& v, bool increasing) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (increasing ? v[i] < v[i - 1] - 1e-12 : v[i] > v[i - 1] + 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("uniform_grid") {
  const auto g = uniform_grid(0.0, 1.0, 0.02);
  CHECK(g.size() == 51);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[3] == 0.06);
  CHECK(uniform_grid(0.0, 1.0, 0.1).size() == 11);
}

TEST_CASE("estimate_lambda_c") {
  SUBCASE("definition") {
    const auto pts = series({0.2, 0.4, 0.6, 0.8}, {0.9, 0.5, 0.002, 0.001});
    CHECK(estimate_lambda_c(pts, 0.005) == doctest::Approx(0.6));
  }
  SUBCASE("not reached") {
    const auto pts = series({0.2, 0.4}, {0.9, 0.5});
    CHECK_FALSE(estimate_lambda_c(pts, 0.005).has_value());
  }
  SUBCASE("a late bounce resets the threshold") {
    const auto pts = series({0.2, 0.4, 0.6, 0.8}, {0.9, 0.001, 0.01, 0.001});
    CHECK(estimate_lambda_c(pts, 0.005) == doctest::Approx(0.8));
  }
  SUBCASE("unsorted input") {
    const auto pts = series({0.4, 0.2}, {0.9, 0.5});
    CHECK_THROWS_AS(estimate_lambda_c(pts, 0.005), std::logic_error);
  }
}

TEST_CASE("isotonic_fit") {
  const std::vector<double> w(6, 1.0);
  SUBCASE("already monotone is unchanged") {
    const std::vector<double> v{0.1, 0.2, 0.2, 0.5, 0.7, 0.9};
    CHECK(isotonic_fit(v, w, true) == v);
  }
  SUBCASE("violators are pooled") {
    const std::vector<double> v{1.0, 0.0, 2.0, 4.0, 3.0, 5.0};
    const auto fit = isotonic_fit(v, w, true);
    CHECK(fit == std::vector<double>{0.5, 0.5, 2.0, 3.5, 3.5, 5.0});
  }
  SUBCASE("decreasing mirror") {
    const std::vector<double> v{5.0, 3.0, 4.0, 2.0, 0.0, 1.0};
    const auto fit = isotonic_fit(v, w, false);
    CHECK(fit == std::vector<double>{5.0, 3.5, 3.5, 2.0, 0.5, 0.5});
  }
  SUBCASE("fit is monotone and preserves the weighted mean") {
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> v(12);
      std::vector<double> wt(12);
      for (auto& x : v) x = std::uniform_real_distribution<double>(0, 1)(rng);
      for (auto& x : wt) x = std::uniform_real_distribution<double>(0.5, 2)(rng);
      const auto fit = isotonic_fit(v, wt, t % 2 == 0);
      CHECK(is_monotone(fit, t % 2 == 0));
      double a = 0;
      double b = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        a += wt[i] * v[i];
        b += wt[i] * fit[i];
      }
      CHECK(a == doctest::Approx(b));
    }
  }
}

TEST_CASE("config JSON") {
  SUBCASE("round trip") {
    auto c = small_config();
    c.strategy = IsolationKind::DegreeBased;
    const auto back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
  }
  SUBCASE("scalar degrees") {
    const auto c = config_from_json(nlohmann::json{{"k_a", 6}, {"k_b", {4, 8}}});
    CHECK(c.k_a == std::vector<int>{6});
    CHECK(c.k_b == std::vector<int>{4, 8});
  }
  auto field_of = [](const nlohmann::json& j) {
    try {
      config_from_json(j);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  CHECK(field_of({{"bogus", 1}}) == "bogus");
  CHECK(field_of({{"lambda", 1.5}}) == "lambda");
  CHECK(field_of({{"realizations", 0}}) == "realizations");
  CHECK(field_of({{"lambda_grid", {0.5, 0.1}}}) == "lambda_grid");
  CHECK(field_of({{"k_a", 5}}) == "k_a");
  CHECK(field_of({{"n", "big"}}) == "n");
  CHECK(field_of({{"strategy", "magic"}}) == "strategy");
  CHECK(field_of({{"sigma", -0.1}}) == "sigma");
}

TEST_CASE("sweep_lambda shape and trivial limit") {
  auto c = small_config();
  const auto pts = sweep_lambda(c, 1);
  REQUIRE(pts.size() == 4);
  for (const auto& p : pts) {
    CHECK(p.realizations == 8);
    CHECK(p.mean_g >= 0.0);
    CHECK(p.mean_g <= 1.0);
    CHECK(p.std_g >= 0.0);
  }
  CHECK(pts[0].lambda == 0.0);
  CHECK(pts[0].mean_g >= 1.0 - 10.0 / 300.0);
  CHECK(pts[0].mean_total_infected == 1.0);
}

TEST_CASE("sweep aggregates use the unbiased estimator") {
  auto c = small_config();
  c.lambda_grid = {0.45};
  const auto pts = sweep_lambda(c, 1);
  std::vector<double> g;
  for (int r = 0; r < c.realizations; ++r) {
    g.push_back(run_realization(c.n, 4, 4, 0.45, c.isolation(c.q),
                                realization_seed(c.master_seed, 0.45, static_cast<std::uint64_t>(r)))
                    .g_final);
  }
  double mean = 0;
  for (double x : g) mean += x;
  mean /= static_cast<double>(g.size());
  double ss = 0;
  for (double x : g) ss += (x - mean) * (x - mean);
  CHECK(pts[0].mean_g == doctest::Approx(mean));
  CHECK(pts[0].std_g == doctest::Approx(std::sqrt(ss / static_cast<double>(g.size() - 1))));
}

TEST_CASE("a single grid point reproduces in isolation") {
  auto c = small_config();
  const auto full = sweep_lambda(c, 2);
  c.lambda_grid = {0.6};
  const auto alone = sweep_lambda(c, 1);
  CHECK(alone[0].mean_g == full[2].mean_g);
  CHECK(alone[0].std_g == full[2].std_g);
}

TEST_CASE("sweep output does not depend on thread count") {
  auto c = small_config();
  c.k_a = {4, 6};
  std::ostringstream one;
  std::ostringstream four;
  write_sweep_lambda_csv(one, sweep_lambda(c, 1), c);
  write_sweep_lambda_csv(four, sweep_lambda(c, 4), c);
  CHECK(one.str() == four.str());
}

TEST_CASE("sweep_q") {
  auto c = small_config();
  CHECK_THROWS_AS(sweep_q(c, 1), ConfigError);
  c.strategy = IsolationKind::Deterministic;
  c.lambda = 0.5;
  const auto pts = sweep_q(c, 1);
  REQUIRE(pts.size() == 3);
  CHECK(pts[2].q == 1.0);
  CHECK(pts[2].mean_total_infected == 1.0);
}

TEST_CASE("timeseries_experiment") {
  auto c = small_config();
  c.k_a = {4, 6};
  SUBCASE("lambda 0") {
    c.lambda = 0.0;
    const auto ts = timeseries_experiment(c, 1);
    REQUIRE(ts.size() == 4);
    for (const auto& s : ts) {
      CHECK(s.mean_f_i_current.size() == 1);
      CHECK(s.mean_f_i_current[0] == 0.0);
      CHECK(s.mean_f_i_cumulative[0] == doctest::Approx(1.0 / 300.0));
    }
  }
  SUBCASE("modes alternate and cumulative series are non-decreasing") {
    c.lambda = 0.5;
    const auto ts = timeseries_experiment(c, 2);
    REQUIRE(ts.size() == 4);
    CHECK(ts[0].mode == "cfvp");
    CHECK(ts[1].mode == "single");
    CHECK(ts[2].k == 6);
    for (const auto& s : ts) {
      CHECK(s.final_cumulative.size() == 8);
      CHECK(is_monotone(s.mean_f_i_cumulative, true));
    }
  }
}

TEST_CASE("CSV writers embed the config and use the documented headers") {
  auto c = small_config();
  c.lambda_grid = {0.0, 0.9};
  const auto pts = sweep_lambda(c, 1);
  std::ostringstream out;
  write_sweep_lambda_csv(out, pts, c);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# config: {", 0) == 0);
  const auto echoed = nlohmann::json::parse(line.substr(10));
  CHECK(config_from_json(echoed).master_seed == 17);
  std::getline(in, line);
  CHECK(line == "# master_seed: 17");
  std::getline(in, line);
  CHECK(line == "k_a,k_b,strategy,q,lambda,mean_g,std_g,mean_total_infected,realizations");

  std::ostringstream lc;
  write_lambda_c_csv(lc, lambda_c_table(pts, c), c);
  CHECK(lc.str().find("k_a,k_b,lambda_c,epsilon,grid_step\n4,4,") != std::string::npos);
}
