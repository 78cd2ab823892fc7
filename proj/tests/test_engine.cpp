#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cfvp/engine.hpp"
#include "cfvp/errors.hpp"
#include "test_support.hpp"

using namespace cfvp;

namespace {

void check_record_invariants(const RunResult& r) {
  double previous = 1.0;
  for (const auto& s : r.stages) {
    CHECK(s.f_i_current >= 0.0);
    CHECK(s.f_i_current <= 1.0);
    CHECK(s.f_i_cumulative <= 1.0);
    CHECK(s.functional_fraction <= previous);
    previous = s.functional_fraction;
  }
  CHECK(r.g_final == r.stages.back().functional_fraction);
  CHECK(r.collapsed == (r.g_final == 0.0));
}

bool same_result(const RunResult& a, const RunResult& b) {
  std::ostringstream ta;
  std::ostringstream tb;
  write_trace_csv(ta, a);
  write_trace_csv(tb, b);
  return ta.str() == tb.str() && a.g_final == b.g_final && a.total_infected == b.total_infected &&
         a.collapsed == b.collapsed;
}

}  // namespace

TEST_CASE("run_cfvp: lambda 0 ends after one stage") {
  Rng rng(1);
  auto s = build_system({500, 3}, {500, 3}, rng);
  const auto r = run_cfvp(s, 0.0, {}, 77);
  REQUIRE(r.stages.size() == 1);
  CHECK(r.stages[0].virus_removed == 1);
  CHECK(r.total_infected == 1);
  const auto collateral = r.stages[0].cascade_removed_a;
  CHECK(r.g_final == doctest::Approx(1.0 - (1.0 + static_cast<double>(collateral)) / 500.0));
}

TEST_CASE("run_cfvp rejects lambda outside [0,1]") {
  Rng rng(1);
  auto s = build_system({50, 2}, {50, 2}, rng);
  CHECK_THROWS_AS(run_cfvp(s, 1.5, {}, 1), ConfigError);
  CHECK_THROWS_AS(run_cfvp(s, -0.5, {}, 1), ConfigError);
}

TEST_CASE("reference system replay gives the committed trace") {
  auto s = test_support::reference_system();
  const auto r = run_with_forced_outcomes(s, test_support::reference_script());
  CHECK(r.stages.size() == 3);
  CHECK(r.g_final == 0.0);
  CHECK(r.collapsed);
  CHECK(r.total_infected == 3);

  std::ostringstream csv;
  write_trace_csv(csv, r);
  CHECK(csv.str() == test_support::read_file(test_support::data_path("reference/trace.csv")));
}

TEST_CASE("forced replay with a missing outcome fails loudly") {
  auto s = test_support::reference_system();
  auto script = test_support::reference_script();
  script.outcomes.erase({2, 4});
  CHECK_THROWS_AS(run_with_forced_outcomes(s, script), ScriptExhausted);
}

TEST_CASE("all-success script equals run_cfvp with lambda 1") {
  for (std::uint64_t seed : {3u, 8u, 21u}) {
    Rng ra(seed);
    Rng rb(seed);
    auto sa = build_system({300, 2}, {300, 3}, ra);
    auto sb = build_system({300, 2}, {300, 3}, rb);
    const auto forced = run_with_forced_outcomes(sa, TransmissionScript::all(true), {}, seed);
    const auto random = run_cfvp(sb, 1.0, {}, seed);
    CHECK(same_result(forced, random));
  }
}

TEST_CASE("all-failure script on an isolated pair is a single stage") {
  Graph a(2);
  a.add_edge(0, 1);
  CoupledSystem s(a, a);
  const auto r = run_with_forced_outcomes(s, TransmissionScript::all(false));
  CHECK(r.stages.size() == 1);
  CHECK(r.g_final == 0.0);
}

TEST_CASE("run_cfvp invariants over assorted runs") {
  Rng rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    const NodeId n = std::uniform_int_distribution<NodeId>(20, 300)(rng);
    const int ma = std::uniform_int_distribution<int>(1, 4)(rng);
    const int mb = std::uniform_int_distribution<int>(1, 4)(rng);
    const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto kind = static_cast<IsolationKind>(trial % 3);
    const IsolationStrategy strategy{kind, std::uniform_real_distribution<double>(0.0, 1.0)(rng), 0.3};
    auto s = build_system({n, ma}, {n, mb}, rng);
    const auto r = run_cfvp(s, lambda, strategy, rng());

    check_record_invariants(r);
    CHECK(s.giant_fraction() == s.giant_fraction_b());
    CHECK(r.g_final == s.giant_fraction());
    CHECK(r.stages.size() <= static_cast<std::size_t>(n));
    std::size_t ever = 1;
    for (const auto& st : r.stages) ever += st.newly_infected;
    CHECK(r.total_infected == ever);
    if (kind == IsolationKind::None) {
      for (const auto& st : r.stages) CHECK(st.edges_pruned == 0);
    }
  }
}

TEST_CASE("run_cfvp is deterministic for a given seed") {
  auto once = [] {
    Rng rng(404);
    auto s = build_system({800, 3}, {800, 4}, rng);
    return run_cfvp(s, 0.4, {IsolationKind::DegreeBased, 0.3, 0.3}, 9001);
  };
  CHECK(same_result(once(), once()));
}

TEST_CASE("deterministic isolation with q = 1 stops the virus at the seed") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = build_system({400, 4}, {400, 4}, rng);
    const auto r = run_cfvp(s, 0.9, {IsolationKind::Deterministic, 1.0, 0.0}, rng());
    CHECK(r.total_infected == 1);
    CHECK(r.stages.size() == 1);
    CHECK(r.stages[0].edges_pruned > 0);
  }
}

TEST_CASE("run_single_layer_sir") {
  Rng rng(12);
  SUBCASE("lambda 0") {
    const auto g = generate_ba({100, 2}, rng);
    const auto r = run_single_layer_sir(g, 0.0, 5);
    CHECK(r.stages.size() == 1);
    CHECK(r.total_infected == 1);
    CHECK(r.g_final == doctest::Approx(0.99));
  }
  SUBCASE("lambda 1 reaches everyone, one BFS layer per stage") {
    Graph path(6);
    for (NodeId v = 0; v + 1 < 6; ++v) path.add_edge(v, v + 1);
    const auto r = run_single_layer_sir(path, 1.0, 5);
    CHECK(r.total_infected == 6);
    CHECK(r.g_final == 0.0);
    const auto g = generate_ba({300, 2}, rng);
    CHECK(run_single_layer_sir(g, 1.0, 8).total_infected == 300);
  }
  SUBCASE("star with hub seeded: E[total] = 1 + 4.5") {
    Graph star(10);
    for (NodeId v = 1; v < 10; ++v) star.add_edge(0, v);
    const int want = 10000;
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < want; ++seed) {
      sum += static_cast<double>(run_single_layer_sir(star, 0.5, seed, 0).total_infected);
    }
    const double sigma = std::sqrt(9 * 0.25 / want);
    CHECK(std::abs(sum / want - 5.5) < 3 * sigma);
  }
}

TEST_CASE("trace CSV header and rows") {
  auto s = test_support::reference_system();
  const auto r = run_with_forced_outcomes(s, test_support::reference_script());
  std::ostringstream csv;
  write_trace_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == kTraceHeader);
}
