#include "cfvp/engine.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "cfvp/errors.hpp"

namespace cfvp {

namespace {

double fraction(std::size_t count, NodeId n) {
  return n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
}

RunResult run_coupled(CoupledSystem& system, double lambda, const IsolationStrategy& strategy,
                      std::uint64_t seed, const TransmissionSource* forced,
                      std::optional<NodeId> seed_node) {
  strategy.validate();
  EpidemicState state(system.size(), lambda);
  if (!system.settled() || system.functional_count() != static_cast<std::size_t>(system.size())) {
    throw std::logic_error("run_cfvp: system is not fresh");
  }

  Rng epidemic = make_stream(seed, Stream::kEpidemic);
  Rng identification = make_stream(seed, Stream::kIdentification);

  if (seed_node) {
    if (*seed_node < 0 || *seed_node >= system.size()) {
      throw std::invalid_argument("seed node out of range");
    }
    state.set(*seed_node, Compartment::Infected);
  } else {
    seed_infection(state, epidemic);
  }
  state.q = assign_q(strategy, system.layer_a(), identification);

  std::bernoulli_distribution trial(lambda);
  const TransmissionSource random_transmit = [&](NodeId, NodeId) { return trial(epidemic); };
  const TransmissionSource& transmit = forced != nullptr ? *forced : random_transmit;

  RunResult result;
  result.seed = seed;
  std::size_t ever_infected = 1;
  const NodeId n = system.size();

  for (int stage = 1; state.count(Compartment::Infected) > 0; ++stage) {
    StageRecord rec;
    rec.stage = stage;

    if (strategy.active()) {
      const auto pruned = isolation_substage(
          state, system.layer_a(), epidemic,
          [&](NodeId u, NodeId v) { system.prune_edge_a(u, v); });
      rec.edges_pruned = pruned.size();
    }

    const auto spread = spread_substage(state, system.layer_a(), transmit);
    rec.newly_infected = spread.newly_infected.size();
    rec.virus_removed = spread.newly_removed.size();
    ever_infected += rec.newly_infected;
    rec.f_i_current = fraction(rec.newly_infected, n);
    rec.f_i_cumulative = fraction(ever_infected, n);

    const auto report = system.cascade(spread.newly_removed);
    for (const NodeId a : report.removed_a) {
      if (state.compartment(a) != Compartment::Removed) state.set(a, Compartment::Failed);
    }
    rec.cascade_removed_a = report.removed_a.size() - rec.virus_removed;
    rec.cascade_removed_b = report.removed_b.size();
    rec.functional_fraction = system.giant_fraction();
    result.stages.push_back(rec);
  }

  result.total_infected = ever_infected;
  result.g_final = result.stages.empty() ? system.giant_fraction()
                                         : result.stages.back().functional_fraction;
  result.collapsed = result.g_final == 0.0;
  return result;
}

}  // namespace

RunResult run_cfvp(CoupledSystem& system, double lambda, const IsolationStrategy& strategy,
                   std::uint64_t seed) {
  return run_coupled(system, lambda, strategy, seed, nullptr, std::nullopt);
}

RunResult run_with_forced_outcomes(CoupledSystem& system, const TransmissionScript& script,
                                   const IsolationStrategy& strategy, std::uint64_t seed) {
  const TransmissionSource replay = [&](NodeId from, NodeId to) {
    if (const auto it = script.outcomes.find({from, to}); it != script.outcomes.end()) {
      return it->second;
    }
    if (script.fallback) return *script.fallback;
    throw ScriptExhausted("no scripted outcome for transmission " + std::to_string(from) +
                          " -> " + std::to_string(to));
  };
  // lambda only matters for validation here; every draw comes from the script.
  return run_coupled(system, 1.0, strategy, seed, &replay, script.seed_node);
}

RunResult run_single_layer_sir(const Graph& graph, double lambda, std::uint64_t seed,
                               std::optional<NodeId> seed_node) {
  EpidemicState state(graph.size(), lambda);
  Rng epidemic = make_stream(seed, Stream::kEpidemic);
  if (seed_node) {
    if (*seed_node < 0 || *seed_node >= graph.size()) {
      throw std::invalid_argument("seed node out of range");
    }
    state.set(*seed_node, Compartment::Infected);
  } else {
    seed_infection(state, epidemic);
  }

  RunResult result;
  result.seed = seed;
  std::size_t ever_infected = 1;
  const NodeId n = graph.size();

  for (int stage = 1; state.count(Compartment::Infected) > 0; ++stage) {
    StageRecord rec;
    rec.stage = stage;
    const auto spread = spread_substage(state, graph, epidemic);
    rec.newly_infected = spread.newly_infected.size();
    rec.virus_removed = spread.newly_removed.size();
    ever_infected += rec.newly_infected;
    rec.f_i_current = fraction(rec.newly_infected, n);
    rec.f_i_cumulative = fraction(ever_infected, n);
    rec.functional_fraction = fraction(
        state.count(Compartment::Susceptible) + state.count(Compartment::Infected), n);
    result.stages.push_back(rec);
  }

  result.total_infected = ever_infected;
  result.g_final = result.stages.back().functional_fraction;
  result.collapsed = result.g_final == 0.0;
  return result;
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << kTraceHeader << '\n';
  for (const auto& r : result.stages) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.stage, r.newly_infected, r.virus_removed,
                       r.cascade_removed_a, r.cascade_removed_b, r.edges_pruned, r.f_i_current,
                       r.f_i_cumulative, r.functional_fraction);
  }
}

}  // namespace cfvp
