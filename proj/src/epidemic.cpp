#include "cfvp/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cfvp/errors.hpp"

namespace cfvp {

std::string_view to_string(IsolationKind kind) {
  switch (kind) {
    case IsolationKind::None:
      return "none";
    case IsolationKind::Deterministic:
      return "deterministic";
    case IsolationKind::DegreeBased:
      return "degree";
  }
  return "none";
}

IsolationKind parse_isolation_kind(std::string_view text) {
  if (text == "none") return IsolationKind::None;
  if (text == "deterministic") return IsolationKind::Deterministic;
  if (text == "degree" || text == "degree_based") return IsolationKind::DegreeBased;
  throw ConfigError("strategy", "unknown strategy '" + std::string(text) +
                                    "' (expected none, deterministic or degree)");
}

void IsolationStrategy::validate() const {
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("q", "must lie in [0, 1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma", "must be >= 0");
}

EpidemicState::EpidemicState(NodeId n, double lambda)
    : compartment_(static_cast<std::size_t>(n), Compartment::Susceptible), lambda_(lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda", "must lie in [0, 1]");
  q.assign(static_cast<std::size_t>(n), 0.0);
  counts_[0] = static_cast<std::size_t>(n);
}

void EpidemicState::set(NodeId v, Compartment c) {
  auto& slot = compartment_[static_cast<std::size_t>(v)];
  --counts_[static_cast<std::size_t>(slot)];
  ++counts_[static_cast<std::size_t>(c)];
  slot = c;
}

std::vector<NodeId> EpidemicState::infected() const {
  std::vector<NodeId> out;
  out.reserve(count(Compartment::Infected));
  for (NodeId v = 0; v < size(); ++v) {
    if (compartment(v) == Compartment::Infected) out.push_back(v);
  }
  return out;
}

std::vector<double> assign_q(const IsolationStrategy& strategy, const Graph& graph, Rng& rng) {
  strategy.validate();
  const auto n = static_cast<std::size_t>(graph.size());
  switch (strategy.kind) {
    case IsolationKind::None:
      return std::vector<double>(n, 0.0);
    case IsolationKind::Deterministic:
      return std::vector<double>(n, strategy.q);
    case IsolationKind::DegreeBased:
      break;
  }

  std::vector<double> samples(n);
  if (strategy.sigma == 0.0) {
    std::fill(samples.begin(), samples.end(), strategy.q);
  } else {
    std::normal_distribution<double> normal(strategy.q, strategy.sigma);
    for (auto& s : samples) s = normal(rng);
  }
  std::sort(samples.begin(), samples.end());

  std::vector<NodeId> by_degree(n);
  std::iota(by_degree.begin(), by_degree.end(), NodeId{0});
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](NodeId a, NodeId b) { return graph.degree(a) < graph.degree(b); });

  std::vector<double> q(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    q[static_cast<std::size_t>(by_degree[rank])] = std::clamp(samples[rank], 0.0, 1.0);
  }
  return q;
}

NodeId seed_infection(EpidemicState& state, Rng& rng) {
  if (state.size() == 0) throw std::logic_error("seed_infection: empty network");
  if (state.count(Compartment::Susceptible) != static_cast<std::size_t>(state.size())) {
    throw std::logic_error("seed_infection: state is not fresh");
  }
  std::uniform_int_distribution<NodeId> pick(0, state.size() - 1);
  const NodeId seed = pick(rng);
  state.set(seed, Compartment::Infected);
  return seed;
}

SpreadOutcome spread_substage(EpidemicState& state, const Graph& graph,
                              const TransmissionSource& transmit) {
  SpreadOutcome out;
  out.newly_removed = state.infected();
  if (out.newly_removed.empty()) throw std::logic_error("spread_substage: no infected nodes");

  std::vector<bool> hit(static_cast<std::size_t>(state.size()), false);
  for (const NodeId i : out.newly_removed) {
    for (const auto& inc : graph.incident(i)) {
      if (!graph.edge_alive(inc.edge)) continue;
      if (state.compartment(inc.neighbor) != Compartment::Susceptible) continue;
      if (transmit(i, inc.neighbor)) hit[static_cast<std::size_t>(inc.neighbor)] = true;
    }
  }

  for (const NodeId i : out.newly_removed) state.set(i, Compartment::Removed);
  for (NodeId v = 0; v < state.size(); ++v) {
    if (hit[static_cast<std::size_t>(v)]) {
      state.set(v, Compartment::Infected);
      out.newly_infected.push_back(v);
    }
  }
  return out;
}

SpreadOutcome spread_substage(EpidemicState& state, const Graph& graph, Rng& rng) {
  std::bernoulli_distribution trial(state.lambda());
  return spread_substage(state, graph, [&](NodeId, NodeId) { return trial(rng); });
}

std::vector<Edge> isolation_substage(const EpidemicState& state, const Graph& graph, Rng& rng,
                                     const std::function<void(NodeId, NodeId)>& prune) {
  std::vector<Edge> pruned;
  std::vector<NodeId> infected_neighbors;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (NodeId s = 0; s < state.size(); ++s) {
    if (state.compartment(s) != Compartment::Susceptible || !graph.alive(s)) continue;
    infected_neighbors.clear();
    for (const auto& inc : graph.incident(s)) {
      if (graph.edge_alive(inc.edge) && state.compartment(inc.neighbor) == Compartment::Infected) {
        infected_neighbors.push_back(inc.neighbor);
      }
    }
    if (infected_neighbors.empty()) continue;

    const double q = state.q[static_cast<std::size_t>(s)];
    if (!(unit(rng) < q)) continue;
    std::uniform_int_distribution<std::size_t> pick(0, infected_neighbors.size() - 1);
    const NodeId target = infected_neighbors[pick(rng)];
    prune(s, target);
    pruned.emplace_back(s, target);
  }
  return pruned;
}

std::vector<Edge> isolation_substage(const EpidemicState& state, Graph& graph, Rng& rng) {
  return isolation_substage(state, graph, rng,
                            [&](NodeId u, NodeId v) { graph.remove_edge(u, v); });
}

}  // namespace cfvp
