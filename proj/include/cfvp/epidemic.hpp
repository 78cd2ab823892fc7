#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "cfvp/graph.hpp"
#include "cfvp/random.hpp"

namespace cfvp {

// Removed: taken out by the virus (I -> R). Failed: taken out by a cascade.
enum class Compartment : std::uint8_t { Susceptible, Infected, Removed, Failed };

enum class IsolationKind { None, Deterministic, DegreeBased };

std::string_view to_string(IsolationKind kind);
// Accepts "none", "deterministic", "degree" (and "degree_based").
IsolationKind parse_isolation_kind(std::string_view text);

struct IsolationStrategy {
  IsolationKind kind = IsolationKind::None;
  double q = 0.0;      // mean identification probability
  double sigma = 0.0;  // Gaussian spread, DegreeBased only

  void validate() const;
  bool active() const noexcept { return kind != IsolationKind::None; }
};

// SIR state of layer A with delta = 1: every infected node spreads for one
// stage and is then removed.
class EpidemicState {
 public:
  EpidemicState(NodeId n, double lambda);

  NodeId size() const noexcept { return static_cast<NodeId>(compartment_.size()); }
  double lambda() const noexcept { return lambda_; }
  static constexpr double delta() noexcept { return 1.0; }

  Compartment compartment(NodeId v) const { return compartment_[static_cast<std::size_t>(v)]; }
  void set(NodeId v, Compartment c);
  std::size_t count(Compartment c) const { return counts_[static_cast<std::size_t>(c)]; }

  // Currently infected nodes, ascending.
  std::vector<NodeId> infected() const;

  // Per-node identification probability; all zero until assigned.
  std::vector<double> q;

 private:
  std::vector<Compartment> compartment_;
  std::size_t counts_[4] = {0, 0, 0, 0};
  double lambda_;
};

// Identification probabilities for `graph`'s nodes.
//   None          -> 0 everywhere
//   Deterministic -> q everywhere
//   DegreeBased   -> n draws from Normal(q, sigma), sorted ascending and handed
//                    out by ascending degree (ties by id), then clamped to [0,1]
// Degrees are read from `graph` as given, so pass the unpruned layer.
std::vector<double> assign_q(const IsolationStrategy& strategy, const Graph& graph, Rng& rng);

// Infects one node chosen uniformly over all nodes.
NodeId seed_infection(EpidemicState& state, Rng& rng);

// Decides one transmission attempt from an infected node to a susceptible one.
using TransmissionSource = std::function<bool(NodeId from, NodeId to)>;

struct SpreadOutcome {
  std::vector<NodeId> newly_infected;  // ascending
  std::vector<NodeId> newly_removed;   // the previous infected set, ascending
};

// Synchronous spreading step. One trial per alive I-S edge, evaluated for
// infected nodes in ascending id and, within each, neighbors in ascending id.
// All currently infected nodes then become Removed and the hit susceptibles
// become Infected. Throws std::logic_error if nothing is infected.
SpreadOutcome spread_substage(EpidemicState& state, const Graph& graph,
                              const TransmissionSource& transmit);
SpreadOutcome spread_substage(EpidemicState& state, const Graph& graph, Rng& rng);

// Adaptive isolation. Each susceptible node with at least one alive infected
// neighbor, in ascending id, draws Bernoulli(q_i); on success it drops the edge
// to one infected neighbor picked uniformly. `prune` performs the removal.
// Returns the pruned edges as (susceptible, infected) pairs.
std::vector<Edge> isolation_substage(const EpidemicState& state, const Graph& graph, Rng& rng,
                                     const std::function<void(NodeId, NodeId)>& prune);
// Same, removing edges from `graph` directly.
std::vector<Edge> isolation_substage(const EpidemicState& state, Graph& graph, Rng& rng);

}  // namespace cfvp
