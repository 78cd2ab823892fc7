#pragma once

#include <span>
#include <vector>

#include "cfvp/graph.hpp"
#include "cfvp/random.hpp"

namespace cfvp {

// Nodes removed by one cascade, in removal order. `rounds` counts the
// A->B and B->A half-steps that removed at least one node.
struct CascadeReport {
  int rounds = 0;
  std::vector<NodeId> removed_a;
  std::vector<NodeId> removed_b;

  bool empty() const noexcept { return removed_a.empty() && removed_b.empty(); }
};

// The functional part of one layer: its giant component, provided that
// component has at least one edge. An isolated node is not a giant component,
// so a layer reduced to singletons has no functional nodes.
std::vector<NodeId> functional_core(const Graph& g);

// Two equal-size layers with one-to-one dependency links. A node pair is
// functional while both partners are alive.
class CoupledSystem {
 public:
  // coupling[i] is the B-partner of A-node i and must be a permutation;
  // empty means identity.
  CoupledSystem(Graph layer_a, Graph layer_b, std::vector<NodeId> coupling = {});

  NodeId size() const noexcept { return layer_a_.size(); }
  const Graph& layer_a() const noexcept { return layer_a_; }
  const Graph& layer_b() const noexcept { return layer_b_; }

  NodeId partner_of_a(NodeId a) const { return a_to_b_[static_cast<std::size_t>(a)]; }
  NodeId partner_of_b(NodeId b) const { return b_to_a_[static_cast<std::size_t>(b)]; }

  bool functional(NodeId a) const { return layer_a_.alive(a); }
  std::size_t functional_count() const noexcept { return layer_a_.alive_node_count(); }
  std::vector<NodeId> functional_nodes_a() const;
  std::vector<NodeId> functional_nodes_b() const;

  // True when no cascade step would remove anything.
  bool settled() const noexcept { return !dirty_a_ && !dirty_b_; }

  // Removes an edge of layer A (adaptive isolation). Leaves the system
  // unsettled until the next cascade.
  void prune_edge_a(NodeId u, NodeId v);

  // Fails `seed_failures_a` and propagates to the mutual fixed point:
  // dependency kills A->B, prune B to its core, dependency kills B->A, prune
  // A to its core, repeated until nothing changes. Throws std::logic_error if
  // a seed is not functional.
  CascadeReport cascade(std::span<const NodeId> seed_failures_a);

  // Functional fraction measured on layer A / layer B. Throws std::logic_error
  // when the system is not at a cascade fixed point.
  double giant_fraction() const;
  double giant_fraction_b() const;

 private:
  bool prune_to_core(Graph& layer, std::vector<NodeId>& removed);

  Graph layer_a_;
  Graph layer_b_;
  std::vector<NodeId> a_to_b_;
  std::vector<NodeId> b_to_a_;
  bool dirty_a_ = true;
  bool dirty_b_ = true;
};

// Two independent BA layers (A drawn first, then B) with identity coupling.
CoupledSystem build_system(const DegreeSpec& spec_a, const DegreeSpec& spec_b, Rng& rng);

}  // namespace cfvp
