#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cfvp/random.hpp"

namespace cfvp {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

// Barabasi-Albert parameters: `n` nodes, `m` edges per attached node.
struct DegreeSpec {
  NodeId n = 0;
  int m = 0;

  // <k> = 2m; odd averages are rejected.
  static DegreeSpec from_average_degree(NodeId n, int average_degree);
  void validate() const;
};

// Undirected simple graph with mask-based deletion. Node and edge ids are
// stable for the lifetime of the graph.
class Graph {
 public:
  struct Incidence {
    NodeId neighbor;
    EdgeId edge;
  };

  Graph() = default;
  explicit Graph(NodeId n);

  // Throws std::invalid_argument on self-loops, duplicates or bad ids.
  EdgeId add_edge(NodeId u, NodeId v);

  NodeId size() const noexcept { return static_cast<NodeId>(alive_node_.size()); }
  std::size_t edge_count() const noexcept { return endpoints_.size(); }
  std::size_t alive_edge_count() const noexcept { return alive_edges_; }
  std::size_t alive_node_count() const noexcept { return alive_nodes_; }

  bool alive(NodeId v) const { return alive_node_[static_cast<std::size_t>(v)]; }
  bool edge_alive(EdgeId e) const { return alive_edge_[static_cast<std::size_t>(e)]; }
  Edge endpoints(EdgeId e) const { return endpoints_[static_cast<std::size_t>(e)]; }

  // All incidences, dead ones included, ordered by neighbor id.
  std::span<const Incidence> incident(NodeId v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }

  // Number of alive incident edges.
  int degree(NodeId v) const { return degree_[static_cast<std::size_t>(v)]; }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;
  bool has_alive_edge(NodeId u, NodeId v) const;

  // Marks edge (u,v) dead. Throws std::logic_error if it is missing or dead.
  void remove_edge(NodeId u, NodeId v);
  // Marks the node and all of its incident edges dead.
  void remove_node(NodeId v);

  // Alive edges as (u,v) with u < v, sorted.
  std::vector<Edge> alive_edges() const;

 private:
  void kill_edge(EdgeId e);
  void check_node(NodeId v) const;

  std::vector<std::vector<Incidence>> adjacency_;
  std::vector<Edge> endpoints_;
  std::vector<bool> alive_node_;
  std::vector<bool> alive_edge_;
  std::vector<int> degree_;
  std::size_t alive_nodes_ = 0;
  std::size_t alive_edges_ = 0;
};

// Seed: complete graph on nodes 0..m-1. Every later node draws m distinct
// targets from the endpoint urn (one entry per edge endpoint), sampling
// uniformly and redrawing duplicates; its edges join the urn after the round.
// With m = 1 the urn starts empty and node 1 attaches to node 0.
Graph generate_ba(const DegreeSpec& spec, Rng& rng);

// Largest connected component of the alive subgraph, sorted ascending. Ties go
// to the component with the smallest node id.
std::vector<NodeId> giant_component(const Graph& g);

// "u v" per line; blank lines and lines starting with '#' are skipped.
Graph load_edge_list(std::istream& in);
// Canonical form: alive edges as sorted "u v" pairs with u < v, LF-terminated.
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace cfvp
