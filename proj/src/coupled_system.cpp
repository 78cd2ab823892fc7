#include "cfvp/coupled_system.hpp"

#include <stdexcept>
#include <string>
#include <utility>

#include "cfvp/errors.hpp"

namespace cfvp {

std::vector<NodeId> functional_core(const Graph& g) {
  auto core = giant_component(g);
  if (core.size() < 2) core.clear();
  return core;
}

namespace {

std::vector<NodeId> identity_coupling(NodeId n) {
  std::vector<NodeId> perm(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  return perm;
}

bool is_core(const Graph& g) {
  return functional_core(g).size() == g.alive_node_count();
}

}  // namespace

CoupledSystem::CoupledSystem(Graph layer_a, Graph layer_b, std::vector<NodeId> coupling)
    : layer_a_(std::move(layer_a)), layer_b_(std::move(layer_b)), a_to_b_(std::move(coupling)) {
  if (layer_a_.size() != layer_b_.size()) {
    throw ConfigError("n", "layer sizes differ: " + std::to_string(layer_a_.size()) + " vs " +
                               std::to_string(layer_b_.size()));
  }
  const auto n = static_cast<std::size_t>(layer_a_.size());
  if (a_to_b_.empty()) a_to_b_ = identity_coupling(layer_a_.size());
  if (a_to_b_.size() != n) throw ConfigError("coupling", "length does not match layer size");
  b_to_a_.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    const NodeId b = a_to_b_[a];
    if (b < 0 || static_cast<std::size_t>(b) >= n || b_to_a_[static_cast<std::size_t>(b)] != -1) {
      throw ConfigError("coupling", "not a permutation");
    }
    b_to_a_[static_cast<std::size_t>(b)] = static_cast<NodeId>(a);
  }

  bool partners_agree = true;
  for (NodeId a = 0; a < layer_a_.size(); ++a) {
    partners_agree = partners_agree && layer_a_.alive(a) == layer_b_.alive(partner_of_a(a));
  }
  // Fresh connected layers start at a fixed point; anything else is settled by
  // the first cascade.
  const bool fixed = partners_agree && is_core(layer_a_) && is_core(layer_b_);
  dirty_a_ = !fixed;
  dirty_b_ = !fixed;
}

std::vector<NodeId> CoupledSystem::functional_nodes_a() const {
  std::vector<NodeId> out;
  for (NodeId a = 0; a < size(); ++a) {
    if (layer_a_.alive(a)) out.push_back(a);
  }
  return out;
}

std::vector<NodeId> CoupledSystem::functional_nodes_b() const {
  std::vector<NodeId> out;
  for (NodeId b = 0; b < size(); ++b) {
    if (layer_b_.alive(b)) out.push_back(b);
  }
  return out;
}

void CoupledSystem::prune_edge_a(NodeId u, NodeId v) {
  layer_a_.remove_edge(u, v);
  dirty_a_ = true;
}

bool CoupledSystem::prune_to_core(Graph& layer, std::vector<NodeId>& removed) {
  const auto core = functional_core(layer);
  if (core.size() == layer.alive_node_count()) return false;
  std::vector<bool> keep(static_cast<std::size_t>(layer.size()), false);
  for (const NodeId v : core) keep[static_cast<std::size_t>(v)] = true;
  for (NodeId v = 0; v < layer.size(); ++v) {
    if (layer.alive(v) && !keep[static_cast<std::size_t>(v)]) {
      layer.remove_node(v);
      removed.push_back(v);
    }
  }
  return true;
}

CascadeReport CoupledSystem::cascade(std::span<const NodeId> seed_failures_a) {
  for (std::size_t i = 0; i < seed_failures_a.size(); ++i) {
    const NodeId s = seed_failures_a[i];
    if (s < 0 || s >= size() || !layer_a_.alive(s)) {
      throw std::logic_error("cascade: seed failure " + std::to_string(s) + " is not functional");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (seed_failures_a[j] == s) {
        throw std::logic_error("cascade: seed failure " + std::to_string(s) + " listed twice");
      }
    }
  }

  CascadeReport report;
  for (const NodeId s : seed_failures_a) {
    layer_a_.remove_node(s);
    report.removed_a.push_back(s);
    dirty_a_ = true;
  }

  while (true) {
    bool changed = false;

    const auto b_before = report.removed_b.size();
    for (NodeId a = 0; a < size(); ++a) {
      const NodeId b = partner_of_a(a);
      if (!layer_a_.alive(a) && layer_b_.alive(b)) {
        layer_b_.remove_node(b);
        report.removed_b.push_back(b);
        dirty_b_ = true;
      }
    }
    if (dirty_b_) {
      prune_to_core(layer_b_, report.removed_b);
      dirty_b_ = false;
    }
    if (report.removed_b.size() != b_before) {
      ++report.rounds;
      changed = true;
    }

    const auto a_before = report.removed_a.size();
    for (NodeId b = 0; b < size(); ++b) {
      const NodeId a = partner_of_b(b);
      if (!layer_b_.alive(b) && layer_a_.alive(a)) {
        layer_a_.remove_node(a);
        report.removed_a.push_back(a);
        dirty_a_ = true;
      }
    }
    if (dirty_a_) {
      prune_to_core(layer_a_, report.removed_a);
      dirty_a_ = false;
    }
    if (report.removed_a.size() != a_before) {
      ++report.rounds;
      changed = true;
    }

    if (!changed) break;
  }
  return report;
}

double CoupledSystem::giant_fraction() const {
  if (!settled()) throw std::logic_error("giant_fraction: system is not at a cascade fixed point");
  if (size() == 0) return 0.0;
  return static_cast<double>(layer_a_.alive_node_count()) / static_cast<double>(size());
}

double CoupledSystem::giant_fraction_b() const {
  if (!settled()) throw std::logic_error("giant_fraction_b: system is not at a cascade fixed point");
  if (size() == 0) return 0.0;
  return static_cast<double>(layer_b_.alive_node_count()) / static_cast<double>(size());
}

CoupledSystem build_system(const DegreeSpec& spec_a, const DegreeSpec& spec_b, Rng& rng) {
  if (spec_a.n != spec_b.n) {
    throw ConfigError("n", "layer sizes differ: " + std::to_string(spec_a.n) + " vs " +
                               std::to_string(spec_b.n));
  }
  Graph a = generate_ba(spec_a, rng);
  Graph b = generate_ba(spec_b, rng);
  return CoupledSystem(std::move(a), std::move(b));
}

}  // namespace cfvp
