#include "cfvp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cfvp/errors.hpp"

namespace cfvp {

DegreeSpec DegreeSpec::from_average_degree(NodeId n, int average_degree) {
  if (average_degree <= 0 || average_degree % 2 != 0) {
    throw ConfigError("k", "average degree must be a positive even integer, got " +
                               std::to_string(average_degree));
  }
  DegreeSpec spec{n, average_degree / 2};
  spec.validate();
  return spec;
}

void DegreeSpec::validate() const {
  if (m < 1) throw ConfigError("m", "attachment count must be at least 1");
  if (n <= m) {
    throw ConfigError("n", "node count " + std::to_string(n) +
                               " must exceed attachment count " + std::to_string(m));
  }
}

Graph::Graph(NodeId n) {
  if (n < 0) throw std::invalid_argument("negative node count");
  const auto count = static_cast<std::size_t>(n);
  adjacency_.resize(count);
  alive_node_.assign(count, true);
  degree_.assign(count, 0);
  alive_nodes_ = count;
}

void Graph::check_node(NodeId v) const {
  if (v < 0 || v >= size()) {
    throw std::invalid_argument("node id " + std::to_string(v) + " out of range");
  }
}

EdgeId Graph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw std::invalid_argument("self-loop at node " + std::to_string(u));
  if (find_edge(u, v)) {
    throw std::invalid_argument("duplicate edge " + std::to_string(u) + " " +
                                std::to_string(v));
  }
  if (!alive(u) || !alive(v)) throw std::logic_error("edge to a dead node");

  const auto e = static_cast<EdgeId>(endpoints_.size());
  endpoints_.emplace_back(std::min(u, v), std::max(u, v));
  alive_edge_.push_back(true);
  ++alive_edges_;

  auto insert = [&](NodeId at, NodeId other) {
    auto& list = adjacency_[static_cast<std::size_t>(at)];
    auto pos = std::lower_bound(list.begin(), list.end(), other,
                                [](const Incidence& a, NodeId b) { return a.neighbor < b; });
    list.insert(pos, Incidence{other, e});
    ++degree_[static_cast<std::size_t>(at)];
  };
  insert(u, v);
  insert(v, u);
  return e;
}

std::optional<EdgeId> Graph::find_edge(NodeId u, NodeId v) const {
  const auto list = incident(u);
  auto pos = std::lower_bound(list.begin(), list.end(), v,
                              [](const Incidence& a, NodeId b) { return a.neighbor < b; });
  if (pos == list.end() || pos->neighbor != v) return std::nullopt;
  return pos->edge;
}

bool Graph::has_alive_edge(NodeId u, NodeId v) const {
  const auto e = find_edge(u, v);
  return e && edge_alive(*e);
}

void Graph::kill_edge(EdgeId e) {
  alive_edge_[static_cast<std::size_t>(e)] = false;
  --alive_edges_;
  const auto [u, v] = endpoints(e);
  --degree_[static_cast<std::size_t>(u)];
  --degree_[static_cast<std::size_t>(v)];
}

void Graph::remove_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  const auto e = find_edge(u, v);
  if (!e || !edge_alive(*e)) {
    throw std::logic_error("remove_edge: no alive edge " + std::to_string(u) + " " +
                           std::to_string(v));
  }
  kill_edge(*e);
}

void Graph::remove_node(NodeId v) {
  check_node(v);
  if (!alive(v)) throw std::logic_error("remove_node: node " + std::to_string(v) + " already dead");
  for (const auto& inc : incident(v)) {
    if (edge_alive(inc.edge)) kill_edge(inc.edge);
  }
  alive_node_[static_cast<std::size_t>(v)] = false;
  --alive_nodes_;
}

std::vector<Edge> Graph::alive_edges() const {
  std::vector<Edge> out;
  out.reserve(alive_edges_);
  for (std::size_t e = 0; e < endpoints_.size(); ++e) {
    if (alive_edge_[e]) out.push_back(endpoints_[e]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Graph generate_ba(const DegreeSpec& spec, Rng& rng) {
  spec.validate();
  const auto m = static_cast<NodeId>(spec.m);
  Graph g(spec.n);

  std::vector<NodeId> urn;
  urn.reserve(2 * static_cast<std::size_t>(spec.m) * static_cast<std::size_t>(spec.n));
  for (NodeId u = 0; u < m; ++u) {
    for (NodeId v = u + 1; v < m; ++v) {
      g.add_edge(u, v);
      urn.push_back(u);
      urn.push_back(v);
    }
  }

  std::vector<NodeId> targets;
  targets.reserve(static_cast<std::size_t>(m));
  for (NodeId node = m; node < spec.n; ++node) {
    targets.clear();
    if (urn.empty()) {
      targets.push_back(0);
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, urn.size() - 1);
      while (static_cast<NodeId>(targets.size()) < m) {
        const NodeId t = urn[pick(rng)];
        if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
      }
    }
    for (const NodeId t : targets) {
      g.add_edge(node, t);
      urn.push_back(node);
      urn.push_back(t);
    }
  }
  return g;
}

std::vector<NodeId> giant_component(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.size());
  std::vector<bool> seen(n, false);
  std::vector<NodeId> best;
  std::vector<NodeId> component;
  std::vector<NodeId> stack;

  // Roots are visited in ascending id, so the first component of a given size
  // is the one holding the smallest id; only strictly larger ones replace it.
  for (NodeId root = 0; root < g.size(); ++root) {
    if (!g.alive(root) || seen[static_cast<std::size_t>(root)]) continue;
    component.clear();
    stack.assign(1, root);
    seen[static_cast<std::size_t>(root)] = true;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (const auto& inc : g.incident(v)) {
        const auto w = static_cast<std::size_t>(inc.neighbor);
        if (!seen[w] && g.edge_alive(inc.edge)) {
          seen[w] = true;
          stack.push_back(inc.neighbor);
        }
      }
    }
    if (component.size() > best.size()) best.swap(component);
  }
  std::sort(best.begin(), best.end());
  return best;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

NodeId parse_id(std::string_view token, std::size_t line) {
  NodeId value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || value < 0) {
    throw ParseError(line, "expected a non-negative integer node id, got '" +
                               std::string(token) + "'");
  }
  return value;
}

}  // namespace

Graph load_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  NodeId max_id = -1;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(" \t", pos);
      if (start == std::string_view::npos) break;
      const auto stop = std::min(line.find_first_of(" \t", start), line.size());
      tokens.push_back(line.substr(start, stop - start));
      pos = stop;
    }
    if (tokens.size() != 2) throw ParseError(line_no, "expected exactly two node ids");

    const NodeId u = parse_id(tokens[0], line_no);
    const NodeId v = parse_id(tokens[1], line_no);
    if (u == v) throw ParseError(line_no, "self-loop at node " + std::to_string(u));
    edges.emplace_back(u, v);
    lines.push_back(line_no);
    max_id = std::max({max_id, u, v});
  }

  Graph g(max_id + 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [u, v] = edges[i];
    if (g.find_edge(u, v)) {
      throw ParseError(lines[i], "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    g.add_edge(u, v);
  }
  return g;
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& [u, v] : g.alive_edges()) out << u << ' ' << v << '\n';
}

}  // namespace cfvp
