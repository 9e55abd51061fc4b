#include "cigmine/cig.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "cigmine/interval_tree.hpp"

namespace cigmine {

NodeLabel node_label_of(const TemporalEdge& e, const SymbolTable& symbols) {
  NodeLabel label{e.attr_u, e.attr_e, e.attr_v, e.duration};
  if (symbols.attributes.name(label.attr_v) < symbols.attributes.name(label.attr_u))
    std::swap(label.attr_u, label.attr_v);
  return label;
}

Cig::Cig(SymbolTablePtr symbols) : symbols_(std::move(symbols)) {
  if (!symbols_) throw std::invalid_argument("Cig requires a symbol table");
}

NodeId Cig::add_node(NodeLabel label, std::optional<std::size_t> source_edge) {
  nodes_.push_back(CigNode{label, source_edge});
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Cig::add_edge(NodeId from, NodeId to, double delay) {
  if (from >= nodes_.size() || to >= nodes_.size())
    throw std::invalid_argument("edge endpoint out of range");
  if (from == to) throw std::invalid_argument("self edge");
  if (find_edge(from, to)) throw std::invalid_argument("node pair already connected");
  edges_.push_back(CigEdge{from, to, delay});
  out_[from].push_back(edges_.size() - 1);
  in_[to].push_back(edges_.size() - 1);
}

std::optional<std::size_t> Cig::find_edge(NodeId a, NodeId b) const {
  for (std::size_t e : out_.at(a))
    if (edges_[e].to == b) return e;
  for (std::size_t e : in_.at(a))
    if (edges_[e].from == b) return e;
  return std::nullopt;
}

Cig construct_cig(const TemporalNetwork& network, double epsilon) {
  Cig g(network.symbols_ptr());
  std::unordered_map<VertexId, IntervalTree> trees;
  std::vector<IntervalTree::Entry> hits;
  const auto edges = network.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const TemporalEdge& e = edges[i];
    const NodeId node = g.add_node(node_label_of(e, network.symbols()), i);
    const Interval interval = e.interval();
    const Interval query{interval.lo - epsilon, interval.hi + epsilon};

    hits.clear();
    if (auto it = trees.find(e.u); it != trees.end()) it->second.search_all(query, hits);
    if (auto it = trees.find(e.v); it != trees.end()) it->second.search_all(query, hits);
    // An earlier edge sharing both endpoints is reported twice.
    std::sort(hits.begin(), hits.end(),
              [](const auto& a, const auto& b) { return a.payload < b.payload; });
    hits.erase(std::unique(hits.begin(), hits.end(),
                           [](const auto& a, const auto& b) { return a.payload == b.payload; }),
               hits.end());
    for (const auto& hit : hits) {
      const auto earlier = static_cast<NodeId>(hit.payload);
      g.add_edge(earlier, node, e.start - edges[earlier].start);
    }
    trees[e.u].insert(interval, i);
    trees[e.v].insert(interval, i);
  }
  return g;
}

Cig induced_subgraph(const Cig& g, std::span<const NodeId> nodes) {
  Cig sub(g.symbols_ptr());
  std::unordered_map<NodeId, NodeId> position;
  for (NodeId n : nodes) {
    if (!position.emplace(n, sub.node_count()).second)
      throw std::invalid_argument("induced_subgraph: repeated node");
    sub.add_node(g.node(n).label, g.node(n).source_edge);
  }
  for (const auto& e : g.edges()) {
    auto a = position.find(e.from);
    auto b = position.find(e.to);
    if (a != position.end() && b != position.end()) sub.add_edge(a->second, b->second, e.delay);
  }
  return sub;
}

bool is_connected(const Cig& g) {
  if (g.node_count() == 0) return false;
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    auto visit = [&](NodeId m) {
      if (!seen[m]) {
        seen[m] = 1;
        ++reached;
        stack.push_back(m);
      }
    };
    for (std::size_t e : g.out_edges(n)) visit(g.edge(e).to);
    for (std::size_t e : g.in_edges(n)) visit(g.edge(e).from);
  }
  return reached == g.node_count();
}

TemporalNetwork reconstruct(const Cig& pattern, const Support& support, double epsilon) {
  const std::size_t k = pattern.node_count();
  if (support.network == nullptr) throw std::invalid_argument("reconstruct: support has no network");
  if (support.edges.size() != k)
    throw CorruptEmbedding("support maps " + std::to_string(support.edges.size()) +
                           " nodes, pattern has " + std::to_string(k));
  if (!is_connected(pattern)) throw ValidationError("reconstruct: pattern is not connected");
  for (const auto& e : pattern.edges())
    if (e.delay == kUniformDelay)
      throw ValidationError("reconstruct: pattern delays carry no magnitudes");

  const TemporalNetwork& origin = *support.network;
  std::vector<std::size_t> used = support.edges;
  std::sort(used.begin(), used.end());
  if (std::adjacent_find(used.begin(), used.end()) != used.end())
    throw CorruptEmbedding("support maps two pattern nodes to one temporal edge");
  for (NodeId n = 0; n < k; ++n) {
    if (support.edges[n] >= origin.size()) throw CorruptEmbedding("support edge out of range");
    if (!(node_label_of(origin.edge(support.edges[n]), origin.symbols()) == pattern.node(n).label))
      throw CorruptEmbedding("support edge label differs from pattern node " + std::to_string(n));
  }

  // Depth-first from node 0, following edges in both directions.
  std::vector<std::optional<double>> start(k);
  std::vector<char> visited(k, 0);
  std::vector<NodeId> stack{0};
  start[0] = 0.0;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (visited[v]) continue;
    visited[v] = 1;
    auto reach = [&](NodeId u, double s) {
      if (visited[u]) return;
      if (!start[u]) start[u] = s;
      stack.push_back(u);
    };
    for (std::size_t e : pattern.out_edges(v)) reach(pattern.edge(e).to, *start[v] + pattern.edge(e).delay);
    for (std::size_t e : pattern.in_edges(v)) reach(pattern.edge(e).from, *start[v] - pattern.edge(e).delay);
  }
  for (const auto& e : pattern.edges()) {
    // Sums of non-integral delays may differ from the direct difference by
    // rounding; allow a relative slack on top of epsilon.
    const double slack = epsilon + 1e-9 * std::max(1.0, std::abs(e.delay));
    if (std::abs(*start[e.to] - *start[e.from] - e.delay) > slack)
      throw CorruptEmbedding("pattern delays imply inconsistent start times");
  }

  const double base = **std::min_element(start.begin(), start.end());
  std::vector<TemporalEdge> edges;
  edges.reserve(k);
  for (NodeId n = 0; n < k; ++n) {
    TemporalEdge e = origin.edge(support.edges[n]);
    e.start = *start[n] - base;
    e.duration = pattern.node(n).label.duration;
    edges.push_back(e);
  }
  return TemporalNetwork(origin.name(), std::move(edges), origin.symbols_ptr());
}

TemporalNetwork anonymize_vertices(const TemporalNetwork& network) {
  SymbolTable& symbols = *network.symbols_ptr();
  std::unordered_map<VertexId, VertexId> renamed;
  auto rename = [&](VertexId v) {
    auto it = renamed.find(v);
    if (it != renamed.end()) return it->second;
    const VertexId fresh = symbols.vertices.intern("v" + std::to_string(renamed.size()));
    renamed.emplace(v, fresh);
    return fresh;
  };
  std::vector<TemporalEdge> edges;
  edges.reserve(network.size());
  for (TemporalEdge e : network.edges()) {
    e.u = rename(e.u);
    e.v = rename(e.v);
    edges.push_back(e);
  }
  return TemporalNetwork(network.name(), std::move(edges), network.symbols_ptr());
}

void write_cig(std::ostream& out, const Cig& g) {
  const auto& attrs = g.symbols().attributes;
  for (NodeId n = 0; n < g.node_count(); ++n) {
    const auto& l = g.node(n).label;
    out << "n " << n << ' ' << attrs.name(l.attr_u) << ' ' << attrs.name(l.attr_e) << ' '
        << attrs.name(l.attr_v) << ' ' << format_number(l.duration) << '\n';
  }
  std::vector<CigEdge> edges(g.edges().begin(), g.edges().end());
  std::sort(edges.begin(), edges.end(), [](const CigEdge& a, const CigEdge& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  for (const auto& e : edges) {
    out << "e " << e.from << ' ' << e.to << ' '
        << (e.delay == kUniformDelay ? std::string("*") : format_number(e.delay)) << '\n';
  }
}

std::string to_text(const Cig& g) {
  std::ostringstream out;
  write_cig(out, g);
  return out.str();
}

}  // namespace cigmine
