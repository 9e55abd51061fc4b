#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cigmine/temporal.hpp"

namespace cigmine {

using NodeId = std::uint32_t;

/// Delay class shared by every edge once delay magnitudes are discarded
/// (sequence-preserving modes). Real delays are never negative.
inline constexpr double kUniformDelay = -1.0;

/// `attr_u-attr_e-attr_v-duration` quadruple of a CIG node. The endpoint
/// attributes are kept in name order so that the label does not depend on
/// which endpoint happens to sort first.
struct NodeLabel {
  AttrId attr_u = 0;
  AttrId attr_e = 0;
  AttrId attr_v = 0;
  double duration = 0.0;  // raw duration or duration class

  friend bool operator==(const NodeLabel&, const NodeLabel&) = default;
  friend auto operator<=>(const NodeLabel&, const NodeLabel&) = default;
};

NodeLabel node_label_of(const TemporalEdge& e, const SymbolTable& symbols);

struct CigNode {
  NodeLabel label;
  std::optional<std::size_t> source_edge;  // index into the origin network
};

struct CigEdge {
  NodeId from = 0;  // earlier-starting temporal edge
  NodeId to = 0;
  double delay = 0.0;  // start(to) - start(from), or a delay class
};

/// Thrown when a support does not fit the pattern it claims to support.
class CorruptEmbedding : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constrained interval graph: one node per temporal edge, one directed edge
/// per pair of overlapping temporal edges that share an endpoint vertex.
/// At most one edge joins any node pair.
class Cig {
 public:
  explicit Cig(SymbolTablePtr symbols);

  NodeId add_node(NodeLabel label, std::optional<std::size_t> source_edge = std::nullopt);
  /// Throws std::invalid_argument on a self edge or an already connected pair.
  void add_edge(NodeId from, NodeId to, double delay);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const CigNode& node(NodeId n) const { return nodes_.at(n); }
  const CigEdge& edge(std::size_t i) const { return edges_.at(i); }
  std::span<const CigNode> nodes() const { return nodes_; }
  std::span<const CigEdge> edges() const { return edges_; }

  /// Edge indices, in insertion order.
  std::span<const std::size_t> out_edges(NodeId n) const { return out_.at(n); }
  std::span<const std::size_t> in_edges(NodeId n) const { return in_.at(n); }

  /// Edge joining a and b in either direction.
  std::optional<std::size_t> find_edge(NodeId a, NodeId b) const;

  void set_label(NodeId n, NodeLabel label) { nodes_.at(n).label = label; }
  void set_delay(std::size_t edge, double delay) { edges_.at(edge).delay = delay; }

  const SymbolTable& symbols() const { return *symbols_; }
  const SymbolTablePtr& symbols_ptr() const { return symbols_; }

 private:
  SymbolTablePtr symbols_;
  std::vector<CigNode> nodes_;
  std::vector<CigEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

/// Builds the CIG with per-vertex interval trees. Node i is edge i of the
/// network. Simultaneous starts are directed from the lower node id.
/// `epsilon` treats endpoints closer than it as touching.
Cig construct_cig(const TemporalNetwork& network, double epsilon = 0.0);

/// Subgraph induced by `nodes`; node k of the result is nodes[k] of `g`.
Cig induced_subgraph(const Cig& g, std::span<const NodeId> nodes);

/// Connectivity ignoring edge direction. The empty graph is not connected.
bool is_connected(const Cig& g);

/// Maps pattern node k to edge `edges[k]` of `network`.
struct Support {
  const TemporalNetwork* network = nullptr;
  std::vector<std::size_t> edges;
};

/// Rebuilds the temporal network a connected pattern describes. Node 0 starts
/// at 0 and every other start follows the pattern delays along an undirected
/// traversal; vertex identities and attributes come from the support. The
/// pattern must carry raw durations and delays. The result is rebased so the
/// earliest start is 0.
TemporalNetwork reconstruct(const Cig& pattern, const Support& support, double epsilon = 0.0);

/// Renames vertices to v0, v1, ... in order of first appearance.
TemporalNetwork anonymize_vertices(const TemporalNetwork& network);

/// Debug text: `n <id> <attr_u> <attr_e> <attr_v> <dur>` per node, then
/// `e <from> <to> <delay>` per edge sorted by (from, to).
void write_cig(std::ostream& out, const Cig& g);
std::string to_text(const Cig& g);

}  // namespace cigmine
