#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "cigmine/cig.hpp"

namespace cigmine {

// ---------------------------------------------------------------------------
// DFS codes over integer-labelled directed graphs.
//
// A step (from, to, from_label, dir, edge_label, to_label) records one edge of
// a depth-first enumeration by the discovery positions of its endpoints. `dir`
// is kAlong when the stored arc points from -> to and kAgainst otherwise, so
// the traversal itself may run against arc direction. A single isolated node
// is encoded as the degenerate step (0, 0, label, -, -, -).
//
// Steps are ordered as in gSpan: by position (forward steps by target, then by
// deeper source; backward steps by source, then by target; a backward step
// precedes a forward one that introduces a later vertex), then by from_label,
// dir, edge_label and to_label.

inline constexpr int kAlong = 0;
inline constexpr int kAgainst = 1;
inline constexpr int kNone = -1;

struct DfsStep {
  int from = 0;
  int to = 0;
  int from_label = 0;
  int dir = kNone;
  int edge_label = kNone;
  int to_label = kNone;

  bool is_forward() const { return from < to; }
  bool is_node_only() const { return from == to; }

  friend bool operator==(const DfsStep&, const DfsStep&) = default;
};

using DfsCode = std::vector<DfsStep>;

bool position_less(int a_from, int a_to, int b_from, int b_to);
bool step_less(const DfsStep& a, const DfsStep& b);
bool code_less(const DfsCode& a, const DfsCode& b);

struct LabeledGraph {
  struct Arc {
    int from = 0;
    int to = 0;
    int label = 0;
  };
  std::vector<int> node_labels;
  std::vector<Arc> arcs;  // at most one arc per unordered node pair
};

struct MinCode {
  DfsCode code;
  std::vector<int> order;  // order[position] = graph node
};

/// Minimum DFS code over all depth-first enumerations. Throws
/// std::invalid_argument on an empty or disconnected graph.
MinCode min_dfs_code(const LabeledGraph& g);

/// Graph described by a code; node k is position k.
LabeledGraph graph_from_code(const DfsCode& code);

/// True iff no other enumeration of the code's graph is smaller.
bool is_min_code(const DfsCode& code);

// ---------------------------------------------------------------------------
// Canonical labels of CIGs.

/// Node label with attribute names resolved, so it orders the same way in
/// every process regardless of interning order.
struct LabelValue {
  std::string attr_u;
  std::string attr_e;
  std::string attr_v;
  double duration = 0.0;

  friend bool operator==(const LabelValue&, const LabelValue&) = default;
  friend auto operator<=>(const LabelValue&, const LabelValue&) = default;
};

LabelValue label_value(const NodeLabel& label, const SymbolTable& symbols);

struct CanonicalStep {
  int from = 0;
  int to = 0;
  LabelValue from_label;
  int dir = kNone;
  double delay = 0.0;
  LabelValue to_label;

  friend bool operator==(const CanonicalStep&, const CanonicalStep&) = default;
};

/// Minimum DFS code of a CIG expressed in label values. Equal exactly for
/// isomorphic CIGs; ordered lexicographically by steps. `text()` is an
/// injective serialization: twelve whitespace-separated fields per step,
/// steps joined by " | ".
class CanonicalLabel {
 public:
  CanonicalLabel() = default;
  explicit CanonicalLabel(std::vector<CanonicalStep> steps);

  const std::vector<CanonicalStep>& steps() const { return steps_; }
  const std::string& text() const { return text_; }
  std::size_t node_count() const;
  std::size_t edge_count() const;

  friend bool operator==(const CanonicalLabel& a, const CanonicalLabel& b) {
    return a.text_ == b.text_;
  }
  friend bool operator<(const CanonicalLabel& a, const CanonicalLabel& b);

 private:
  std::vector<CanonicalStep> steps_;
  std::string text_;
};

struct CanonicalForm {
  CanonicalLabel label;
  std::vector<NodeId> order;  // order[position] = node of the input graph
};

CanonicalForm canonical_form(const Cig& g);
inline CanonicalLabel canonical_label(const Cig& g) { return canonical_form(g).label; }

inline constexpr std::size_t kBruteForceNodeCap = 10;

/// Exhaustive search for a label-, direction- and delay-preserving bijection.
/// Throws std::invalid_argument above kBruteForceNodeCap nodes.
bool brute_force_isomorphic(const Cig& a, const Cig& b);

}  // namespace cigmine
