#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cigmine/canon.hpp"
#include "cigmine/cig.hpp"
#include "cigmine/temporal.hpp"

namespace cigmine {

/// Bad mining configuration (flag combinations, thresholds).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class IsoKind { kExact, kInexact, kExactSequence, kInexactSequence };

/// Isomorphism relaxation. Inexact kinds bin durations into
/// floor(duration / duration_bin); sequence kinds replace every delay by
/// kUniformDelay, so only the precedence encoded by edge direction survives.
/// `delay_bin` optionally bins delays the same way; inexact kind only.
struct IsoMode {
  IsoKind kind = IsoKind::kExact;
  std::optional<double> duration_bin;
  std::optional<double> delay_bin;

  static IsoMode parse(std::string_view flag, std::optional<double> duration_bin = std::nullopt,
                       std::optional<double> delay_bin = std::nullopt);
  void validate() const;
  std::string flag() const;  // "e", "i", "es" or "is"

  bool bins_durations() const {
    return kind == IsoKind::kInexact || kind == IsoKind::kInexactSequence;
  }
  bool uniform_delays() const {
    return kind == IsoKind::kExactSequence || kind == IsoKind::kInexactSequence;
  }
};

/// Absolute count, or a fraction of the network count rounded up.
struct MinSupport {
  double value = 1.0;
  bool fraction = false;

  static MinSupport absolute(std::size_t n) { return {static_cast<double>(n), false}; }
  static MinSupport of_fraction(double f) { return {f, true}; }
  /// Accepts "N" or a fraction such as "0.4" / "1.0".
  static MinSupport parse(std::string_view text);

  void validate() const;
  std::size_t resolve(std::size_t network_count) const;
  std::string text() const;
};

struct MinerConfig {
  MinSupport min_supp;
  IsoMode iso;
  std::optional<std::size_t> max_pattern_edges;  // temporal edges per pattern
  double time_epsilon = 0.0;
  std::size_t workers = 1;
  bool collect_embeddings = true;

  void validate() const;
};

Cig transform_labels(const Cig& g, const IsoMode& iso);
std::vector<Cig> transform_labels(const std::vector<Cig>& cigs, const IsoMode& iso);

/// A set of temporal edges of one network, by CIG node id (= edge index),
/// sorted ascending.
struct Occurrence {
  std::size_t network = 0;
  std::vector<NodeId> nodes;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

struct NodeLabelStats {
  NodeLabel label;  // transformed
  LabelValue value;
  std::size_t support = 0;
  std::vector<Occurrence> locations;  // one single-node occurrence per data node
};

/// Frequent 1-edge pattern in its minimum orientation. Labels are dense ranks.
struct EdgeType {
  int from_label = 0;
  int dir = kAlong;
  int delay = 0;
  int to_label = 0;

  DfsStep step() const { return DfsStep{0, 1, from_label, dir, delay, to_label}; }
  friend bool operator==(const EdgeType&, const EdgeType&) = default;
};

struct EdgeLocation {
  std::size_t network = 0;
  NodeId first = 0;  // image of position 0
  NodeId second = 0;
};

struct EdgeTypeStats {
  EdgeType type;
  std::size_t support = 0;
  std::vector<EdgeLocation> locations;
};

/// Transformed, frequency-filtered view of a data set.
struct Preprocessed {
  std::size_t min_supp = 0;
  std::vector<Cig> raw;          // construct_cig per network
  std::vector<Cig> transformed;  // transform_labels of raw
  /// Frequent node labels; the index is the dense label, ordered by
  /// descending support then label value.
  std::vector<NodeLabelStats> node_labels;
  /// Distinct transformed delays, ascending; the index is the dense delay.
  std::vector<double> delays;
  /// Frequent 1-edge types sorted ascending by their first DFS step.
  std::vector<EdgeTypeStats> edge_types;
  /// Per network and node: dense label, or -1 when infrequent.
  std::vector<std::vector<int>> dense_labels;
};

Preprocessed preprocess(const DataSet& ds, const MinerConfig& config);

struct Pattern {
  CanonicalLabel label;
  std::size_t size = 0;                // temporal edges
  std::vector<std::size_t> networks;   // ascending network indices
  std::size_t support = 0;
  Occurrence representative;           // smallest occurrence
  std::vector<Occurrence> embeddings;  // sorted; empty unless collected
};

struct MineStats {
  std::size_t trees_explored = 0;
  std::size_t min_code_rejections = 0;
  std::size_t infrequent_children = 0;
  std::size_t expansions_checked = 0;  // parent/child support comparisons
  std::size_t closure_violations = 0;  // child support above parent support
  std::size_t subsets_enumerated = 0;  // exhaustive miner only
};

struct MineResult {
  std::vector<Pattern> patterns;  // sorted by canonical label
  MineStats stats;
};

/// Frequent pattern search over CIG subtrees with rightmost forward growth.
MineResult mine(const DataSet& ds, const MinerConfig& config);

inline constexpr std::size_t kDefaultEdgeCap = 8;

/// Reference miner: enumerates every connected CIG node subset of every
/// network. Throws ConfigError if some network exceeds `edge_cap` edges.
MineResult mine_exhaustive(const DataSet& ds, const MinerConfig& config,
                           std::size_t edge_cap = kDefaultEdgeCap);

/// The temporal network an occurrence spans, rebuilt from the induced raw CIG
/// and rebased to start at 0.
TemporalNetwork occurrence_network(const DataSet& ds, const Cig& raw_cig, const Occurrence& occ,
                                   double epsilon = 0.0);

/// Canonical label of a temporal network under a mode.
CanonicalLabel label_network(const TemporalNetwork& network, const IsoMode& iso,
                             double epsilon = 0.0);

}  // namespace cigmine
