#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cigmine {

using VertexId = std::uint32_t;
using AttrId = std::uint32_t;

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Input that parses but violates a domain invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thread-safe string interner. Ids are dense and stable; names never move.
class Interner {
 public:
  std::uint32_t intern(std::string_view name);
  std::optional<std::uint32_t> find(std::string_view name) const;
  const std::string& name(std::uint32_t id) const;
  std::size_t size() const;

 private:
  mutable std::shared_mutex mu_;
  std::deque<std::string> names_;
  std::map<std::string, std::uint32_t, std::less<>> ids_;
};

struct SymbolTable {
  Interner vertices;
  Interner attributes;
};

using SymbolTablePtr = std::shared_ptr<SymbolTable>;

SymbolTablePtr make_symbols();

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Closed-interval intersection test. `epsilon` widens the comparison so that
/// endpoints closer than epsilon count as touching.
inline bool overlaps(const Interval& a, const Interval& b, double epsilon = 0.0) {
  return !(a.hi + epsilon < b.lo || b.hi + epsilon < a.lo);
}

/// One timed interaction. Endpoints are stored with u <= v by vertex name so
/// that undirected edges have a single representation.
struct TemporalEdge {
  VertexId u = 0;
  VertexId v = 0;
  AttrId attr_u = 0;
  AttrId attr_e = 0;
  AttrId attr_v = 0;
  double start = 0.0;
  double duration = 0.0;

  Interval interval() const { return {start, start + duration}; }

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

/// Interns the tokens and builds a normalized edge. Throws ValidationError on
/// a self-interaction, a negative duration or a non-finite time.
TemporalEdge make_edge(SymbolTable& symbols, std::string_view u, std::string_view v,
                       std::string_view attr_u, std::string_view attr_e,
                       std::string_view attr_v, double start, double duration);

/// Swaps endpoints (with their attributes) so that u <= v by name.
TemporalEdge normalize_endpoints(const TemporalEdge& e, const SymbolTable& symbols);

/// Start-sorted edge sequence plus its vertex set. Immutable once built.
class TemporalNetwork {
 public:
  /// Stable-sorts `edges` by start and validates every edge.
  TemporalNetwork(std::string name, std::vector<TemporalEdge> edges, SymbolTablePtr symbols);

  const std::string& name() const { return name_; }
  std::span<const TemporalEdge> edges() const { return edges_; }
  const TemporalEdge& edge(std::size_t i) const { return edges_.at(i); }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  /// Distinct endpoint ids, ascending.
  const std::vector<VertexId>& vertices() const { return vertices_; }

  const SymbolTable& symbols() const { return *symbols_; }
  const SymbolTablePtr& symbols_ptr() const { return symbols_; }

 private:
  std::string name_;
  std::vector<TemporalEdge> edges_;
  std::vector<VertexId> vertices_;
  SymbolTablePtr symbols_;
};

/// Ordered collection of networks sharing one symbol table. Names are unique.
class DataSet {
 public:
  explicit DataSet(SymbolTablePtr symbols);
  DataSet(SymbolTablePtr symbols, std::vector<TemporalNetwork> networks);

  void add(TemporalNetwork network);

  std::span<const TemporalNetwork> networks() const { return networks_; }
  const TemporalNetwork& network(std::size_t i) const { return networks_.at(i); }
  std::size_t size() const { return networks_.size(); }
  bool empty() const { return networks_.empty(); }

  const SymbolTable& symbols() const { return *symbols_; }
  const SymbolTablePtr& symbols_ptr() const { return symbols_; }

 private:
  SymbolTablePtr symbols_;
  std::vector<TemporalNetwork> networks_;
};

// ---------------------------------------------------------------------------
// Edge-list text format: `u v attr_u attr_e attr_v start duration`, one edge
// per line, `#` comments and blank lines ignored.

TemporalNetwork parse_edge_list(std::istream& in, std::string name, SymbolTablePtr symbols);
void write_edge_list(std::ostream& out, const TemporalNetwork& network);

/// Loads one network; its name is the file stem.
TemporalNetwork load_edge_list_file(const std::string& path, SymbolTablePtr symbols);

/// Loads every `*.edges` / `*.txt` file of a directory, sorted by file name.
DataSet load_dataset(const std::string& dir);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

// ---------------------------------------------------------------------------
// Contact sequences.

/// One fixed-resolution contact: u and v were in contact during
/// [time - resolution, time].
struct Contact {
  double time = 0.0;
  VertexId u = 0;
  VertexId v = 0;
  AttrId attr_u = 0;
  AttrId attr_v = 0;
};

inline constexpr std::string_view kDefaultVertexAttribute = "node";
inline constexpr std::string_view kContactEdgeAttribute = "contact";

/// Parses `t i j [Ci Cj]` lines. Missing classes default to
/// kDefaultVertexAttribute.
std::vector<Contact> parse_contacts(std::istream& in, SymbolTable& symbols);

/// Merges runs of contacts of the same vertex pair (with the same attributes)
/// at consecutive resolution steps into single interval edges. A run of k
/// grid-aligned contacts ending at t becomes an edge starting at
/// t - k * resolution with duration k * resolution.
TemporalNetwork merge_contacts(std::span<const Contact> contacts, double resolution,
                               std::string name, SymbolTablePtr symbols);

struct WindowSplit {
  std::vector<TemporalNetwork> networks;
  std::size_t dropped = 0;
};

/// Splits by start time at the given cut points. Window 0 is [0, b1), window i
/// is [b_i, b_{i+1}) and the last is [b_k, inf). Each window is rebased to
/// start at 0 and named `<name>_<index>`; empty windows produce no network.
/// Edges starting before 0 belong to no window and are counted in `dropped`.
WindowSplit split_by_window(const TemporalNetwork& network, std::span<const double> boundaries);

}  // namespace cigmine
