#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cigmine/temporal.hpp"

namespace cigmine {

/// Red-black tree keyed on interval.lo, augmented with the subtree maximum of
/// interval.hi. Supports insertion and all-overlaps search over closed
/// intervals. Equal keys go right. There is no deletion.
class IntervalTree {
 public:
  using Payload = std::size_t;

  struct Entry {
    Interval interval;
    Payload payload = 0;

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  struct NodeView {
    Interval interval;
    double max = 0.0;
    bool red = false;
    Payload payload = 0;
  };

  void insert(Interval interval, Payload payload);

  /// Every stored interval intersecting `query` (closed on both ends).
  std::vector<Entry> search_all(Interval query) const;
  /// Appends matches to `out` instead of allocating.
  void search_all(Interval query, std::vector<Entry>& out) const;

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::optional<NodeView> root() const;
  std::size_t height() const;
  std::vector<Entry> in_order() const;

  /// Empty when the red-black, BST and max invariants hold; otherwise a
  /// description of the first violation found.
  std::string validate() const;

 private:
  using Index = std::int32_t;
  static constexpr Index kNil = -1;

  struct Node {
    Interval interval;
    double max = 0.0;
    Payload payload = 0;
    Index left = kNil;
    Index right = kNil;
    Index parent = kNil;
    bool red = true;
  };

  double max_of(Index n) const;
  void update_max(Index n);
  void rotate_left(Index x);
  void rotate_right(Index x);
  void fix_insert(Index z);
  void collect(Index n, const Interval& query, std::vector<Entry>& out) const;

  std::vector<Node> nodes_;
  Index root_ = kNil;
};

}  // namespace cigmine
