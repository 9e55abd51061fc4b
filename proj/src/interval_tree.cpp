#include "cigmine/interval_tree.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <sstream>

namespace cigmine {

double IntervalTree::max_of(Index n) const {
  return n == kNil ? -std::numeric_limits<double>::infinity() : nodes_[n].max;
}

void IntervalTree::update_max(Index n) {
  auto& node = nodes_[n];
  node.max = std::max({node.interval.hi, max_of(node.left), max_of(node.right)});
}

void IntervalTree::rotate_left(Index x) {
  const Index y = nodes_[x].right;
  nodes_[x].right = nodes_[y].left;
  if (nodes_[y].left != kNil) nodes_[nodes_[y].left].parent = x;
  nodes_[y].parent = nodes_[x].parent;
  if (nodes_[x].parent == kNil) {
    root_ = y;
  } else if (x == nodes_[nodes_[x].parent].left) {
    nodes_[nodes_[x].parent].left = y;
  } else {
    nodes_[nodes_[x].parent].right = y;
  }
  nodes_[y].left = x;
  nodes_[x].parent = y;
  update_max(x);
  update_max(y);
}

void IntervalTree::rotate_right(Index x) {
  const Index y = nodes_[x].left;
  nodes_[x].left = nodes_[y].right;
  if (nodes_[y].right != kNil) nodes_[nodes_[y].right].parent = x;
  nodes_[y].parent = nodes_[x].parent;
  if (nodes_[x].parent == kNil) {
    root_ = y;
  } else if (x == nodes_[nodes_[x].parent].right) {
    nodes_[nodes_[x].parent].right = y;
  } else {
    nodes_[nodes_[x].parent].left = y;
  }
  nodes_[y].right = x;
  nodes_[x].parent = y;
  update_max(x);
  update_max(y);
}

void IntervalTree::insert(Interval interval, Payload payload) {
  const auto z = static_cast<Index>(nodes_.size());
  nodes_.push_back(Node{interval, interval.hi, payload, kNil, kNil, kNil, true});

  Index parent = kNil;
  Index cur = root_;
  while (cur != kNil) {
    parent = cur;
    // Raise maxima on the way down; rotations below recompute locally.
    nodes_[cur].max = std::max(nodes_[cur].max, interval.hi);
    cur = interval.lo < nodes_[cur].interval.lo ? nodes_[cur].left : nodes_[cur].right;
  }
  nodes_[z].parent = parent;
  if (parent == kNil) {
    root_ = z;
  } else if (interval.lo < nodes_[parent].interval.lo) {
    nodes_[parent].left = z;
  } else {
    nodes_[parent].right = z;
  }
  fix_insert(z);
}

void IntervalTree::fix_insert(Index z) {
  auto red = [&](Index n) { return n != kNil && nodes_[n].red; };
  while (red(nodes_[z].parent)) {
    const Index p = nodes_[z].parent;
    const Index g = nodes_[p].parent;
    if (p == nodes_[g].left) {
      const Index uncle = nodes_[g].right;
      if (red(uncle)) {
        nodes_[p].red = false;
        nodes_[uncle].red = false;
        nodes_[g].red = true;
        z = g;
      } else {
        if (z == nodes_[p].right) {
          z = p;
          rotate_left(z);
        }
        const Index p2 = nodes_[z].parent;
        const Index g2 = nodes_[p2].parent;
        nodes_[p2].red = false;
        nodes_[g2].red = true;
        rotate_right(g2);
      }
    } else {
      const Index uncle = nodes_[g].left;
      if (red(uncle)) {
        nodes_[p].red = false;
        nodes_[uncle].red = false;
        nodes_[g].red = true;
        z = g;
      } else {
        if (z == nodes_[p].left) {
          z = p;
          rotate_right(z);
        }
        const Index p2 = nodes_[z].parent;
        const Index g2 = nodes_[p2].parent;
        nodes_[p2].red = false;
        nodes_[g2].red = true;
        rotate_left(g2);
      }
    }
  }
  nodes_[root_].red = false;
}

void IntervalTree::collect(Index n, const Interval& query, std::vector<Entry>& out) const {
  while (n != kNil) {
    const Node& node = nodes_[n];
    if (node.max < query.lo) return;  // nothing in this subtree reaches the query
    if (node.left != kNil && nodes_[node.left].max >= query.lo) collect(node.left, query, out);
    if (overlaps(node.interval, query)) out.push_back({node.interval, node.payload});
    // Right subtree keys are >= node.lo; they can only start after the query.
    if (node.interval.lo > query.hi) return;
    n = node.right;
  }
}

std::vector<IntervalTree::Entry> IntervalTree::search_all(Interval query) const {
  std::vector<Entry> out;
  search_all(query, out);
  return out;
}

void IntervalTree::search_all(Interval query, std::vector<Entry>& out) const {
  collect(root_, query, out);
}

std::optional<IntervalTree::NodeView> IntervalTree::root() const {
  if (root_ == kNil) return std::nullopt;
  const auto& n = nodes_[root_];
  return NodeView{n.interval, n.max, n.red, n.payload};
}

std::size_t IntervalTree::height() const {
  std::function<std::size_t(Index)> h = [&](Index n) -> std::size_t {
    if (n == kNil) return 0;
    return 1 + std::max(h(nodes_[n].left), h(nodes_[n].right));
  };
  return h(root_);
}

std::vector<IntervalTree::Entry> IntervalTree::in_order() const {
  std::vector<Entry> out;
  out.reserve(nodes_.size());
  std::function<void(Index)> walk = [&](Index n) {
    if (n == kNil) return;
    walk(nodes_[n].left);
    out.push_back({nodes_[n].interval, nodes_[n].payload});
    walk(nodes_[n].right);
  };
  walk(root_);
  return out;
}

std::string IntervalTree::validate() const {
  std::ostringstream err;
  if (root_ == kNil) return nodes_.empty() ? "" : "nodes present but root is nil";
  if (nodes_[root_].red) return "root is red";
  if (nodes_[root_].parent != kNil) return "root has a parent";

  std::size_t seen = 0;
  // Returns black height, or -1 after recording an error.
  std::function<long(Index)> check = [&](Index n) -> long {
    if (n == kNil) return 1;
    ++seen;
    const Node& node = nodes_[n];
    for (Index c : {node.left, node.right}) {
      if (c == kNil) continue;
      if (nodes_[c].parent != n) {
        err << "broken parent link at payload " << nodes_[c].payload;
        return -1;
      }
      if (node.red && nodes_[c].red) {
        err << "red node with red child at payload " << node.payload;
        return -1;
      }
    }
    const double expect = std::max({node.interval.hi, max_of(node.left), max_of(node.right)});
    if (expect != node.max) {
      err << "stale max at payload " << node.payload;
      return -1;
    }
    const long lh = check(node.left);
    if (lh < 0) return -1;
    const long rh = check(node.right);
    if (rh < 0) return -1;
    if (lh != rh) {
      err << "unequal black height at payload " << node.payload;
      return -1;
    }
    return lh + (node.red ? 0 : 1);
  };
  if (check(root_) < 0) return err.str();
  if (seen != nodes_.size()) return "unreachable nodes";
  const auto order = in_order();
  for (std::size_t i = 1; i < order.size(); ++i)
    if (order[i].interval.lo < order[i - 1].interval.lo) return "in-order keys not sorted";
  return "";
}

}  // namespace cigmine
