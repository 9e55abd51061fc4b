#include "cigmine/canon.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace cigmine {

bool position_less(int a_from, int a_to, int b_from, int b_to) {
  const bool a_fwd = a_from < a_to;
  const bool b_fwd = b_from < b_to;
  if (a_fwd && b_fwd) return a_to < b_to || (a_to == b_to && a_from > b_from);
  if (!a_fwd && !b_fwd) return a_from < b_from || (a_from == b_from && a_to < b_to);
  if (!a_fwd) return a_from < b_to;
  return a_to <= b_from;
}

bool step_less(const DfsStep& a, const DfsStep& b) {
  if (position_less(a.from, a.to, b.from, b.to)) return true;
  if (position_less(b.from, b.to, a.from, a.to)) return false;
  return std::tie(a.from_label, a.dir, a.edge_label, a.to_label) <
         std::tie(b.from_label, b.dir, b.edge_label, b.to_label);
}

bool code_less(const DfsCode& a, const DfsCode& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), step_less);
}

namespace {

struct Neighbor {
  int node;
  int arc;
  int dir;
  int label;
};

struct Projection {
  std::vector<int> pos2node;
  std::vector<int> node2pos;
  std::vector<char> used;  // per arc
};

bool connected(std::size_t n, const std::vector<std::vector<Neighbor>>& adj) {
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const auto& nb : adj[x]) {
      if (!seen[nb.node]) {
        seen[nb.node] = 1;
        ++reached;
        stack.push_back(nb.node);
      }
    }
  }
  return reached == n;
}

// Builds the minimum DFS code step by step, keeping every partial enumeration
// that realizes the current minimum. With a target code it stops at the first
// step where the minimum differs from the target.
class MinCodeSearch {
 public:
  explicit MinCodeSearch(const LabeledGraph& g) : g_(g), adj_(g.node_labels.size()) {
    const int n = static_cast<int>(g.node_labels.size());
    for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
      const auto& arc = g.arcs[a];
      if (arc.from < 0 || arc.to < 0 || arc.from >= n || arc.to >= n || arc.from == arc.to)
        throw std::invalid_argument("min_dfs_code: bad arc");
      adj_[arc.from].push_back({arc.to, a, kAlong, arc.label});
      adj_[arc.to].push_back({arc.from, a, kAgainst, arc.label});
    }
  }

  // Returns false when a target is given and the minimum code diverges from it.
  bool run(const DfsCode* target) {
    const std::size_t n = g_.node_labels.size();
    const std::size_t m = g_.arcs.size();
    if (n == 0) throw std::invalid_argument("min_dfs_code: empty graph");
    if (!connected(n, adj_)) throw std::invalid_argument("min_dfs_code: graph is disconnected");

    if (n == 1) {
      code_ = {DfsStep{0, 0, g_.node_labels[0], kNone, kNone, kNone}};
      order_ = {0};
      return target == nullptr || *target == code_;
    }

    std::optional<DfsStep> best;
    for (int a = 0; a < static_cast<int>(m); ++a) {
      for (int dir : {kAlong, kAgainst}) {
        const DfsStep s = first_step(a, dir);
        if (!best || step_less(s, *best)) best = s;
      }
    }
    if (target && (target->empty() || !(target->front() == *best))) return false;
    for (int a = 0; a < static_cast<int>(m); ++a) {
      for (int dir : {kAlong, kAgainst}) {
        if (!(first_step(a, dir) == *best)) continue;
        const auto& arc = g_.arcs[a];
        const int x = dir == kAlong ? arc.from : arc.to;
        const int y = dir == kAlong ? arc.to : arc.from;
        Projection p;
        p.pos2node = {x, y};
        p.node2pos.assign(n, -1);
        p.node2pos[x] = 0;
        p.node2pos[y] = 1;
        p.used.assign(m, 0);
        p.used[a] = 1;
        projections_.push_back(std::move(p));
      }
    }
    code_ = {*best};
    parent_ = {-1, 0};

    while (code_.size() < m) {
      const int rmv = static_cast<int>(parent_.size()) - 1;
      std::vector<char> on_path(parent_.size(), 0);
      std::vector<int> path;  // deepest first
      for (int p = rmv; p >= 0; p = parent_[p]) {
        on_path[p] = 1;
        path.push_back(p);
      }

      best.reset();
      for (const auto& proj : projections_) {
        for_each_extension(proj, rmv, path, on_path, [&](const DfsStep& s, const Neighbor&) {
          if (!best || step_less(s, *best)) best = s;
        });
      }
      if (!best) throw std::logic_error("min_dfs_code: enumeration stalled");
      if (target && (target->size() <= code_.size() || !((*target)[code_.size()] == *best)))
        return false;

      std::vector<Projection> next;
      for (const auto& proj : projections_) {
        for_each_extension(proj, rmv, path, on_path, [&](const DfsStep& s, const Neighbor& nb) {
          if (!(s == *best)) return;
          Projection ext = proj;
          ext.used[nb.arc] = 1;
          if (s.is_forward()) {
            ext.node2pos[nb.node] = static_cast<int>(ext.pos2node.size());
            ext.pos2node.push_back(nb.node);
          }
          next.push_back(std::move(ext));
        });
      }
      projections_ = std::move(next);
      code_.push_back(*best);
      if (best->is_forward()) parent_.push_back(best->from);
    }
    order_ = projections_.front().pos2node;
    return target == nullptr || target->size() == code_.size();
  }

  MinCode result() && { return MinCode{std::move(code_), std::move(order_)}; }

 private:
  DfsStep first_step(int arc_index, int dir) const {
    const auto& arc = g_.arcs[arc_index];
    const int x = dir == kAlong ? arc.from : arc.to;
    const int y = dir == kAlong ? arc.to : arc.from;
    return DfsStep{0, 1, g_.node_labels[x], dir, arc.label, g_.node_labels[y]};
  }

  template <class Fn>
  void for_each_extension(const Projection& proj, int rmv, const std::vector<int>& path,
                          const std::vector<char>& on_path, Fn&& fn) const {
    const int x = proj.pos2node[rmv];
    for (const auto& nb : adj_[x]) {
      if (proj.used[nb.arc]) continue;
      const int p = proj.node2pos[nb.node];
      if (p < 0 || !on_path[p]) continue;
      fn(DfsStep{rmv, p, g_.node_labels[x], nb.dir, nb.label, g_.node_labels[nb.node]}, nb);
    }
    const int next_pos = static_cast<int>(proj.pos2node.size());
    for (int p : path) {
      const int y = proj.pos2node[p];
      for (const auto& nb : adj_[y]) {
        if (proj.node2pos[nb.node] >= 0) continue;
        fn(DfsStep{p, next_pos, g_.node_labels[y], nb.dir, nb.label, g_.node_labels[nb.node]}, nb);
      }
    }
  }

  const LabeledGraph& g_;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<Projection> projections_;
  std::vector<int> parent_;
  DfsCode code_;
  std::vector<int> order_;
};

}  // namespace

MinCode min_dfs_code(const LabeledGraph& g) {
  MinCodeSearch search(g);
  search.run(nullptr);
  return std::move(search).result();
}

LabeledGraph graph_from_code(const DfsCode& code) {
  LabeledGraph g;
  if (code.empty()) return g;
  auto set_label = [&](int pos, int label) {
    if (pos >= static_cast<int>(g.node_labels.size())) g.node_labels.resize(pos + 1, 0);
    g.node_labels[pos] = label;
  };
  if (code.size() == 1 && code.front().is_node_only()) {
    set_label(0, code.front().from_label);
    return g;
  }
  for (const auto& s : code) {
    if (s.is_node_only()) throw std::invalid_argument("graph_from_code: stray node-only step");
    set_label(s.from, s.from_label);
    set_label(s.to, s.to_label);
    if (s.dir == kAlong) {
      g.arcs.push_back({s.from, s.to, s.edge_label});
    } else {
      g.arcs.push_back({s.to, s.from, s.edge_label});
    }
  }
  return g;
}

bool is_min_code(const DfsCode& code) {
  if (code.empty()) return false;
  const LabeledGraph g = graph_from_code(code);
  MinCodeSearch search(g);
  return search.run(&code);
}

// ---------------------------------------------------------------------------

LabelValue label_value(const NodeLabel& label, const SymbolTable& symbols) {
  return LabelValue{symbols.attributes.name(label.attr_u), symbols.attributes.name(label.attr_e),
                    symbols.attributes.name(label.attr_v), label.duration};
}

namespace {

void write_label(std::ostream& out, const LabelValue& l) {
  out << l.attr_u << ' ' << l.attr_e << ' ' << l.attr_v << ' ' << format_number(l.duration);
}

bool canonical_step_less(const CanonicalStep& a, const CanonicalStep& b) {
  if (position_less(a.from, a.to, b.from, b.to)) return true;
  if (position_less(b.from, b.to, a.from, a.to)) return false;
  return std::tie(a.from_label, a.dir, a.delay, a.to_label) <
         std::tie(b.from_label, b.dir, b.delay, b.to_label);
}

}  // namespace

CanonicalLabel::CanonicalLabel(std::vector<CanonicalStep> steps) : steps_(std::move(steps)) {
  std::ostringstream out;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const auto& s = steps_[i];
    if (i) out << " | ";
    out << s.from << ' ' << s.to << ' ';
    write_label(out, s.from_label);
    if (s.dir == kNone) {
      out << " - - - - - -";
      continue;
    }
    out << ' ' << (s.dir == kAlong ? '>' : '<') << ' '
        << (s.delay == kUniformDelay ? std::string("*") : format_number(s.delay)) << ' ';
    write_label(out, s.to_label);
  }
  text_ = out.str();
}

std::size_t CanonicalLabel::node_count() const {
  int max_pos = -1;
  for (const auto& s : steps_) max_pos = std::max({max_pos, s.from, s.to});
  return static_cast<std::size_t>(max_pos + 1);
}

std::size_t CanonicalLabel::edge_count() const {
  if (steps_.size() == 1 && steps_.front().dir == kNone) return 0;
  return steps_.size();
}

bool operator<(const CanonicalLabel& a, const CanonicalLabel& b) {
  return std::lexicographical_compare(a.steps_.begin(), a.steps_.end(), b.steps_.begin(),
                                      b.steps_.end(), canonical_step_less);
}

CanonicalForm canonical_form(const Cig& g) {
  std::vector<LabelValue> values;
  values.reserve(g.node_count());
  for (const auto& node : g.nodes()) values.push_back(label_value(node.label, g.symbols()));
  std::vector<LabelValue> node_vocab = values;
  std::sort(node_vocab.begin(), node_vocab.end());
  node_vocab.erase(std::unique(node_vocab.begin(), node_vocab.end()), node_vocab.end());

  std::vector<double> delay_vocab;
  for (const auto& e : g.edges()) delay_vocab.push_back(e.delay);
  std::sort(delay_vocab.begin(), delay_vocab.end());
  delay_vocab.erase(std::unique(delay_vocab.begin(), delay_vocab.end()), delay_vocab.end());

  auto rank = [](const auto& vocab, const auto& value) {
    return static_cast<int>(std::lower_bound(vocab.begin(), vocab.end(), value) - vocab.begin());
  };

  LabeledGraph lg;
  for (const auto& v : values) lg.node_labels.push_back(rank(node_vocab, v));
  for (const auto& e : g.edges())
    lg.arcs.push_back({static_cast<int>(e.from), static_cast<int>(e.to), rank(delay_vocab, e.delay)});

  MinCode mc = min_dfs_code(lg);
  std::vector<CanonicalStep> steps;
  steps.reserve(mc.code.size());
  for (const auto& s : mc.code) {
    CanonicalStep c;
    c.from = s.from;
    c.to = s.to;
    c.from_label = node_vocab[s.from_label];
    c.dir = s.dir;
    if (s.dir != kNone) {
      c.delay = delay_vocab[s.edge_label];
      c.to_label = node_vocab[s.to_label];
    }
    steps.push_back(std::move(c));
  }
  CanonicalForm form;
  form.label = CanonicalLabel(std::move(steps));
  form.order.assign(mc.order.begin(), mc.order.end());
  return form;
}

bool brute_force_isomorphic(const Cig& a, const Cig& b) {
  if (a.node_count() > kBruteForceNodeCap || b.node_count() > kBruteForceNodeCap)
    throw std::invalid_argument("brute_force_isomorphic: graph exceeds node cap");
  const std::size_t n = a.node_count();
  if (n != b.node_count() || a.edge_count() != b.edge_count()) return false;

  auto labels = [](const Cig& g) {
    std::vector<LabelValue> out;
    for (const auto& node : g.nodes()) out.push_back(label_value(node.label, g.symbols()));
    return out;
  };
  const auto la = labels(a);
  const auto lb = labels(b);
  {
    auto sa = la, sb = lb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  auto matrix = [n](const Cig& g) {
    std::vector<std::optional<double>> m(n * n);
    for (const auto& e : g.edges()) m[e.from * n + e.to] = e.delay;
    return m;
  };
  const auto ma = matrix(a);
  const auto mb = matrix(b);

  std::vector<std::size_t> map(n);
  std::vector<char> taken(n, 0);
  auto extend = [&](auto&& self, std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t c = 0; c < n; ++c) {
      if (taken[c] || !(la[i] == lb[c])) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        ok = ma[i * n + j] == mb[c * n + map[j]] && ma[j * n + i] == mb[map[j] * n + c];
      }
      if (!ok) continue;
      map[i] = c;
      taken[c] = 1;
      if (self(self, i + 1)) return true;
      taken[c] = 0;
    }
    return false;
  };
  return extend(extend, 0);
}

}  // namespace cigmine
