#include "cigmine/miner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace cigmine {

// ---------------------------------------------------------------------------
// Configuration

IsoMode IsoMode::parse(std::string_view flag, std::optional<double> duration_bin,
                       std::optional<double> delay_bin) {
  IsoMode mode;
  if (flag == "e") {
    mode.kind = IsoKind::kExact;
  } else if (flag == "i") {
    mode.kind = IsoKind::kInexact;
  } else if (flag == "es") {
    mode.kind = IsoKind::kExactSequence;
  } else if (flag == "is") {
    mode.kind = IsoKind::kInexactSequence;
  } else {
    throw ConfigError("unknown isomorphism mode '" + std::string(flag) + "' (expected e, i, es or is)");
  }
  mode.duration_bin = duration_bin;
  mode.delay_bin = delay_bin;
  mode.validate();
  return mode;
}

void IsoMode::validate() const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (bins_durations()) {
    if (!duration_bin) throw ConfigError("mode " + flag() + " requires a duration bin");
    if (!positive(*duration_bin)) throw ConfigError("duration bin must be positive");
  } else if (duration_bin) {
    throw ConfigError("mode " + flag() + " takes no duration bin");
  }
  if (delay_bin) {
    if (kind != IsoKind::kInexact) throw ConfigError("a delay bin is only valid with mode i");
    if (!positive(*delay_bin)) throw ConfigError("delay bin must be positive");
  }
}

std::string IsoMode::flag() const {
  switch (kind) {
    case IsoKind::kExact: return "e";
    case IsoKind::kInexact: return "i";
    case IsoKind::kExactSequence: return "es";
    case IsoKind::kInexactSequence: return "is";
  }
  return "?";
}

MinSupport MinSupport::parse(std::string_view text) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (text.find_first_of(".eE") != std::string_view::npos) {
    double f = 0.0;
    auto [p, ec] = std::from_chars(first, last, f);
    if (ec != std::errc() || p != last) throw ConfigError("bad min-supp '" + std::string(text) + "'");
    MinSupport s = of_fraction(f);
    s.validate();
    return s;
  }
  std::size_t n = 0;
  auto [p, ec] = std::from_chars(first, last, n);
  if (ec != std::errc() || p != last) throw ConfigError("bad min-supp '" + std::string(text) + "'");
  MinSupport s = absolute(n);
  s.validate();
  return s;
}

void MinSupport::validate() const {
  if (fraction) {
    if (!(value > 0.0 && value <= 1.0)) throw ConfigError("fractional min-supp must lie in (0, 1]");
  } else if (!(value >= 1.0) || value != std::floor(value)) {
    throw ConfigError("absolute min-supp must be an integer >= 1");
  }
}

std::size_t MinSupport::resolve(std::size_t network_count) const {
  validate();
  if (!fraction) return static_cast<std::size_t>(value);
  // Guard against 0.3 * 10 = 3.0000000000000004 rounding up to 4.
  const double scaled = std::ceil(value * static_cast<double>(network_count) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(scaled));
}

std::string MinSupport::text() const {
  return fraction ? format_number(value) : std::to_string(static_cast<std::size_t>(value));
}

void MinerConfig::validate() const {
  min_supp.validate();
  iso.validate();
  if (max_pattern_edges && *max_pattern_edges == 0) throw ConfigError("max pattern edges must be >= 1");
  if (!std::isfinite(time_epsilon) || time_epsilon < 0.0) throw ConfigError("time epsilon must be >= 0");
  if (workers == 0) throw ConfigError("workers must be >= 1");
}

// ---------------------------------------------------------------------------
// Label transformation and preprocessing

Cig transform_labels(const Cig& g, const IsoMode& iso) {
  iso.validate();
  Cig out = g;
  if (iso.bins_durations()) {
    for (NodeId n = 0; n < out.node_count(); ++n) {
      NodeLabel l = out.node(n).label;
      l.duration = std::floor(l.duration / *iso.duration_bin);
      out.set_label(n, l);
    }
  }
  for (std::size_t e = 0; e < out.edge_count(); ++e) {
    if (iso.uniform_delays()) {
      out.set_delay(e, kUniformDelay);
    } else if (iso.delay_bin) {
      out.set_delay(e, std::floor(out.edge(e).delay / *iso.delay_bin));
    }
  }
  return out;
}

std::vector<Cig> transform_labels(const std::vector<Cig>& cigs, const IsoMode& iso) {
  std::vector<Cig> out;
  out.reserve(cigs.size());
  for (const auto& g : cigs) out.push_back(transform_labels(g, iso));
  return out;
}

namespace {

struct StepLess {
  bool operator()(const DfsStep& a, const DfsStep& b) const { return step_less(a, b); }
};

/// Minimum orientation of a data edge as a first DFS step.
std::pair<EdgeType, bool> orient(int from_label, int delay, int to_label) {
  const EdgeType along{from_label, kAlong, delay, to_label};
  const EdgeType against{to_label, kAgainst, delay, from_label};
  if (step_less(against.step(), along.step())) return {against, true};
  return {along, false};
}

int dense_delay(const std::vector<double>& delays, double d) {
  return static_cast<int>(std::lower_bound(delays.begin(), delays.end(), d) - delays.begin());
}

}  // namespace

Preprocessed preprocess(const DataSet& ds, const MinerConfig& config) {
  config.validate();
  Preprocessed pp;
  pp.min_supp = config.min_supp.resolve(ds.size());
  for (const auto& net : ds.networks()) pp.raw.push_back(construct_cig(net, config.time_epsilon));
  pp.transformed = transform_labels(pp.raw, config.iso);

  struct NodeCount {
    NodeLabel label;
    std::set<std::size_t> networks;
    std::vector<Occurrence> locations;
  };
  std::map<LabelValue, NodeCount> node_counts;
  for (std::size_t i = 0; i < pp.transformed.size(); ++i) {
    const Cig& g = pp.transformed[i];
    for (NodeId n = 0; n < g.node_count(); ++n) {
      auto& c = node_counts[label_value(g.node(n).label, g.symbols())];
      c.label = g.node(n).label;
      c.networks.insert(i);
      c.locations.push_back(Occurrence{i, {n}});
    }
  }
  for (auto& [value, c] : node_counts) {
    if (c.networks.size() < pp.min_supp) continue;
    pp.node_labels.push_back(NodeLabelStats{c.label, value, c.networks.size(), std::move(c.locations)});
  }
  std::stable_sort(pp.node_labels.begin(), pp.node_labels.end(),
                   [](const auto& a, const auto& b) { return a.support > b.support; });

  std::map<LabelValue, int> dense;
  for (std::size_t k = 0; k < pp.node_labels.size(); ++k)
    dense.emplace(pp.node_labels[k].value, static_cast<int>(k));
  for (const auto& g : pp.transformed) {
    std::vector<int> labels(g.node_count(), -1);
    for (NodeId n = 0; n < g.node_count(); ++n) {
      auto it = dense.find(label_value(g.node(n).label, g.symbols()));
      if (it != dense.end()) labels[n] = it->second;
    }
    pp.dense_labels.push_back(std::move(labels));
    for (const auto& e : g.edges()) pp.delays.push_back(e.delay);
  }
  std::sort(pp.delays.begin(), pp.delays.end());
  pp.delays.erase(std::unique(pp.delays.begin(), pp.delays.end()), pp.delays.end());

  struct EdgeCount {
    EdgeType type;
    std::set<std::size_t> networks;
    std::vector<EdgeLocation> locations;
  };
  std::map<DfsStep, EdgeCount, StepLess> edge_counts;
  for (std::size_t i = 0; i < pp.transformed.size(); ++i) {
    const Cig& g = pp.transformed[i];
    const auto& labels = pp.dense_labels[i];
    for (const auto& e : g.edges()) {
      if (labels[e.from] < 0 || labels[e.to] < 0) continue;
      auto [type, flipped] = orient(labels[e.from], dense_delay(pp.delays, e.delay), labels[e.to]);
      auto& c = edge_counts[type.step()];
      c.type = type;
      c.networks.insert(i);
      c.locations.push_back(flipped ? EdgeLocation{i, e.to, e.from} : EdgeLocation{i, e.from, e.to});
    }
  }
  for (auto& [step, c] : edge_counts) {
    if (c.networks.size() < pp.min_supp) continue;
    pp.edge_types.push_back(EdgeTypeStats{c.type, c.networks.size(), std::move(c.locations)});
  }
  return pp;
}

// ---------------------------------------------------------------------------
// Shared pattern bookkeeping

TemporalNetwork occurrence_network(const DataSet& ds, const Cig& raw_cig, const Occurrence& occ,
                                   double epsilon) {
  const Cig sub = induced_subgraph(raw_cig, occ.nodes);
  Support support{&ds.network(occ.network), {}};
  for (const auto& node : sub.nodes()) support.edges.push_back(*node.source_edge);
  return reconstruct(sub, support, epsilon);
}

CanonicalLabel label_network(const TemporalNetwork& network, const IsoMode& iso, double epsilon) {
  return canonical_label(transform_labels(construct_cig(network, epsilon), iso));
}

namespace {

struct Accumulator {
  CanonicalLabel label;
  std::size_t size = 0;
  std::set<std::size_t> networks;
  Occurrence representative;
  std::set<Occurrence> embeddings;
};

/// Label-keyed pattern table shared by all workers.
class PatternTable {
 public:
  explicit PatternTable(bool collect) : collect_(collect) {}

  void merge(const CanonicalLabel& label, const std::set<std::size_t>& networks,
             const Occurrence& representative, const std::vector<Occurrence>& embeddings) {
    std::lock_guard lock(mu_);
    auto [it, fresh] = table_.try_emplace(label.text());
    Accumulator& acc = it->second;
    if (fresh) {
      acc.label = label;
      acc.size = representative.nodes.size();
      acc.representative = representative;
    } else if (representative < acc.representative) {
      acc.representative = representative;
    }
    acc.networks.insert(networks.begin(), networks.end());
    if (collect_) acc.embeddings.insert(embeddings.begin(), embeddings.end());
  }

  std::vector<Pattern> frequent(std::size_t min_supp) {
    std::vector<Pattern> out;
    for (auto& [text, acc] : table_) {
      if (acc.networks.size() < min_supp) continue;
      Pattern p;
      p.label = acc.label;
      p.size = acc.size;
      p.networks.assign(acc.networks.begin(), acc.networks.end());
      p.support = p.networks.size();
      p.representative = acc.representative;
      p.embeddings.assign(acc.embeddings.begin(), acc.embeddings.end());
      out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(), [](const Pattern& a, const Pattern& b) { return a.label < b.label; });
    return out;
  }

 private:
  bool collect_;
  std::mutex mu_;
  std::map<std::string, Accumulator> table_;
};

void add_stats(MineStats& into, const MineStats& s) {
  into.trees_explored += s.trees_explored;
  into.min_code_rejections += s.min_code_rejections;
  into.infrequent_children += s.infrequent_children;
  into.expansions_checked += s.expansions_checked;
  into.closure_violations += s.closure_violations;
  into.subsets_enumerated += s.subsets_enumerated;
}

struct Embedding {
  std::size_t network;
  std::vector<NodeId> map;  // position -> data node
};

struct Arc {
  NodeId node;
  int dir;
  int delay;
  std::size_t type;  // index into Preprocessed::edge_types
};

std::size_t distinct_networks(const std::vector<Embedding>& embs) {
  std::size_t count = 0;
  std::size_t last = static_cast<std::size_t>(-1);
  for (const auto& e : embs) {  // embeddings are grouped by network
    if (e.network != last) ++count;
    last = e.network;
  }
  return count;
}

class TreeMiner {
 public:
  TreeMiner(const DataSet& ds, const MinerConfig& config, const Preprocessed& pp, PatternTable& table)
      : ds_(ds), config_(config), pp_(pp), table_(table) {
    std::map<DfsStep, std::size_t, StepLess> type_index;
    for (std::size_t k = 0; k < pp.edge_types.size(); ++k) type_index.emplace(pp.edge_types[k].type.step(), k);
    for (std::size_t i = 0; i < pp.transformed.size(); ++i) {
      const Cig& g = pp.transformed[i];
      const auto& labels = pp.dense_labels[i];
      std::vector<std::vector<Arc>> adj(g.node_count());
      for (const auto& e : g.edges()) {
        if (labels[e.from] < 0 || labels[e.to] < 0) continue;
        const int d = dense_delay(pp.delays, e.delay);
        auto it = type_index.find(orient(labels[e.from], d, labels[e.to]).first.step());
        if (it == type_index.end()) continue;
        adj[e.from].push_back({e.to, kAlong, d, it->second});
        adj[e.to].push_back({e.from, kAgainst, d, it->second});
      }
      adjacency_.push_back(std::move(adj));
    }
  }

  void mine_single_nodes(MineStats& stats) {
    for (std::size_t k = 0; k < pp_.node_labels.size(); ++k) {
      std::vector<Embedding> embs;
      for (const auto& loc : pp_.node_labels[k].locations) embs.push_back({loc.network, loc.nodes});
      record(embs, stats);
    }
  }

  void mine_seed(std::size_t seed, MineStats& stats) {
    const auto& t = pp_.edge_types[seed];
    std::vector<Embedding> embs;
    for (const auto& loc : t.locations) embs.push_back({loc.network, {loc.first, loc.second}});
    DfsCode code{t.type.step()};
    std::vector<int> parent{-1, 0};
    grow(code, parent, embs, seed, t.support, stats);
  }

 private:
  void grow(DfsCode& code, std::vector<int>& parent, const std::vector<Embedding>& embs,
            std::size_t seed, std::size_t support, MineStats& stats) {
    record(embs, stats);
    const std::size_t nodes = parent.size();
    if (config_.max_pattern_edges && nodes >= *config_.max_pattern_edges) return;

    std::vector<int> path;  // rightmost path, deepest first
    for (int p = static_cast<int>(nodes) - 1; p >= 0; p = parent[p]) path.push_back(p);

    std::map<DfsStep, std::vector<Embedding>, StepLess> children;
    const int next = static_cast<int>(nodes);
    for (const auto& emb : embs) {
      const auto& labels = pp_.dense_labels[emb.network];
      for (int p : path) {
        const NodeId x = emb.map[p];
        for (const Arc& a : adjacency_[emb.network][x]) {
          if (a.type < seed) continue;  // seeds already exhausted
          if (std::find(emb.map.begin(), emb.map.end(), a.node) != emb.map.end()) continue;
          DfsStep s{p, next, labels[x], a.dir, a.delay, labels[a.node]};
          Embedding child = emb;
          child.map.push_back(a.node);
          children[s].push_back(std::move(child));
        }
      }
    }

    for (auto& [step, child_embs] : children) {
      code.push_back(step);
      if (!is_min_code(code)) {
        ++stats.min_code_rejections;
        code.pop_back();
        continue;
      }
      const std::size_t child_support = distinct_networks(child_embs);
      ++stats.expansions_checked;
      if (child_support > support) ++stats.closure_violations;
      if (child_support < pp_.min_supp) {
        ++stats.infrequent_children;
      } else {
        parent.push_back(step.from);
        grow(code, parent, child_embs, seed, child_support, stats);
        parent.pop_back();
      }
      code.pop_back();
    }
  }

  // Splits a tree's embeddings by the full CIG they induce, labels each
  // group once through its smallest occurrence and merges into the table.
  void record(const std::vector<Embedding>& embs, MineStats& stats) {
    ++stats.trees_explored;
    struct Group {
      std::set<std::size_t> networks;
      std::optional<Occurrence> representative;
      std::vector<Occurrence> occurrences;
    };
    using Signature = std::vector<std::tuple<int, int, double>>;
    std::map<Signature, Group> groups;
    for (const auto& emb : embs) {
      const Cig& g = pp_.transformed[emb.network];
      Signature sig;
      const int k = static_cast<int>(emb.map.size());
      for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
          auto e = g.find_edge(emb.map[a], emb.map[b]);
          if (!e) continue;
          const CigEdge& edge = g.edge(*e);
          if (edge.from == emb.map[a]) {
            sig.emplace_back(a, b, edge.delay);
          } else {
            sig.emplace_back(b, a, edge.delay);
          }
        }
      }
      std::sort(sig.begin(), sig.end());
      Group& group = groups[sig];
      Occurrence occ{emb.network, emb.map};
      std::sort(occ.nodes.begin(), occ.nodes.end());
      group.networks.insert(emb.network);
      if (!group.representative || occ < *group.representative) group.representative = occ;
      if (config_.collect_embeddings) group.occurrences.push_back(std::move(occ));
    }
    for (auto& [sig, group] : groups) {
      const Occurrence& rep = *group.representative;
      const TemporalNetwork net = occurrence_network(ds_, pp_.raw[rep.network], rep, config_.time_epsilon);
      table_.merge(label_network(net, config_.iso, config_.time_epsilon), group.networks, rep,
                   group.occurrences);
    }
  }

  const DataSet& ds_;
  const MinerConfig& config_;
  const Preprocessed& pp_;
  PatternTable& table_;
  std::vector<std::vector<std::vector<Arc>>> adjacency_;  // network -> node -> arcs
};

}  // namespace

MineResult mine(const DataSet& ds, const MinerConfig& config) {
  const Preprocessed pp = preprocess(ds, config);
  PatternTable table(config.collect_embeddings);
  TreeMiner miner(ds, config, pp, table);
  MineResult result;

  miner.mine_single_nodes(result.stats);
  const bool grow = !config.max_pattern_edges || *config.max_pattern_edges >= 2;
  const std::size_t seeds = grow ? pp.edge_types.size() : 0;

  std::atomic<std::size_t> next{0};
  std::mutex stats_mu;
  auto worker = [&] {
    MineStats local;
    for (std::size_t s = next++; s < seeds; s = next++) miner.mine_seed(s, local);
    std::lock_guard lock(stats_mu);
    add_stats(result.stats, local);
  };
  const std::size_t threads = std::min(config.workers, std::max<std::size_t>(seeds, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  result.patterns = table.frequent(pp.min_supp);
  return result;
}

MineResult mine_exhaustive(const DataSet& ds, const MinerConfig& config, std::size_t edge_cap) {
  config.validate();
  if (edge_cap > 20) throw ConfigError("edge cap above 20 is not supported by the exhaustive miner");
  for (const auto& net : ds.networks()) {
    if (net.size() > edge_cap)
      throw ConfigError("network '" + net.name() + "' has " + std::to_string(net.size()) +
                        " edges, above the exhaustive cap of " + std::to_string(edge_cap));
  }
  const std::size_t min_supp = config.min_supp.resolve(ds.size());
  const std::size_t max_size = config.max_pattern_edges.value_or(edge_cap);
  PatternTable table(config.collect_embeddings);
  MineResult result;

  for (std::size_t i = 0; i < ds.size(); ++i) {
    const TemporalNetwork& net = ds.network(i);
    const Cig g = construct_cig(net, config.time_epsilon);
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> neighbors(n, 0);
    for (const auto& e : g.edges()) {
      neighbors[e.from] |= 1u << e.to;
      neighbors[e.to] |= 1u << e.from;
    }
    // Breadth-first subset expansion from single nodes; every connected
    // subset is reached exactly once thanks to the seen table.
    std::vector<char> seen(std::size_t{1} << n, 0);
    std::vector<std::uint32_t> frontier;
    for (std::size_t v = 0; v < n; ++v) {
      seen[1u << v] = 1;
      frontier.push_back(1u << v);
    }
    while (!frontier.empty()) {
      std::vector<std::uint32_t> grown;
      for (std::uint32_t mask : frontier) {
        ++result.stats.subsets_enumerated;
        Occurrence occ{i, {}};
        std::vector<TemporalEdge> edges;
        std::uint32_t boundary = 0;
        for (std::size_t v = 0; v < n; ++v) {
          if (!(mask >> v & 1u)) continue;
          occ.nodes.push_back(static_cast<NodeId>(v));
          edges.push_back(net.edge(v));
          boundary |= neighbors[v];
        }
        const TemporalNetwork sub(net.name(), std::move(edges), net.symbols_ptr());
        table.merge(label_network(sub, config.iso, config.time_epsilon), {i}, occ, {occ});
        if (static_cast<std::size_t>(std::popcount(mask)) >= max_size) continue;
        boundary &= ~mask;
        for (std::size_t v = 0; v < n; ++v) {
          if (!(boundary >> v & 1u)) continue;
          const std::uint32_t next = mask | 1u << v;
          if (seen[next]) continue;
          seen[next] = 1;
          grown.push_back(next);
        }
      }
      frontier = std::move(grown);
    }
  }
  result.patterns = table.frequent(min_supp);
  return result;
}

}  // namespace cigmine
