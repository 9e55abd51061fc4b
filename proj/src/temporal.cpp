#include "cigmine/temporal.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

namespace cigmine {

namespace {

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_blank_or_comment(const std::vector<std::string_view>& tokens) {
  return tokens.empty() || tokens.front().front() == '#';
}

std::optional<double> to_double(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

// ---------------------------------------------------------------------------

std::uint32_t Interner::intern(std::string_view name) {
  {
    std::shared_lock lock(mu_);
    if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<std::uint32_t> Interner::find(std::string_view name) const {
  std::shared_lock lock(mu_);
  if (auto it = ids_.find(name); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& Interner::name(std::uint32_t id) const {
  std::shared_lock lock(mu_);
  return names_.at(id);
}

std::size_t Interner::size() const {
  std::shared_lock lock(mu_);
  return names_.size();
}

SymbolTablePtr make_symbols() { return std::make_shared<SymbolTable>(); }

// ---------------------------------------------------------------------------

TemporalEdge normalize_endpoints(const TemporalEdge& e, const SymbolTable& symbols) {
  if (symbols.vertices.name(e.v) < symbols.vertices.name(e.u)) {
    TemporalEdge swapped = e;
    std::swap(swapped.u, swapped.v);
    std::swap(swapped.attr_u, swapped.attr_v);
    return swapped;
  }
  return e;
}

namespace {

void validate_edge(const TemporalEdge& e) {
  if (e.u == e.v) throw ValidationError("self-interaction edges are not supported");
  if (!std::isfinite(e.start) || !std::isfinite(e.duration))
    throw ValidationError("edge times must be finite");
  if (e.duration < 0.0) throw ValidationError("negative edge duration");
}

}  // namespace

TemporalEdge make_edge(SymbolTable& symbols, std::string_view u, std::string_view v,
                       std::string_view attr_u, std::string_view attr_e,
                       std::string_view attr_v, double start, double duration) {
  TemporalEdge e;
  e.u = symbols.vertices.intern(u);
  e.v = symbols.vertices.intern(v);
  e.attr_u = symbols.attributes.intern(attr_u);
  e.attr_e = symbols.attributes.intern(attr_e);
  e.attr_v = symbols.attributes.intern(attr_v);
  e.start = start;
  e.duration = duration;
  validate_edge(e);
  return normalize_endpoints(e, symbols);
}

TemporalNetwork::TemporalNetwork(std::string name, std::vector<TemporalEdge> edges,
                                 SymbolTablePtr symbols)
    : name_(std::move(name)), edges_(std::move(edges)), symbols_(std::move(symbols)) {
  if (!symbols_) throw std::invalid_argument("TemporalNetwork requires a symbol table");
  for (auto& e : edges_) {
    validate_edge(e);
    e = normalize_endpoints(e, *symbols_);
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) { return a.start < b.start; });
  vertices_.reserve(edges_.size() * 2);
  for (const auto& e : edges_) {
    vertices_.push_back(e.u);
    vertices_.push_back(e.v);
  }
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
}

DataSet::DataSet(SymbolTablePtr symbols) : symbols_(std::move(symbols)) {
  if (!symbols_) throw std::invalid_argument("DataSet requires a symbol table");
}

DataSet::DataSet(SymbolTablePtr symbols, std::vector<TemporalNetwork> networks)
    : DataSet(std::move(symbols)) {
  for (auto& n : networks) add(std::move(n));
}

void DataSet::add(TemporalNetwork network) {
  if (network.symbols_ptr() != symbols_)
    throw ValidationError("network '" + network.name() + "' uses a different symbol table");
  for (const auto& existing : networks_)
    if (existing.name() == network.name())
      throw ValidationError("duplicate network name '" + network.name() + "'");
  networks_.push_back(std::move(network));
}

// ---------------------------------------------------------------------------

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

TemporalNetwork parse_edge_list(std::istream& in, std::string name, SymbolTablePtr symbols) {
  std::vector<TemporalEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_whitespace(line);
    if (is_blank_or_comment(tokens)) continue;
    if (tokens.size() != 7)
      throw ParseError(line_no, "expected 7 columns, got " + std::to_string(tokens.size()));
    auto start = to_double(tokens[5]);
    auto duration = to_double(tokens[6]);
    if (!start) throw ParseError(line_no, "invalid start time '" + std::string(tokens[5]) + "'");
    if (!duration)
      throw ParseError(line_no, "invalid duration '" + std::string(tokens[6]) + "'");
    try {
      edges.push_back(make_edge(*symbols, tokens[0], tokens[1], tokens[2], tokens[3], tokens[4],
                                *start, *duration));
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return TemporalNetwork(std::move(name), std::move(edges), std::move(symbols));
}

void write_edge_list(std::ostream& out, const TemporalNetwork& network) {
  const auto& sym = network.symbols();
  for (const auto& e : network.edges()) {
    out << sym.vertices.name(e.u) << ' ' << sym.vertices.name(e.v) << ' '
        << sym.attributes.name(e.attr_u) << ' ' << sym.attributes.name(e.attr_e) << ' '
        << sym.attributes.name(e.attr_v) << ' ' << format_number(e.start) << ' '
        << format_number(e.duration) << '\n';
  }
}

TemporalNetwork load_edge_list_file(const std::string& path, SymbolTablePtr symbols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_edge_list(in, std::filesystem::path(path).stem().string(), std::move(symbols));
}

DataSet load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: '" + dir + "'");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto& p = entry.path();
    if (p.filename().string().starts_with(".")) continue;
    if (p.extension() == ".edges" || p.extension() == ".txt") files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  DataSet ds(make_symbols());
  for (const auto& f : files) {
    try {
      ds.add(load_edge_list_file(f.string(), ds.symbols_ptr()));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), f.filename().string() + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(f.filename().string() + ": " + e.what());
    }
  }
  return ds;
}

// ---------------------------------------------------------------------------

std::vector<Contact> parse_contacts(std::istream& in, SymbolTable& symbols) {
  std::vector<Contact> contacts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = split_whitespace(line);
    if (is_blank_or_comment(tokens)) continue;
    if (tokens.size() != 3 && tokens.size() != 5)
      throw ParseError(line_no, "expected 3 or 5 columns, got " + std::to_string(tokens.size()));
    auto t = to_double(tokens[0]);
    if (!t) throw ParseError(line_no, "invalid contact time '" + std::string(tokens[0]) + "'");
    if (tokens[1] == tokens[2])
      throw ValidationError("line " + std::to_string(line_no) + ": self-contact");
    std::string_view ci = tokens.size() == 5 ? tokens[3] : kDefaultVertexAttribute;
    std::string_view cj = tokens.size() == 5 ? tokens[4] : kDefaultVertexAttribute;
    Contact c;
    c.time = *t;
    c.u = symbols.vertices.intern(tokens[1]);
    c.v = symbols.vertices.intern(tokens[2]);
    c.attr_u = symbols.attributes.intern(ci);
    c.attr_v = symbols.attributes.intern(cj);
    contacts.push_back(c);
  }
  return contacts;
}

TemporalNetwork merge_contacts(std::span<const Contact> contacts, double resolution,
                               std::string name, SymbolTablePtr symbols) {
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw ValidationError("contact resolution must be positive");
  const AttrId edge_attr = symbols->attributes.intern(kContactEdgeAttribute);

  // Group by normalized (u, v, attr_u, attr_v).
  using Key = std::tuple<VertexId, VertexId, AttrId, AttrId>;
  std::map<Key, std::vector<double>> times;
  for (const auto& c : contacts) {
    if (c.u == c.v) throw ValidationError("self-contact");
    TemporalEdge e{c.u, c.v, c.attr_u, edge_attr, c.attr_v, c.time, 0.0};
    e = normalize_endpoints(e, *symbols);
    times[{e.u, e.v, e.attr_u, e.attr_v}].push_back(c.time);
  }

  const double tolerance = 1e-9 * std::max(1.0, resolution);
  std::vector<TemporalEdge> edges;
  for (auto& [key, ts] : times) {
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    auto [u, v, au, av] = key;
    std::size_t i = 0;
    while (i < ts.size()) {
      std::size_t j = i;
      while (j + 1 < ts.size() && ts[j + 1] - ts[j] <= resolution + tolerance) ++j;
      const double start = ts[i] - resolution;
      edges.push_back(TemporalEdge{u, v, au, edge_attr, av, start, ts[j] - start});
      i = j + 1;
    }
  }
  return TemporalNetwork(std::move(name), std::move(edges), std::move(symbols));
}

WindowSplit split_by_window(const TemporalNetwork& network, std::span<const double> boundaries) {
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i - 1] < boundaries[i]))
      throw ValidationError("window boundaries must be strictly increasing");

  const std::size_t windows = boundaries.size() + 1;
  std::vector<std::vector<TemporalEdge>> buckets(windows);
  WindowSplit out;
  for (const auto& e : network.edges()) {
    if (e.start < 0.0) {
      ++out.dropped;
      continue;
    }
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), e.start);
    const auto w = static_cast<std::size_t>(it - boundaries.begin());
    TemporalEdge shifted = e;
    shifted.start -= w == 0 ? 0.0 : boundaries[w - 1];
    buckets[w].push_back(shifted);
  }
  for (std::size_t w = 0; w < windows; ++w) {
    if (buckets[w].empty()) continue;
    out.networks.emplace_back(network.name() + "_" + std::to_string(w), std::move(buckets[w]),
                              network.symbols_ptr());
  }
  return out;
}

}  // namespace cigmine
