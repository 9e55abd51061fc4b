#include "cigmine/report.hpp"

#include <algorithm>
#include <optional>
#include <ostream>

namespace cigmine {

using nlohmann::json;

void to_json(json& j, const EdgeRow& r) {
  j = json::array({r.u, r.v, r.attr_u, r.attr_e, r.attr_v, r.start, r.duration});
}

void from_json(const json& j, EdgeRow& r) {
  if (!j.is_array() || j.size() != 7) throw std::invalid_argument("edge row must have 7 columns");
  r.u = j[0].get<std::string>();
  r.v = j[1].get<std::string>();
  r.attr_u = j[2].get<std::string>();
  r.attr_e = j[3].get<std::string>();
  r.attr_v = j[4].get<std::string>();
  r.start = j[5].get<double>();
  r.duration = j[6].get<double>();
}

void to_json(json& j, const PatternRecord& p) {
  j = json{{"label", p.label},
           {"edge_count", p.edge_count},
           {"support", p.support},
           {"networks", p.networks},
           {"edges", p.edges}};
}

void from_json(const json& j, PatternRecord& p) {
  j.at("label").get_to(p.label);
  j.at("edge_count").get_to(p.edge_count);
  j.at("support").get_to(p.support);
  j.at("networks").get_to(p.networks);
  j.at("edges").get_to(p.edges);
}

void to_json(json& j, const RunReport& r) {
  json hist = json::object();
  for (const auto& [size, count] : r.histogram) hist[std::to_string(size)] = count;
  j = json{{"config", r.config}, {"patterns", r.patterns}, {"histogram", hist}, {"timings", r.timings}};
}

void from_json(const json& j, RunReport& r) {
  r.config = j.at("config");
  j.at("patterns").get_to(r.patterns);
  r.histogram.clear();
  for (const auto& [key, count] : j.at("histogram").items())
    r.histogram[std::stoul(key)] = count.get<std::size_t>();
  j.at("timings").get_to(r.timings);
}

std::map<std::size_t, std::size_t> histogram_of(const std::vector<PatternRecord>& patterns) {
  std::size_t largest = 1;
  for (const auto& p : patterns) largest = std::max(largest, p.edge_count);
  std::map<std::size_t, std::size_t> hist;
  for (std::size_t k = 1; k <= largest; ++k) hist[k] = 0;
  for (const auto& p : patterns) ++hist[p.edge_count];
  return hist;
}

std::vector<PatternRecord> pattern_records(const DataSet& ds, const MineResult& result,
                                           double time_epsilon, bool with_support_ids) {
  std::vector<std::optional<Cig>> cigs(ds.size());
  std::vector<PatternRecord> out;
  out.reserve(result.patterns.size());
  const auto& symbols = ds.symbols();
  for (const auto& p : result.patterns) {
    const auto& rep = p.representative;
    if (!cigs[rep.network]) cigs[rep.network] = construct_cig(ds.network(rep.network), time_epsilon);
    TemporalNetwork net = occurrence_network(ds, *cigs[rep.network], rep, time_epsilon);
    if (!with_support_ids) net = anonymize_vertices(net);

    PatternRecord rec;
    rec.label = p.label.text();
    rec.edge_count = p.size;
    rec.support = p.support;
    for (std::size_t n : p.networks) rec.networks.push_back(ds.network(n).name());
    for (const auto& e : net.edges()) {
      rec.edges.push_back(EdgeRow{symbols.vertices.name(e.u), symbols.vertices.name(e.v),
                                  symbols.attributes.name(e.attr_u), symbols.attributes.name(e.attr_e),
                                  symbols.attributes.name(e.attr_v), e.start, e.duration});
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::string patterns_section(const RunReport& report) {
  return json(report.patterns).dump(2);
}

std::string serialize(const RunReport& report) { return json(report).dump(2) + "\n"; }

RunReport parse_report(const std::string& text) { return json::parse(text).get<RunReport>(); }

void write_summary(std::ostream& out, const RunReport& report) {
  out << "patterns: " << report.patterns.size() << '\n';
  out << "|E|  |s|\n";
  for (const auto& [size, count] : report.histogram) out << size << "  " << count << '\n';
  for (const auto& [phase, secs] : report.timings) out << phase << ": " << secs << " s\n";
}

}  // namespace cigmine
