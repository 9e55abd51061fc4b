#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cigmine/miner.hpp"
#include "cigmine/temporal.hpp"

namespace cigmine {

/// One reconstructed pattern edge, in edge-list column order.
struct EdgeRow {
  std::string u;
  std::string v;
  std::string attr_u;
  std::string attr_e;
  std::string attr_v;
  double start = 0.0;
  double duration = 0.0;

  friend bool operator==(const EdgeRow&, const EdgeRow&) = default;
};

struct PatternRecord {
  std::string label;
  std::size_t edge_count = 0;
  std::size_t support = 0;
  std::vector<std::string> networks;
  std::vector<EdgeRow> edges;  // base time 0

  friend bool operator==(const PatternRecord&, const PatternRecord&) = default;
};

struct RunReport {
  nlohmann::json config = nlohmann::json::object();
  std::vector<PatternRecord> patterns;
  std::map<std::size_t, std::size_t> histogram;  // edge count -> patterns
  std::map<std::string, double> timings;          // seconds per phase

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

void to_json(nlohmann::json& j, const EdgeRow& row);
void from_json(const nlohmann::json& j, EdgeRow& row);
void to_json(nlohmann::json& j, const PatternRecord& record);
void from_json(const nlohmann::json& j, PatternRecord& record);
void to_json(nlohmann::json& j, const RunReport& report);
void from_json(const nlohmann::json& j, RunReport& report);

/// Pattern count per edge count, keys 1..max(1, largest pattern).
std::map<std::size_t, std::size_t> histogram_of(const std::vector<PatternRecord>& patterns);

/// Records in mining order. Each edge list is rebuilt from the pattern's
/// representative occurrence; vertex names are replaced by v0, v1, ...
/// unless `with_support_ids` is set.
std::vector<PatternRecord> pattern_records(const DataSet& ds, const MineResult& result,
                                           double time_epsilon, bool with_support_ids);

/// The `patterns` array alone, serialized deterministically.
std::string patterns_section(const RunReport& report);

std::string serialize(const RunReport& report);
RunReport parse_report(const std::string& text);

void write_summary(std::ostream& out, const RunReport& report);

}  // namespace cigmine
