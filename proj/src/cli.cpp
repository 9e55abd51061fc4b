#include "cigmine/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cigmine/miner.hpp"
#include "cigmine/report.hpp"
#include "cigmine/temporal.hpp"

namespace cigmine {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ConvertArgs {
  std::string input;
  std::string format;
  std::optional<double> resolution;
  std::string windows;
  std::string out;
  std::string name;
};

struct MineArgs {
  std::string data;
  std::string min_supp;
  std::string iso;
  std::optional<double> duration_bin;
  std::optional<double> delay_bin;
  std::optional<std::size_t> max_edges;
  std::size_t workers = 1;
  double epsilon = 0.0;
  std::string out;
  bool with_support_ids = false;
  std::size_t edge_cap = kDefaultEdgeCap;
};

std::vector<double> parse_boundaries(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("bad window boundary '" + item + "'");
    out.push_back(v);
  }
  return out;
}

int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  if (a.format == "sociopatterns" && !a.resolution)
    throw ConfigError("--resolution is required for the sociopatterns format");
  if (a.resolution && !(*a.resolution > 0.0)) throw ConfigError("--resolution must be positive");
  const std::vector<double> boundaries = parse_boundaries(a.windows);
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i - 1] < boundaries[i])) throw ConfigError("window boundaries must increase");

  auto symbols = make_symbols();
  const std::string name = a.name.empty() ? fs::path(a.input).stem().string() : a.name;
  std::ifstream in(a.input);
  if (!in) throw std::runtime_error("cannot open '" + a.input + "'");

  std::optional<TemporalNetwork> network;
  if (a.format == "edgelist") {
    network.emplace(parse_edge_list(in, name, symbols));
  } else {
    const auto contacts = parse_contacts(in, *symbols);
    network.emplace(merge_contacts(contacts, *a.resolution, name, symbols));
  }

  std::vector<TemporalNetwork> networks;
  std::size_t dropped = 0;
  if (boundaries.empty()) {
    if (!network->empty()) networks.push_back(std::move(*network));
  } else {
    WindowSplit split = split_by_window(*network, boundaries);
    networks = std::move(split.networks);
    dropped = split.dropped;
  }

  fs::create_directories(a.out);
  double vertices = 0.0;
  double edges = 0.0;
  for (const auto& net : networks) {
    const fs::path path = fs::path(a.out) / (net.name() + ".edges");
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_edge_list(file, net);
    out << net.name() << " edges " << net.size() << " vertices " << net.vertices().size() << '\n';
    vertices += static_cast<double>(net.vertices().size());
    edges += static_cast<double>(net.size());
  }
  const double n = static_cast<double>(networks.size());
  out << "networks " << networks.size() << '\n';
  out << std::fixed << std::setprecision(2) << "average vertices " << (n > 0 ? vertices / n : 0.0)
      << '\n'
      << "average edges " << (n > 0 ? edges / n : 0.0) << '\n'
      << std::defaultfloat;
  if (dropped) out << "dropped " << dropped << " edges starting before 0\n";
  return kExitOk;
}

MinerConfig make_config(const MineArgs& a) {
  MinerConfig c;
  c.min_supp = MinSupport::parse(a.min_supp);
  c.iso = IsoMode::parse(a.iso, a.duration_bin, a.delay_bin);
  c.max_pattern_edges = a.max_edges;
  c.time_epsilon = a.epsilon;
  c.workers = a.workers;
  c.collect_embeddings = false;
  c.validate();
  return c;
}

nlohmann::json config_echo(const std::string& command, const MineArgs& a, const MinerConfig& c,
                           const DataSet& ds) {
  auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j{{"command", command},
                   {"data", a.data},
                   {"networks", ds.size()},
                   {"min_supp", c.min_supp.text()},
                   {"min_supp_resolved", c.min_supp.resolve(ds.size())},
                   {"iso", c.iso.flag()},
                   {"duration_bin", opt(c.iso.duration_bin)},
                   {"delay_bin", opt(c.iso.delay_bin)},
                   {"max_edges", opt(c.max_pattern_edges)},
                   {"time_epsilon", c.time_epsilon},
                   {"workers", c.workers},
                   {"with_support_ids", a.with_support_ids}};
  if (command == "oracle") j["edge_cap"] = a.edge_cap;
  return j;
}

int cmd_mine(const std::string& command, const MineArgs& a, std::ostream& out, std::ostream& err) {
  const MinerConfig config = make_config(a);  // usage errors surface before any I/O

  RunReport report;
  auto t0 = Clock::now();
  const DataSet ds = load_dataset(a.data);
  if (ds.empty()) throw ValidationError("no edge-list files in '" + a.data + "'");
  report.timings["load"] = seconds_since(t0);

  if (command == "oracle") {
    for (const auto& net : ds.networks()) {
      if (net.size() > a.edge_cap) {
        err << "oracle: network '" << net.name() << "' has " << net.size()
            << " edges, above the cap of " << a.edge_cap << "; refusing to run\n";
        return kExitData;
      }
    }
  }

  t0 = Clock::now();
  const MineResult result =
      command == "oracle" ? mine_exhaustive(ds, config, a.edge_cap) : mine(ds, config);
  report.timings["mine"] = seconds_since(t0);

  t0 = Clock::now();
  report.config = config_echo(command, a, config, ds);
  report.patterns = pattern_records(ds, result, config.time_epsilon, a.with_support_ids);
  report.histogram = histogram_of(report.patterns);
  report.timings["report"] = seconds_since(t0);

  std::ofstream file(a.out);
  if (!file) throw std::runtime_error("cannot write '" + a.out + "'");
  file << serialize(report);
  write_summary(out, report);
  return kExitOk;
}

void add_mine_options(CLI::App* cmd, MineArgs& a) {
  cmd->add_option("--data", a.data, "Directory of edge-list files")->required();
  cmd->add_option("--min-supp", a.min_supp, "Support threshold: count N or fraction")->required();
  cmd->add_option("--iso", a.iso, "Isomorphism mode")
      ->required()
      ->check(CLI::IsMember({"e", "i", "es", "is"}));
  cmd->add_option("--duration-bin", a.duration_bin, "Duration bin width (modes i, is)");
  cmd->add_option("--delay-bin", a.delay_bin, "Delay bin width (mode i only)");
  cmd->add_option("--max-edges", a.max_edges, "Largest pattern, in temporal edges");
  cmd->add_option("--workers", a.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", a.epsilon, "Time tolerance for overlap tests");
  cmd->add_option("--out", a.out, "Report file (JSON)")->required();
  cmd->add_flag("--with-support-ids", a.with_support_ids,
                "Keep original vertex names in reconstructed patterns");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequent temporal pattern mining over constrained interval graphs", "cigmine"};
  app.require_subcommand(1);

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "Convert contact or edge-list data to edge-list files");
  c->add_option("input", convert.input, "Input file")->required();
  c->add_option("--format", convert.format, "Input format")
      ->required()
      ->check(CLI::IsMember({"edgelist", "sociopatterns"}));
  c->add_option("--resolution", convert.resolution, "Contact resolution in seconds");
  c->add_option("--windows", convert.windows, "Comma-separated window boundaries");
  c->add_option("--out", convert.out, "Output directory")->required();
  c->add_option("--name", convert.name, "Network name (default: input file stem)");

  MineArgs mine_args;
  auto* m = app.add_subcommand("mine", "Mine frequent temporal patterns");
  add_mine_options(m, mine_args);

  MineArgs oracle_args;
  auto* o = app.add_subcommand("oracle", "Exhaustive reference miner for small networks");
  add_mine_options(o, oracle_args);
  o->add_option("--edge-cap", oracle_args.edge_cap, "Largest network the oracle accepts");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_convert(convert, out);
    if (m->parsed()) return cmd_mine("mine", mine_args, out, err);
    return cmd_mine("oracle", oracle_args, out, err);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace cigmine
