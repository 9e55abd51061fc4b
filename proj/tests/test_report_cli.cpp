#include <gtest/gtest.h>

#include <sstream>

#include "cigmine/cli.hpp"
#include "cigmine/report.hpp"
#include "support/testkit.hpp"

using namespace cigmine;
namespace fs = std::filesystem;

#ifndef CIGMINE_TEST_DATA
#error "CIGMINE_TEST_DATA must point at tests/data"
#endif

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

const fs::path kData = CIGMINE_TEST_DATA;

}  // namespace

TEST(Report, JsonRoundTrip) {
  RunReport r;
  r.config = {{"iso", "e"}, {"min_supp", "3"}, {"duration_bin", nullptr}};
  r.patterns.push_back({"0 0 a c a 1 - - - - - -", 1, 3, {"n0", "n1", "n2"},
                        {{"v0", "v1", "a", "c", "a", 0.0, 1.0}}});
  r.patterns.push_back({"0 1 a c a 1 > 0.1 b c b 2.5", 2, 2, {"n0", "n2"},
                        {{"v0", "v1", "a", "c", "a", 0.0, 1.0}, {"v1", "v2", "b", "c", "b", 0.1, 2.5}}});
  r.histogram = histogram_of(r.patterns);
  r.timings = {{"load", 0.25}, {"mine", 1.0 / 3.0}};
  const RunReport back = parse_report(serialize(r));
  EXPECT_EQ(back, r);
  EXPECT_EQ(serialize(back), serialize(r));
}

TEST(Report, HistogramKeys) {
  EXPECT_EQ(histogram_of({}), (std::map<std::size_t, std::size_t>{{1, 0}}));
  std::vector<PatternRecord> ps(3);
  ps[0].edge_count = 1;
  ps[1].edge_count = 3;
  ps[2].edge_count = 3;
  EXPECT_EQ(histogram_of(ps), (std::map<std::size_t, std::size_t>{{1, 1}, {2, 0}, {3, 2}}));
}

TEST(Cli, MineToyMatchesGolden) {
  testkit::TempDir tmp("golden");
  const auto out = tmp.path / "r.json";
  auto run = cli({"mine", "--data", (kData / "toy").string(), "--min-supp", "3", "--iso", "e", "--out",
                  out.string()});
  ASSERT_EQ(run.code, 0) << run.err;
  const RunReport report = parse_report(testkit::read_file(out));
  std::string golden = testkit::read_file(kData / "toy_golden_e3.json");
  while (!golden.empty() && golden.back() == '\n') golden.pop_back();
  EXPECT_EQ(patterns_section(report), golden);

  std::size_t total = 0;
  for (const auto& [k, v] : report.histogram) total += v;
  EXPECT_EQ(total, report.patterns.size());
  EXPECT_EQ(report.histogram, histogram_of(report.patterns));
  for (const auto& [phase, secs] : report.timings) EXPECT_GE(secs, 0.0) << phase;
  EXPECT_EQ(report.config["min_supp_resolved"], 3);
  EXPECT_NE(run.out.find("patterns: "), std::string::npos);
}

TEST(Cli, RecordsRelabelToTheirLabel) {
  testkit::TempDir tmp("relabel");
  for (const std::string iso : {"e", "i", "es", "is"}) {
    const auto out = tmp.path / ("r_" + iso + ".json");
    std::vector<std::string> args{"mine", "--data", (kData / "toy").string(), "--min-supp", "2", "--iso", iso,
                                  "--out", out.string()};
    if (iso == "i" || iso == "is") {
      args.push_back("--duration-bin");
      args.push_back("4");
    }
    ASSERT_EQ(cli(args).code, 0);
    const RunReport report = parse_report(testkit::read_file(out));
    const IsoMode mode = IsoMode::parse(iso, iso == "i" || iso == "is" ? std::optional<double>(4.0) : std::nullopt);
    ASSERT_FALSE(report.patterns.empty());
    for (const auto& p : report.patterns) {
      auto symbols = make_symbols();
      std::ostringstream text;
      for (const auto& e : p.edges)
        text << e.u << ' ' << e.v << ' ' << e.attr_u << ' ' << e.attr_e << ' ' << e.attr_v << ' '
             << format_number(e.start) << ' ' << format_number(e.duration) << '\n';
      std::istringstream in(text.str());
      const auto n = parse_edge_list(in, "p", symbols);
      EXPECT_EQ(label_network(n, mode).text(), p.label);
      EXPECT_EQ(n.size(), p.edge_count);
      for (const auto& e : p.edges) EXPECT_EQ(e.u[0], 'v');  // anonymized by default
    }
  }
}

TEST(Cli, SupportIdsFlagKeepsVertexNames) {
  testkit::TempDir tmp("ids");
  const auto out = tmp.path / "r.json";
  ASSERT_EQ(cli({"mine", "--data", (kData / "toy").string(), "--min-supp", "3", "--iso", "e", "--out",
                 out.string(), "--with-support-ids"})
                .code,
            0);
  const RunReport report = parse_report(testkit::read_file(out));
  std::set<std::string> names;
  for (const auto& p : report.patterns)
    for (const auto& e : p.edges) names.insert(e.u);
  EXPECT_TRUE(names.count("A"));
}

TEST(Cli, ThresholdAboveNetworkCount) {
  testkit::TempDir tmp("empty");
  const auto out = tmp.path / "r.json";
  auto run = cli({"mine", "--data", (kData / "toy").string(), "--min-supp", "4", "--iso", "e", "--out",
                  out.string()});
  ASSERT_EQ(run.code, 0);
  const RunReport report = parse_report(testkit::read_file(out));
  EXPECT_TRUE(report.patterns.empty());
  EXPECT_EQ(report.histogram, (std::map<std::size_t, std::size_t>{{1, 0}}));
}

TEST(Cli, WorkersDoNotChangePatterns) {
  testkit::TempDir tmp("workers");
  std::string sections[2];
  int k = 0;
  for (const char* w : {"1", "8"}) {
    const auto out = tmp.path / (std::string("r") + w + ".json");
    ASSERT_EQ(cli({"mine", "--data", (kData / "toy").string(), "--min-supp", "0.6", "--iso", "es",
                   "--workers", w, "--out", out.string()})
                  .code,
              0);
    sections[k++] = patterns_section(parse_report(testkit::read_file(out)));
  }
  EXPECT_EQ(sections[0], sections[1]);
}

TEST(Cli, OracleMatchesMineOnToy) {
  testkit::TempDir tmp("oracle");
  std::string sections[2];
  int k = 0;
  for (const char* cmd : {"mine", "oracle"}) {
    const auto out = tmp.path / (std::string(cmd) + ".json");
    ASSERT_EQ(cli({cmd, "--data", (kData / "toy").string(), "--min-supp", "2", "--iso", "i", "--duration-bin",
                   "5", "--out", out.string()})
                  .code,
              0);
    sections[k++] = patterns_section(parse_report(testkit::read_file(out)));
  }
  EXPECT_EQ(sections[0], sections[1]);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"mine", "--data", "x", "--min-supp", "2", "--iso", "q", "--out", "o"}).code, kExitUsage);
  // bin with an exact mode is rejected before the (missing) data is touched
  auto run = cli({"mine", "--data", "/nonexistent", "--min-supp", "2", "--iso", "e", "--duration-bin", "5",
                  "--out", "o"});
  EXPECT_EQ(run.code, kExitUsage);
  EXPECT_NE(run.err.find("usage error"), std::string::npos);
  EXPECT_EQ(cli({"mine", "--data", "/nonexistent", "--min-supp", "0", "--iso", "e", "--out", "o"}).code,
            kExitUsage);
  EXPECT_EQ(cli({"convert", "in.txt", "--format", "csv", "--out", "o"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, DataErrors) {
  testkit::TempDir tmp("data");
  EXPECT_EQ(cli({"mine", "--data", (tmp.path / "none").string(), "--min-supp", "1", "--iso", "e", "--out",
                 (tmp.path / "o.json").string()})
                .code,
            kExitData);
  std::ofstream(tmp.path / "bad.edges") << "A B x y\n";
  EXPECT_EQ(cli({"mine", "--data", tmp.path.string(), "--min-supp", "1", "--iso", "e", "--out",
                 (tmp.path / "o.json").string()})
                .code,
            kExitData);
  EXPECT_EQ(cli({"convert", (tmp.path / "missing.txt").string(), "--format", "edgelist", "--out",
                 (tmp.path / "out").string()})
                .code,
            kExitData);
}

TEST(Cli, OracleCapAndSingleEdge) {
  testkit::TempDir tmp("cap");
  {
    std::ofstream f(tmp.path / "one.edges");
    f << "A B x e y 0 1\n";
  }
  const auto out = tmp.path / "o.json";
  ASSERT_EQ(cli({"oracle", "--data", tmp.path.string(), "--min-supp", "1", "--iso", "e", "--out", out.string()})
                .code,
            0);
  EXPECT_EQ(parse_report(testkit::read_file(out)).patterns.size(), 1u);
  EXPECT_EQ(cli({"oracle", "--data", (kData / "toy").string(), "--min-supp", "1", "--iso", "e", "--edge-cap",
                 "5", "--out", out.string()})
                .code,
            kExitData);
}

TEST(Cli, ConvertContacts) {
  testkit::TempDir tmp("convert");
  std::ofstream(tmp.path / "day.dat") << "20 1 2 NUR PAT\n40 1 2 NUR PAT\n60 1 2 NUR PAT\n";
  auto run = cli({"convert", (tmp.path / "day.dat").string(), "--format", "sociopatterns", "--resolution", "20",
                  "--out", (tmp.path / "out").string()});
  ASSERT_EQ(run.code, 0) << run.err;
  auto ds = load_dataset((tmp.path / "out").string());
  ASSERT_EQ(ds.size(), 1u);
  ASSERT_EQ(ds.network(0).size(), 1u);
  EXPECT_EQ(ds.network(0).edge(0).duration, 60.0);
  EXPECT_NE(run.out.find("networks 1"), std::string::npos);

  std::ofstream(tmp.path / "empty.dat").close();
  run = cli({"convert", (tmp.path / "empty.dat").string(), "--format", "sociopatterns", "--resolution", "20",
             "--out", (tmp.path / "out2").string()});
  EXPECT_EQ(run.code, 0);
  EXPECT_NE(run.out.find("networks 0"), std::string::npos);
  EXPECT_EQ(cli({"convert", (tmp.path / "day.dat").string(), "--format", "sociopatterns", "--out",
                 (tmp.path / "out3").string()})
                .code,
            kExitUsage);
}

TEST(Cli, ConvertWithWindows) {
  testkit::TempDir tmp("windows");
  std::ofstream(tmp.path / "w.edges") << "A B x e y 1 1\nA C x e y 25 1\nB C x e y 60 1\n";
  auto run = cli({"convert", (tmp.path / "w.edges").string(), "--format", "edgelist", "--windows", "24,50",
                  "--out", (tmp.path / "out").string()});
  ASSERT_EQ(run.code, 0) << run.err;
  auto ds = load_dataset((tmp.path / "out").string());
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds.network(2).name(), "w_2");
  EXPECT_EQ(ds.network(2).edge(0).start, 10.0);
  EXPECT_EQ(cli({"convert", (tmp.path / "w.edges").string(), "--format", "edgelist", "--windows", "5,x",
                 "--out", (tmp.path / "o").string()})
                .code,
            kExitUsage);
}
