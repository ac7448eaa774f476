#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "../tools/cli.hpp"
#include "bisam/report.hpp"
#include "support.hpp"

namespace bisam {
namespace {

using report::json;
using testing::TempDir;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    small_ = dir_.file("small.dat");
    testing::write_text(small_, "1 2\n1 2\n1 3\n");
    random_ = dir_.file("random.dat");
    std::ofstream out(random_);
    write_transactions(out, testing::random_db(4, 400, 50, 12));
  }

  TempDir dir_;
  std::filesystem::path small_;
  std::filesystem::path random_;
};

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"mine", small_.string()}).code, cli::kUsage);
  EXPECT_EQ(run({"mine", small_.string(), "--delta", "0"}).code, cli::kUsage);
  EXPECT_EQ(run({"mine", small_.string(), "--delta", "0.5", "--measure", "cos"}).code,
            cli::kUsage);
  EXPECT_EQ(run({"mine", small_.string(), "--delta", "0.5", "--format", "xml"}).code,
            cli::kUsage);
  EXPECT_EQ(run({"mine", small_.string(), "--delta", "0.5", "--mu", "0"}).code, cli::kUsage);
  const auto o = run({"adaptive", small_.string(), "--top-k", "3", "--min-delta", "0.2"});
  EXPECT_EQ(o.code, cli::kUsage);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(Cli, HelpSucceeds) { EXPECT_EQ(run({"--help"}).code, cli::kOk); }

TEST_F(Cli, DataErrors) {
  EXPECT_EQ(run({"stats", dir_.file("missing.dat").string()}).code, cli::kData);
  const auto bad = dir_.file("bad.dat");
  testing::write_text(bad, "1 2\n3 x\n");
  const auto o = run({"mine", bad.string(), "--delta", "0.5"});
  EXPECT_EQ(o.code, cli::kData);
  EXPECT_NE(o.err.find('2'), std::string::npos);
}

TEST_F(Cli, ResourceErrors) {
  EXPECT_EQ(run({"exact", random_.string(), "--delta", "0.3", "--pair-budget", "3"}).code,
            cli::kResource);
  const auto wide = dir_.file("wide.dat");
  testing::write_text(wide, "1 2 3 4 5 6 7\n");
  EXPECT_EQ(run({"iomine", wide.string(), "--delta", "0.5", "--memory-budget", "3",
                 "--page-size", "1", "--scratch-dir", dir_.path().string()})
                .code,
            cli::kResource);
}

TEST_F(Cli, EmptyDatasetIsUsageError) {
  const auto empty = dir_.file("empty.dat");
  testing::write_text(empty, "\n\n");
  EXPECT_EQ(run({"stats", empty.string()}).code, cli::kUsage);
}

TEST_F(Cli, ErrorsTable) {
  const auto o = run({"errors", "--format", "csv"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  EXPECT_NE(o.out.find("3,0.1991"), std::string::npos);
  EXPECT_NE(o.out.find("30,0.001947"), std::string::npos);
}

TEST_F(Cli, StatsJson) {
  const auto o = run({"stats", small_.string(), "--format", "json"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_EQ(j.at("distinct_items"), 3);
  EXPECT_EQ(j.at("item_occurrences"), 6);
}

TEST_F(Cli, MineIsReproducible) {
  const auto a = dir_.file("a.json");
  const auto b = dir_.file("b.json");
  for (const auto& path : {a, b}) {
    ASSERT_EQ(run({"mine", random_.string(), "--delta", "0.3", "--seed", "17", "--format", "json",
                   "-o", path.string()})
                  .code,
              cli::kOk);
  }
  EXPECT_EQ(slurp(a), slurp(b));
  const auto report = json::parse(slurp(a)).get<report::MiningReport>();
  EXPECT_EQ(report.run.seed, 17u);
  EXPECT_FALSE(report.pairs.empty());
  const auto threaded = run({"mine", random_.string(), "--delta", "0.3", "--seed", "17",
                             "--format", "json", "--threads", "3"});
  EXPECT_EQ(threaded.out, slurp(a));
}

TEST_F(Cli, MineMatchesLibrary) {
  const auto o = run({"mine", random_.string(), "--delta", "0.4", "--measure", "jaccard",
                      "--mu", "20", "--seed", "3", "--format", "json"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  SamplingConfig config;
  config.measure = MeasureSpec(MeasureKind::jaccard);
  config.delta = 0.4;
  config.mu = 20;
  config.seed = 3;
  const auto want = run_bisam(read_transactions(random_), config);
  EXPECT_EQ(json::parse(o.out).get<report::MiningReport>().pairs, want.report);
}

TEST_F(Cli, SparseIdsAreKept) {
  const auto sparse = dir_.file("sparse.dat");
  testing::write_text(sparse, "1000000 7\n1000000 7\n7 42\n");
  const auto o = run({"exact", sparse.string(), "--delta", "0.5", "--format", "json"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  const auto pairs = json::parse(o.out).at("pairs");
  ASSERT_EQ(pairs.size(), 2u);
  std::set<ItemId> ids;
  for (const auto& p : pairs) {
    const auto pair = p.at("pair").get<PairKey>();
    ids.insert(pair.first);
    ids.insert(pair.second);
  }
  EXPECT_EQ(ids, (std::set<ItemId>{7, 42, 1000000}));
}

TEST_F(Cli, CompareSmallDatabase) {
  const auto o = run({"compare", small_.string(), "--delta", "0.5", "--mode", "expectation",
                      "--format", "json"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  const auto r = json::parse(o.out).get<report::CompareReport>();
  EXPECT_EQ(r.cost.exact_time, 9u);
  EXPECT_EQ(r.cost.exact_space, 5u);
  EXPECT_EQ(r.cost.mode, CostMode::expectation);
  EXPECT_EQ(r.lsh_comparisons, 3u);
}

TEST_F(Cli, CompareDegradesOverBudget) {
  const auto o = run({"compare", random_.string(), "--delta", "0.3", "--pair-budget", "3",
                      "--format", "json"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  const auto r = json::parse(o.out).get<report::CompareReport>();
  EXPECT_FALSE(r.cost.exact_time.has_value());
  EXPECT_EQ(r.cost.mode, CostMode::observed);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(Cli, GenThenStats) {
  const auto path = dir_.file("gen.dat");
  ASSERT_EQ(run({"gen", "--independent", "--n", "30", "--m", "500", "--p-range", "0.1,0.3",
                 "--seed", "5", "-o", path.string()})
                .code,
            cli::kOk);
  const auto db = read_transactions(path);
  EXPECT_EQ(db.size(), 500u);
  const auto o = run({"stats", path.string(), "--format", "json"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_EQ(j.at("transactions"), 500);
  EXPECT_EQ(j.at("item_occurrences").get<Count>(), db.item_occurrences());
  EXPECT_LE(j.at("distinct_items").get<Count>(), 30u);
  const double avg = j.at("avg_transaction_size").get<double>();
  EXPECT_GT(avg, 30 * 0.1 - 1.0);
  EXPECT_LT(avg, 30 * 0.3 + 1.0);
  const auto again = run({"gen", "--independent", "--n", "30", "--m", "500", "--p-range",
                          "0.1,0.3", "--seed", "5"});
  EXPECT_EQ(again.out, slurp(path));
}

TEST_F(Cli, AdaptiveTopK) {
  const auto o = run({"adaptive", random_.string(), "--top-k", "25", "--format", "json"});
  ASSERT_EQ(o.code, cli::kOk) << o.err;
  const auto j = json::parse(o.out);
  EXPECT_FALSE(j.dump().empty());
  const auto csv = run({"adaptive", random_.string(), "--top-k", "25", "--format", "csv"});
  ASSERT_EQ(csv.code, cli::kOk);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 26);
}

TEST_F(Cli, IOMineMatchesMine) {
  const auto mine = run({"mine", random_.string(), "--delta", "0.3", "--seed", "9", "--format",
                         "json"});
  const auto report_file = dir_.file("pairs.bin");
  const auto io = run({"iomine", random_.string(), "--delta", "0.3", "--seed", "9",
                       "--memory-budget", "64", "--page-size", "8", "--scratch-dir",
                       dir_.path().string(), "--report-file", report_file.string(), "--format",
                       "json"});
  ASSERT_EQ(io.code, cli::kOk) << io.err;
  const auto want = json::parse(mine.out).at("pairs");
  EXPECT_EQ(json::parse(io.out).at("pairs"), want);
  EXPECT_EQ(json(read_pair_report(report_file)), want);
}

}  // namespace
}  // namespace bisam
