#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bisam/errors.hpp"
#include "bisam/exact.hpp"
#include "support.hpp"

namespace bisam {
namespace {

using testing::db_from_text;
using testing::unordered;

TEST(CountAllPairs, SingleTransaction) {
  const auto exact = count_all_pairs(db_from_text("1 2 3\n"));
  EXPECT_EQ(exact.table.distinct(), 3u);
  for (const auto& [pair, c] : exact.table.entries()) EXPECT_EQ(c, 1u);
  EXPECT_EQ(exact.table.total_pair_occurrences, 3u);
}

// N = 6 item occurrences and 3 pair occurrences.
TEST(CountAllPairs, HandCountAndCost) {
  const auto exact = count_all_pairs(db_from_text("1 2\n1 2\n1 3\n"));
  EXPECT_EQ(exact.table.count(exact.supports.canonical(1, 2)), 2u);
  EXPECT_EQ(exact.table.count(exact.supports.canonical(1, 3)), 1u);
  EXPECT_EQ(exact.table.count(exact.supports.canonical(2, 3)), 0u);
  EXPECT_EQ(exact.exact_time, 6u + 3u);
  EXPECT_EQ(exact.exact_space, 3u + 2u);
}

TEST(CountAllPairs, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto db = testing::random_db(seed, 400, 60, 14);
    for (int threads : {1, 0, 3}) {
      const auto exact = count_all_pairs(db, kDefaultPairBudget, threads);
      std::map<testing::Unordered, Count> got;
      for (const auto& [pair, c] : exact.table.entries()) {
        got[unordered(pair)] = c;
        EXPECT_LE(c, std::min(exact.supports(pair.first), exact.supports(pair.second)));
        EXPECT_TRUE(exact.supports.precedes(pair.first, pair.second));
      }
      EXPECT_EQ(got, testing::brute_pair_counts(db));
      Count pair_occurrences = 0;
      for (std::size_t t = 0; t < db.size(); ++t) {
        const Count b = db[t].size();
        pair_occurrences += b * (b - (b > 0 ? 1 : 0)) / 2;
      }
      EXPECT_EQ(exact.table.total_pair_occurrences, pair_occurrences);
      EXPECT_EQ(exact.exact_time, db.item_occurrences() + pair_occurrences);
    }
  }
}

TEST(CountAllPairs, BudgetExceeded) {
  const auto db = testing::random_db(1, 500, 100, 20);
  for (int threads : {1, 0, 2}) {
    EXPECT_THROW((void)count_all_pairs(db, 10, threads), ResourceError) << threads;
  }
}

TEST(SimilarPairs, HandValue) {
  const auto pairs =
      exact_similar_pairs(db_from_text("1 2\n1 2\n1 3\n"), MeasureSpec(MeasureKind::cosine), 0.8);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(unordered(pairs[0].pair), unordered(1, 2));
  EXPECT_NEAR(pairs[0].similarity, 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_EQ(pairs[0].cooccurrences, 2u);
}

TEST(SimilarPairs, ThresholdExtremes) {
  const auto db = testing::random_db(8, 300, 40, 10);
  const MeasureSpec cosine(MeasureKind::cosine);
  EXPECT_TRUE(exact_similar_pairs(db, cosine, 1.0 + 1e-9).empty());
  EXPECT_EQ(exact_similar_pairs(db, cosine, 1e-12).size(), testing::brute_pair_counts(db).size());
  EXPECT_THROW((void)exact_similar_pairs(db, cosine, 0.0), DomainError);
}

TEST(SimilarPairs, MatchOracle) {
  const auto db = testing::random_db(12, 500, 50, 12);
  const auto supports = testing::brute_supports(db);
  for (const auto kind : testing::base_kinds()) {
    const double delta = kind == MeasureKind::lift ? 2.0 : 0.3;
    std::set<testing::Unordered> want;
    for (const auto& [p, c] : testing::brute_pair_counts(db)) {
      if (testing::oracle_similarity(kind, supports.at(p.first), supports.at(p.second), c,
                                     db.size()) >= delta) {
        want.insert(p);
      }
    }
    std::set<testing::Unordered> got;
    for (const auto& s : exact_similar_pairs(db, MeasureSpec(kind), delta)) {
      got.insert(unordered(s.pair));
    }
    EXPECT_EQ(got, want) << measure_name(kind);
  }
}

TEST(ExpectedCost, ExactRegime) {
  const auto db = testing::random_db(4, 100, 30, 8);
  SamplingConfig config;
  config.delta = 0.01;
  config.mu = 1'000'000;
  const auto exact = count_all_pairs(db);
  const auto e = expected_bisam_cost(exact, config);
  EXPECT_DOUBLE_EQ(e.expected_samples, static_cast<double>(exact.table.total_pair_occurrences));
  EXPECT_DOUBLE_EQ(e.expected_distinct_pairs, static_cast<double>(exact.table.distinct()));
}

// Two transactions {1, 2}: lift f = m / (Δ c_i c_j) = 2 / (2 * 4) = 0.25.
TEST(ExpectedCost, SinglePairBinomial) {
  SamplingConfig config;
  config.measure = MeasureSpec(MeasureKind::lift);
  config.delta = 2.0;
  config.mu = 1;
  const auto e = expected_bisam_cost(db_from_text("1 2\n1 2\n"), config);
  EXPECT_DOUBLE_EQ(e.expected_samples, 0.5);
  EXPECT_DOUBLE_EQ(e.expected_distinct_pairs, 1.0 - 0.75 * 0.75);
  // Reported iff M > 1/2, i.e. at least one sample.
  EXPECT_DOUBLE_EQ(e.expected_output, 1.0 - 0.75 * 0.75);
}

TEST(ExpectedCost, OutputMatchesMonteCarlo) {
  const auto db = testing::random_db(77, 600, 40, 10);
  SamplingConfig config;
  config.delta = 0.3;
  config.mu = 8;
  const auto exact = count_all_pairs(db);
  const auto e = expected_bisam_cost(exact, config);
  const PreparedDatabase prepared(db);
  double outputs = 0.0;
  const int runs = 400;
  for (int k = 0; k < runs; ++k) {
    config.seed = 1000 + k;
    outputs += static_cast<double>(run_bisam(prepared, config).report.size());
  }
  EXPECT_LE(testing::relative_error(outputs / runs, e.expected_output), 0.03);
}

TEST(ExpectedCost, ReportFields) {
  const auto db = testing::random_db(6, 300, 40, 10);
  SamplingConfig config;
  config.delta = 0.4;
  const auto exact = count_all_pairs(db);
  const auto cost = expected_cost_report(exact, config);
  const auto e = expected_bisam_cost(exact, config);
  EXPECT_EQ(cost.mode, CostMode::expectation);
  EXPECT_EQ(cost.bisam_time, static_cast<double>(db.item_occurrences()) + e.expected_samples);
  EXPECT_EQ(cost.bisam_space,
            static_cast<double>(db.distinct_items()) + e.expected_distinct_pairs);
  EXPECT_EQ(cost.exact_time, exact.exact_time);
  EXPECT_EQ(cost.exact_space, exact.exact_space);
  ASSERT_TRUE(cost.time_ratio().has_value());
  EXPECT_DOUBLE_EQ(*cost.time_ratio(), static_cast<double>(exact.exact_time) / cost.bisam_time);
}

}  // namespace
}  // namespace bisam
