#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bisam/errors.hpp"
#include "bisam/measures.hpp"
#include "support.hpp"

namespace bisam {
namespace {

using testing::base_kinds;
using testing::oracle_f;
using testing::oracle_similarity;

const MeasureSpec kCosine{MeasureKind::cosine};

TEST(Similarity, CosineHandValue) {
  EXPECT_NEAR(similarity_from_counts(kCosine, 3, 5, 3, 100), 3.0 / std::sqrt(15.0), 1e-15);
  EXPECT_NEAR(similarity_from_counts(kCosine, 3, 5, 3, 100), 0.7746, 5e-5);
}

TEST(Similarity, JaccardOfIdenticalSets) {
  for (Count k : {1, 7, 1000}) {
    EXPECT_DOUBLE_EQ(similarity_from_counts(MeasureSpec(MeasureKind::jaccard), k, k, k, 5000), 1.0);
  }
}

TEST(Similarity, EmptyIntersectionIsZero) {
  EXPECT_EQ(similarity_from_counts(MeasureSpec(MeasureKind::all_confidence), 10, 20, 0, 50), 0.0);
}

TEST(Similarity, LiftCarriesTransactionCount) {
  EXPECT_DOUBLE_EQ(similarity_from_counts(MeasureSpec(MeasureKind::lift), 10, 20, 5, 400),
                   5.0 * 400.0 / 200.0);
}

TEST(Similarity, DiceHasNoFactorTwo) {
  EXPECT_DOUBLE_EQ(similarity_from_counts(MeasureSpec(MeasureKind::dice), 4, 6, 4, 10), 0.4);
}

TEST(Similarity, RejectsInvalidCounts) {
  EXPECT_THROW((void)similarity_from_counts(kCosine, 0, 5, 0, 10), DomainError);
  EXPECT_THROW((void)similarity_from_counts(kCosine, 5, 0, 0, 10), DomainError);
  EXPECT_THROW((void)similarity_from_counts(kCosine, 3, 5, 4, 10), DomainError);
}

TEST(Similarity, RangeOverRandomCounts) {
  std::mt19937_64 gen(11);
  for (int k = 0; k < 2000; ++k) {
    const Count m = std::uniform_int_distribution<Count>(1, 10000)(gen);
    const Count ci = std::uniform_int_distribution<Count>(1, m)(gen);
    const Count cj = std::uniform_int_distribution<Count>(1, m)(gen);
    const Count cij = std::uniform_int_distribution<Count>(0, std::min(ci, cj))(gen);
    for (const auto kind : base_kinds()) {
      const double s = similarity_from_counts(MeasureSpec(kind), ci, cj, cij, m);
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, kind == MeasureKind::lift ? static_cast<double>(m) : 1.0);
      EXPECT_NEAR(s, oracle_similarity(kind, ci, cj, cij, m), 1e-12 * std::max(1.0, s));
    }
  }
}

TEST(Weight, WorkedExampleValues) {
  EXPECT_NEAR(sampling_weight(kCosine, 3, 5, 0.7, 1), 0.369, 5e-4);
  EXPECT_NEAR(sampling_weight(kCosine, 3, 50, 0.7, 1), 0.117, 5e-4);
  EXPECT_NEAR(sampling_weight(kCosine, 5, 5, 0.7, 1), 0.2857, 5e-5);
}

TEST(Weight, RejectsNonPositiveThreshold) {
  for (const auto kind : base_kinds()) {
    EXPECT_THROW((void)sampling_weight(MeasureSpec(kind), 3, 5, 0.0, 10), DomainError);
    EXPECT_THROW((void)sampling_weight(MeasureSpec(kind), 3, 5, -1.0, 10), DomainError);
  }
}

TEST(Weight, MatchesTableFormulas) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> s(0.01, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const Count ci = std::uniform_int_distribution<Count>(1, 500)(gen);
    const Count cj = std::uniform_int_distribution<Count>(1, 500)(gen);
    const double t = s(gen);
    for (const auto kind : base_kinds()) {
      const double got = sampling_weight(MeasureSpec(kind), ci, cj, t, 600);
      EXPECT_LE(testing::relative_error(got, oracle_f(kind, ci, cj, t, 600)), 1e-14);
    }
  }
}

// c_ij * f(c_i, c_j, s(c_i, c_j, c_ij, m)) = 1.
TEST(Weight, DefiningEquationHolds) {
  std::mt19937_64 gen(42);
  for (const auto kind : base_kinds()) {
    const MeasureSpec measure(kind);
    for (int k = 0; k < 1000; ++k) {
      const Count m = std::uniform_int_distribution<Count>(1, 1'000'000)(gen);
      const Count ci = std::uniform_int_distribution<Count>(1, m)(gen);
      const Count cj = std::uniform_int_distribution<Count>(1, m)(gen);
      const Count cij = std::uniform_int_distribution<Count>(1, std::min(ci, cj))(gen);
      const double s = similarity_from_counts(measure, ci, cj, cij, m);
      const double product = static_cast<double>(cij) * sampling_weight(measure, ci, cj, s, m);
      EXPECT_NEAR(product, 1.0, 1e-12) << measure.name() << " " << ci << " " << cj << " " << cij;
    }
  }
}

TEST(Weight, NonIncreasingInEveryArgument) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<Count> count(1, 10'000);
  std::uniform_real_distribution<double> level(1e-3, 1.0);
  for (const auto kind : base_kinds()) {
    const MeasureSpec measure(kind);
    for (int k = 0; k < 10'000; ++k) {
      const Count ci = count(gen);
      const Count cj = count(gen);
      const double s = level(gen);
      const double f = sampling_weight(measure, ci, cj, s, 20'000);
      EXPECT_LE(sampling_weight(measure, ci + 1 + k % 7, cj, s, 20'000), f);
      EXPECT_LE(sampling_weight(measure, ci, cj + 1 + k % 5, s, 20'000), f);
      EXPECT_LE(sampling_weight(measure, ci, cj, s * 1.01 + 1e-9, 20'000), f);
    }
  }
}

TEST(Weight, JaccardMeanBound) {
  for (int a = 1; a <= 100; ++a) {
    for (int b = 1; b <= 100; ++b) {
      const double s = a / 100.0;
      const double delta = b / 100.0;
      EXPECT_LE((1.0 + delta) / delta * (s / (1.0 + s)), 2.0 * s / delta + 1e-15);
    }
  }
}

TEST(Solve, CosineClosedForm) {
  const auto s = solve_threshold_for_weight(kCosine, 25, 25, 0.5, 10, 1);
  ASSERT_TRUE(s.has_value());
  EXPECT_NEAR(*s, 0.8, 1e-15);
}

TEST(Solve, JaccardWithoutSolution) {
  EXPECT_FALSE(solve_threshold_for_weight(MeasureSpec(MeasureKind::jaccard), 10, 10, 0.5, 10, 1));
}

TEST(Solve, RejectsZeroDraw) {
  for (const auto kind : base_kinds()) {
    EXPECT_THROW((void)solve_threshold_for_weight(MeasureSpec(kind), 3, 4, 0.0, 10, 50),
                 DomainError);
  }
}

TEST(Solve, RoundTripsThroughWeight) {
  std::mt19937_64 gen(77);
  for (const auto kind : base_kinds()) {
    const MeasureSpec measure(kind);
    for (int k = 0; k < 2000; ++k) {
      const Count m = 5000;
      const Count ci = std::uniform_int_distribution<Count>(1, m)(gen);
      const Count cj = std::uniform_int_distribution<Count>(1, m)(gen);
      const double delta = std::uniform_real_distribution<double>(1e-3, 1.0)(gen);
      const Count mu = std::uniform_int_distribution<Count>(1, 40)(gen);
      const double r = sampling_weight(measure, ci, cj, delta, m) * static_cast<double>(mu);
      const auto s = solve_threshold_for_weight(measure, ci, cj, r, mu, m);
      ASSERT_TRUE(s.has_value()) << measure.name();
      EXPECT_LE(testing::relative_error(*s, delta), 1e-10) << measure.name();
      EXPECT_LE(testing::relative_error(sampling_weight(measure, ci, cj, *s, m) *
                                            static_cast<double>(mu),
                                        r),
                1e-10);
    }
  }
}

TEST(Compose, MinEvaluatesEachComponentAtItsThreshold) {
  const MeasureSpec lift(MeasureKind::lift);
  const auto both = compose_measures(Combinator::min, 1.0, kCosine, 1.0, lift, 0.7, 2.0);
  for (Count ci : {3, 40, 900}) {
    for (Count cj : {5, 60, 1000}) {
      const double want = std::min(oracle_f(MeasureKind::cosine, ci, cj, 0.7, 1000),
                                   oracle_f(MeasureKind::lift, ci, cj, 2.0, 1000));
      EXPECT_LE(testing::relative_error(sampling_weight(both, ci, cj, 1.0, 1000), want), 1e-14);
    }
  }
  EXPECT_EQ(parse_measure("min(cosine@0.7,lift@2)"), both);
}

TEST(Compose, RejectsNonPositiveCoefficients) {
  EXPECT_THROW((void)compose_measures(Combinator::linear, 1.0, kCosine, 0.0, kCosine),
               DomainError);
  EXPECT_THROW((void)compose_measures(Combinator::linear, -1.0, kCosine, 1.0, kCosine),
               DomainError);
  EXPECT_THROW((void)compose_measures(Combinator::min, 1.0, kCosine, 1.0, kCosine, 0.0, 1.0),
               DomainError);
}

TEST(Compose, LinearIsLinear) {
  const auto sum = compose_measures(Combinator::linear, 2.0, kCosine, 3.0, kCosine);
  for (double s : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(sampling_weight(sum, 7, 11, s, 100), 5.0 * sampling_weight(kCosine, 7, 11, s, 100),
                1e-15);
  }
}

TEST(Compose, SolveRoundTrips) {
  const auto min_measure = parse_measure("min(cosine@0.7,lift@2)");
  const auto linear_measure = parse_measure("linear(2*cosine,jaccard@0.5)");
  std::mt19937_64 gen(9);
  for (const auto* measure : {&min_measure, &linear_measure}) {
    for (int k = 0; k < 500; ++k) {
      const Count ci = std::uniform_int_distribution<Count>(1, 1000)(gen);
      const Count cj = std::uniform_int_distribution<Count>(1, 1000)(gen);
      const double level = std::uniform_real_distribution<double>(0.05, 1.5)(gen);
      const double r = sampling_weight(*measure, ci, cj, level, 1000) * 10.0;
      const auto s = solve_threshold_for_weight(*measure, ci, cj, r, 10, 1000);
      ASSERT_TRUE(s.has_value());
      EXPECT_LE(testing::relative_error(sampling_weight(*measure, ci, cj, *s, 1000) * 10.0, r),
                1e-10)
          << measure->name();
    }
  }
}

TEST(Parse, NamesRoundTrip) {
  for (const auto kind : base_kinds()) {
    EXPECT_EQ(parse_measure(measure_name(kind)).kind(), kind);
  }
  const auto composite = parse_measure("min(2*cosine@0.7,linear(lift@2,0.5*dice))");
  EXPECT_EQ(parse_measure(composite.name()), composite);
}

TEST(Parse, RejectsGarbage) {
  for (const char* text : {"", "cos", "min(cosine)", "min(cosine,lift", "0*cosine", "linear(,)"}) {
    EXPECT_THROW((void)parse_measure(text), DomainError) << text;
  }
}

TEST(Bounds, UpperBounds) {
  EXPECT_EQ(similarity_upper_bound(MeasureSpec(MeasureKind::lift), 77), 77.0);
  EXPECT_EQ(similarity_upper_bound(kCosine, 77), 1.0);
  EXPECT_TRUE(kCosine.bounded_by_one());
  EXPECT_FALSE(MeasureSpec(MeasureKind::lift).bounded_by_one());
}

}  // namespace
}  // namespace bisam
