#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "bisam/cost.hpp"
#include "bisam/sampler.hpp"

namespace bisam {

inline constexpr Count kDefaultPairBudget = 100'000'000;

/// c_ij = |S_i ∩ S_j| for every co-occurring pair, keyed canonically.
struct PairCountTable {
  std::unordered_map<std::uint64_t, Count> counts;
  /// sum over transactions of C(b_t, 2).
  Count total_pair_occurrences = 0;

  [[nodiscard]] Count count(PairKey pair) const noexcept {
    const auto it = counts.find(pair.packed());
    return it == counts.end() ? 0 : it->second;
  }
  [[nodiscard]] std::size_t distinct() const noexcept { return counts.size(); }
  /// Sorted by (first, second).
  [[nodiscard]] std::vector<std::pair<PairKey, Count>> entries() const;

  friend bool operator==(const PairCountTable&, const PairCountTable&) = default;
};

struct ExactResult {
  SupportIndex supports;
  PairCountTable table;
  Count item_occurrences = 0;
  Count distinct_items = 0;
  /// N + sum_t C(b_t, 2)
  Count exact_time = 0;
  /// n + distinct co-occurring pairs
  Count exact_space = 0;
};

/// Counts every pair of every transaction. Throws ResourceError when the
/// table would exceed `pair_budget` entries.
[[nodiscard]] ExactResult count_all_pairs(const TransactionDatabase& db,
                                          Count pair_budget = kDefaultPairBudget,
                                          int threads = 0);
[[nodiscard]] ExactResult count_all_pairs(const PreparedDatabase& db,
                                          Count pair_budget = kDefaultPairBudget,
                                          int threads = 0);

struct SimilarPair {
  PairKey pair;
  Count cooccurrences = 0;
  double similarity = 0.0;

  friend bool operator==(const SimilarPair&, const SimilarPair&) = default;
};

/// Every pair with s(i, j) >= delta, sorted by (first, second).
[[nodiscard]] std::vector<SimilarPair> similar_pairs(const ExactResult& exact,
                                                     const MeasureSpec& measure, double delta);
[[nodiscard]] std::vector<SimilarPair> exact_similar_pairs(const TransactionDatabase& db,
                                                           const MeasureSpec& measure,
                                                           double delta,
                                                           Count pair_budget = kDefaultPairBudget,
                                                           int threads = 0);

struct ExpectedCost {
  /// E[N'] = sum c_ij * min(1, f * mu)
  double expected_samples = 0.0;
  /// sum 1 - (1 - min(1, f * mu))^c_ij
  double expected_distinct_pairs = 0.0;
  /// Expected number of reported pairs under the report filter.
  double expected_output = 0.0;
};

[[nodiscard]] ExpectedCost expected_bisam_cost(const ExactResult& exact,
                                               const SamplingConfig& config);
[[nodiscard]] ExpectedCost expected_bisam_cost(const TransactionDatabase& db,
                                               const SamplingConfig& config,
                                               Count pair_budget = kDefaultPairBudget,
                                               int threads = 0);

/// Expectation-mode cost report built from the exact pair table.
[[nodiscard]] CostReport expected_cost_report(const ExactResult& exact,
                                              const SamplingConfig& config);

}  // namespace bisam
