#include "bisam/exact.hpp"

#include <algorithm>
#include <cmath>

#include "bisam/errors.hpp"
#include "bisam/kernels.hpp"
#include "bisam/stats.hpp"

namespace bisam {

std::vector<std::pair<PairKey, Count>> PairCountTable::entries() const {
  std::vector<std::pair<PairKey, Count>> out;
  out.reserve(counts.size());
  for (const auto& [key, c] : counts) {
    out.emplace_back(PairKey::unpack(key), c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExactResult count_all_pairs(const TransactionDatabase& db, Count pair_budget, int threads) {
  return count_all_pairs(PreparedDatabase(db, threads), pair_budget, threads);
}

ExactResult count_all_pairs(const PreparedDatabase& db, Count pair_budget, int threads) {
  ExactResult result;
  result.supports = db.supports();
  result.table = threads == 1 ? kernels::serial::count_pairs(db, pair_budget)
                              : kernels::omp::count_pairs(db, pair_budget, threads);

  // Each c_ij is an entry of A * A^T, so the entries sum to the number of
  // pair occurrences.
  Count sum = 0;
  for (const auto& [key, c] : result.table.counts) {
    sum += c;
  }
  if (sum != result.table.total_pair_occurrences) {
    throw Error("pair table does not account for every pair occurrence");
  }

  result.item_occurrences = db.item_occurrences();
  result.distinct_items = db.distinct_items();
  result.exact_time = result.item_occurrences + result.table.total_pair_occurrences;
  result.exact_space = result.distinct_items + result.table.distinct();
  return result;
}

std::vector<SimilarPair> similar_pairs(const ExactResult& exact, const MeasureSpec& measure,
                                       double delta) {
  if (!(delta > 0.0)) {
    throw DomainError("threshold must be positive");
  }
  std::vector<SimilarPair> out;
  const Count m = exact.supports.transactions;
  for (const auto& [key, cij] : exact.table.counts) {
    const PairKey pair = PairKey::unpack(key);
    const double s =
        similarity_from_counts(measure, exact.supports(pair.first), exact.supports(pair.second),
                               cij, m);
    if (s >= delta) {
      out.push_back({pair, cij, s});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SimilarPair& a, const SimilarPair& b) { return a.pair < b.pair; });
  return out;
}

std::vector<SimilarPair> exact_similar_pairs(const TransactionDatabase& db,
                                             const MeasureSpec& measure, double delta,
                                             Count pair_budget, int threads) {
  if (!(delta > 0.0)) {
    throw DomainError("threshold must be positive");
  }
  return similar_pairs(count_all_pairs(db, pair_budget, threads), measure, delta);
}

namespace {

// Smallest k with k * f >= 1, evaluated exactly as the report filter does.
Count smallest_certifying_count(double f, Count limit) {
  if (!(f > 0.0)) {
    return limit + 1;
  }
  const double guess = std::ceil(1.0 / f);
  if (guess > static_cast<double>(limit) + 1.0) {
    return limit + 1;
  }
  auto k = static_cast<Count>(guess);
  while (k > 0 && static_cast<double>(k - 1) * f >= 1.0) --k;
  while (static_cast<double>(k) * f < 1.0) ++k;
  return k;
}

}  // namespace

ExpectedCost expected_bisam_cost(const ExactResult& exact, const SamplingConfig& config) {
  config.validate();
  const ScaledWeight weight(config.measure, config.delta, config.mu,
                            exact.supports.transactions);
  const double threshold = config.effective_report_threshold();
  const Count rejected = rejected_cutoff(threshold);

  ExpectedCost out;
  for (const auto& [key, cij] : exact.table.counts) {
    const PairKey pair = PairKey::unpack(key);
    const Count ci = exact.supports(pair.first);
    const Count cj = exact.supports(pair.second);
    const double f = weight.weight(ci, cj);
    const double w = std::min(1.0, f * static_cast<double>(config.mu));
    const auto trials = static_cast<double>(cij);
    out.expected_samples += trials * w;
    out.expected_distinct_pairs += w >= 1.0 ? 1.0 : -std::expm1(trials * std::log1p(-w));

    // Reported iff M >= min(floor(threshold) + 1, ceil(1 / f)).
    const Count first_reported = std::min(rejected + 1, smallest_certifying_count(f, cij));
    if (first_reported > cij) {
      continue;
    }
    out.expected_output += w >= 1.0 ? 1.0 : binomial_sf(first_reported - 1, cij, w);
  }
  return out;
}

ExpectedCost expected_bisam_cost(const TransactionDatabase& db, const SamplingConfig& config,
                                 Count pair_budget, int threads) {
  return expected_bisam_cost(count_all_pairs(db, pair_budget, threads), config);
}

CostReport expected_cost_report(const ExactResult& exact, const SamplingConfig& config) {
  const ExpectedCost e = expected_bisam_cost(exact, config);
  CostReport cost;
  cost.mode = CostMode::expectation;
  cost.item_occurrences = exact.item_occurrences;
  cost.distinct_items = exact.distinct_items;
  cost.samples = e.expected_samples;
  cost.distinct_pairs = e.expected_distinct_pairs;
  cost.bisam_time = static_cast<double>(exact.item_occurrences) + e.expected_samples;
  cost.bisam_space = static_cast<double>(exact.distinct_items) + e.expected_distinct_pairs;
  cost.exact_time = exact.exact_time;
  cost.exact_space = exact.exact_space;
  cost.output_count = e.expected_output;
  return cost;
}

}  // namespace bisam
