#pragma once

// Data-parallel kernels. Each kernel has a serial reference implementation
// and an OpenMP implementation; both produce identical results for every
// thread count, which the tests check and the benchmarks compare.

#include <vector>

#include "bisam/dataset.hpp"
#include "bisam/exact.hpp"
#include "bisam/sampler.hpp"

namespace bisam::kernels {

/// Support-ordered copy of a database.
struct SortedTransactions {
  std::vector<std::size_t> offsets;
  std::vector<ItemId> items;
  std::vector<Count> supports;
};

namespace serial {

[[nodiscard]] std::vector<Count> count_supports(const TransactionDatabase& db);
[[nodiscard]] SortedTransactions sort_transactions(const TransactionDatabase& db,
                                                   const SupportIndex& supports);
[[nodiscard]] SampleMultiset sample_pairs(const PreparedDatabase& db, const SamplingConfig& config);
[[nodiscard]] PairCountTable count_pairs(const PreparedDatabase& db, Count pair_budget);
[[nodiscard]] TransactionDatabase generate_independent(const IndependentModel& model);

}  // namespace serial

namespace omp {

/// `threads` <= 0 uses the OpenMP default team size.
[[nodiscard]] std::vector<Count> count_supports(const TransactionDatabase& db, int threads);
[[nodiscard]] SortedTransactions sort_transactions(const TransactionDatabase& db,
                                                   const SupportIndex& supports, int threads);
[[nodiscard]] SampleMultiset sample_pairs(const PreparedDatabase& db, const SamplingConfig& config,
                                          int threads);
[[nodiscard]] PairCountTable count_pairs(const PreparedDatabase& db, Count pair_budget,
                                         int threads);
[[nodiscard]] TransactionDatabase generate_independent(const IndependentModel& model, int threads);

}  // namespace omp

}  // namespace bisam::kernels
