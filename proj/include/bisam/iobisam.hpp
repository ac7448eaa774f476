#pragma once

// External-memory BiSam. The pipeline works on binary record files and
// keeps at most M records in memory:
//
//   stage 0  FIMI text            -> <item, tid>                 (2 fields)
//   stage 1  sort by (item, tid)
//   stage 2  scan: <item, support> side file, then merge-join
//            back onto the item-sorted stream -> <tid, support, item>
//   stage 3  sort by (tid, support, item)
//   stage 4  per transaction, sample pairs -> <first, second, c_first, c_second>
//   stage 5  sort by pair, aggregate M(i, j), filter
//
// The report file holds one record per reported pair:
// <first, second, samples, exact, bits of estimated_similarity> (5 fields).

#include <filesystem>
#include <optional>
#include <vector>

#include "bisam/extsort.hpp"
#include "bisam/sampler.hpp"

namespace bisam {

struct IOConfig {
  Count memory_budget = 1u << 20;  // M, in records
  Count page_size = 1024;          // B, in records
  /// Parent of the per-run scratch directory; the system temp directory
  /// when empty.
  std::filesystem::path scratch_dir;
  SamplingConfig sampling;

  /// Throws ConfigError on an invalid budget or sampling config.
  void validate() const;
  [[nodiscard]] extmem::SortBudget budget() const noexcept {
    return {memory_budget, page_size};
  }
};

struct IOCostReport {
  Count pages_read = 0;
  Count pages_written = 0;
  Count item_records = 0;   // N
  Count sampled_pairs = 0;  // N'
  Count transactions = 0;   // m
  Count distinct_items = 0;
  Count reported_pairs = 0;
  extmem::SortReport item_sort;
  extmem::SortReport transaction_sort;
  extmem::SortReport pair_sort;

  [[nodiscard]] Count total_pages() const noexcept { return pages_read + pages_written; }
};

/// Constant c in the page-transfer bound below, checked against measured
/// runs over a range of budgets.
inline constexpr double kIOBoundConstant = 24.0;

/// c * max(1, ceil((N + N') / B)) * (1 + log_k max(1, ceil((N + N') / M)))
/// with k = floor(M / B) - 1.
[[nodiscard]] double io_bound(Count item_records, Count sampled_pairs,
                              const extmem::SortBudget& budget);

struct IOBiSamResult {
  std::vector<ReportedPair> report;
  IOCostReport cost;
};

/// Runs the pipeline on a FIMI file. Transaction ids and r_t match
/// run_bisam on read_transactions(input), so the reports are identical.
/// Throws ResourceError when one transaction has more than M items.
[[nodiscard]] IOBiSamResult run_io_bisam(
    const std::filesystem::path& input, const IOConfig& config,
    const std::optional<std::filesystem::path>& report_path = std::nullopt);

[[nodiscard]] std::vector<ReportedPair> read_pair_report(const std::filesystem::path& path);

}  // namespace bisam
