#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bisam/cost.hpp"
#include "bisam/dataset.hpp"
#include "bisam/measures.hpp"
#include "bisam/types.hpp"

namespace bisam {

/// Default seed for every randomized operation, so that runs are
/// reproducible unless a seed is supplied.
inline constexpr std::uint64_t kDefaultSeed = 0x5EEDB15Aull;
inline constexpr Count kDefaultMu = 15;

/// Item supports c(i) = |S_i|, indexed by id, and the transaction count m.
struct SupportIndex {
  std::vector<Count> counts;
  Count transactions = 0;

  [[nodiscard]] Count operator()(ItemId item) const noexcept {
    return item < counts.size() ? counts[item] : 0;
  }
  [[nodiscard]] Count total() const noexcept;
  [[nodiscard]] Count distinct() const noexcept;

  /// Support order: smaller support first, ties by smaller id.
  [[nodiscard]] bool precedes(ItemId a, ItemId b) const noexcept {
    const Count ca = (*this)(a);
    const Count cb = (*this)(b);
    return ca < cb || (ca == cb && a < b);
  }
  [[nodiscard]] PairKey canonical(ItemId a, ItemId b) const noexcept {
    return precedes(a, b) ? PairKey{a, b} : PairKey{b, a};
  }

  friend bool operator==(const SupportIndex&, const SupportIndex&) = default;
};

struct SamplingConfig {
  MeasureSpec measure;
  double delta = 0.0;
  Count mu = kDefaultMu;
  std::uint64_t seed = kDefaultSeed;
  /// Strict cutoff on M(i, j); mu / 2 when unset.
  std::optional<double> report_threshold;

  [[nodiscard]] double effective_report_threshold() const noexcept {
    return report_threshold.value_or(static_cast<double>(mu) / 2.0);
  }
  /// Throws ConfigError on an invalid threshold or mu.
  void validate() const;
};

/// The multiset M: canonical pair -> number of times sampled.
class SampleMultiset {
 public:
  void add(PairKey pair, Count times = 1) {
    counts_[pair.packed()] += times;
    total_ += times;
  }
  void merge(const SampleMultiset& other);
  void reserve(std::size_t n) { counts_.reserve(n); }

  [[nodiscard]] Count count(PairKey pair) const noexcept;
  [[nodiscard]] std::size_t distinct() const noexcept { return counts_.size(); }
  /// N' = sum of all M(i, j).
  [[nodiscard]] Count total() const noexcept { return total_; }
  [[nodiscard]] bool empty() const noexcept { return counts_.empty(); }

  /// Entries sorted by (first, second).
  [[nodiscard]] std::vector<std::pair<PairKey, Count>> entries() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, c] : counts_) fn(PairKey::unpack(key), c);
  }

  friend bool operator==(const SampleMultiset& a, const SampleMultiset& b) {
    return a.total_ == b.total_ && a.counts_ == b.counts_;
  }

 private:
  std::unordered_map<std::uint64_t, Count> counts_;
  Count total_ = 0;
};

struct ReportedPair {
  PairKey pair;
  Count samples = 0;
  /// f(c_i, c_j, Δ) * mu >= 1: every co-occurrence was sampled, so
  /// samples = |S_i ∩ S_j|.
  bool exact = false;
  /// Exact similarity when `exact`; otherwise the plug-in estimate from
  /// samples = ĉ_ij * f * mu.
  double estimated_similarity = 0.0;

  friend bool operator==(const ReportedPair&, const ReportedPair&) = default;
};

/// Supports plus every transaction re-sorted into support order, ready for
/// repeated sampling runs.
class PreparedDatabase {
 public:
  /// `threads` = 1 uses the serial kernels, 0 lets OpenMP choose.
  explicit PreparedDatabase(const TransactionDatabase& db, int threads = 0);

  [[nodiscard]] const SupportIndex& supports() const noexcept { return supports_; }
  [[nodiscard]] std::size_t size() const noexcept { return offsets_.size() - 1; }
  [[nodiscard]] std::span<const ItemId> transaction(std::size_t t) const noexcept {
    return {items_.data() + offsets_[t], items_.data() + offsets_[t + 1]};
  }
  /// Supports aligned with transaction(t).
  [[nodiscard]] std::span<const Count> transaction_supports(std::size_t t) const noexcept {
    return {item_supports_.data() + offsets_[t], item_supports_.data() + offsets_[t + 1]};
  }
  [[nodiscard]] Count item_occurrences() const noexcept { return items_.size(); }
  [[nodiscard]] Count distinct_items() const noexcept { return distinct_; }

 private:
  SupportIndex supports_;
  std::vector<std::size_t> offsets_;
  std::vector<ItemId> items_;
  std::vector<Count> item_supports_;
  Count distinct_ = 0;
};

[[nodiscard]] SupportIndex count_supports(const TransactionDatabase& db, int threads = 0);

/// Sorts `items` into support order (ties by id).
void sort_by_support(std::span<ItemId> items, const SupportIndex& supports);

/// Calls emit(i, j) for every position pair i < j of a support-ordered
/// transaction with weight(c_i, c_j) > r, advancing j for each anchor i
/// only while the test holds.
template <typename Weight, typename Emit>
void scan_transaction(std::span<const Count> supports, const Weight& weight, double r,
                      Emit&& emit) {
  const std::size_t b = supports.size();
  for (std::size_t i = 0; i + 1 < b; ++i) {
    for (std::size_t j = i + 1; j < b && weight(supports[i], supports[j]) > r; ++j) {
      emit(i, j);
    }
  }
}

/// The pairs of one transaction sampled under threshold draw r. The
/// transaction is put into support order first.
[[nodiscard]] std::vector<PairKey> sample_transaction(std::span<const ItemId> txn,
                                                      const SupportIndex& supports,
                                                      const SamplingConfig& config, double r);

/// The report decision for one aggregated pair with sample count `samples`;
/// nullopt when the pair is filtered out. `weight` must be built from the
/// same config and transaction count m.
[[nodiscard]] std::optional<ReportedPair> judge_pair(PairKey pair, Count samples, Count ci,
                                                     Count cj, const ScaledWeight& weight,
                                                     const SamplingConfig& config, Count m);

/// Keeps the pairs with M(i, j) > threshold or M(i, j) * f(c_i, c_j, Δ) >= 1,
/// sorted by (first, second).
[[nodiscard]] std::vector<ReportedPair> filter_report(const SampleMultiset& multiset,
                                                      const SupportIndex& supports,
                                                      const SamplingConfig& config);

struct BiSamResult {
  SampleMultiset multiset;
  std::vector<ReportedPair> report;
  CostReport cost;
};

[[nodiscard]] BiSamResult run_bisam(const TransactionDatabase& db, const SamplingConfig& config,
                                    int threads = 0);
[[nodiscard]] BiSamResult run_bisam(const PreparedDatabase& db, const SamplingConfig& config,
                                    int threads = 0);

}  // namespace bisam
