#include "bisam/sampler.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bisam/errors.hpp"
#include "bisam/kernels.hpp"

namespace bisam {

Count SupportIndex::total() const noexcept {
  Count sum = 0;
  for (const Count c : counts) sum += c;
  return sum;
}

Count SupportIndex::distinct() const noexcept {
  return static_cast<Count>(std::count_if(counts.begin(), counts.end(),
                                          [](Count c) { return c > 0; }));
}

void SamplingConfig::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ConfigError(fmt::format("threshold must be positive, got {}", delta));
  }
  if (measure.bounded_by_one() && delta > 1.0) {
    throw ConfigError(fmt::format("{} similarity never exceeds 1; threshold {} is unreachable",
                                  measure.name(), delta));
  }
  if (mu == 0) {
    throw ConfigError("mu must be at least 1");
  }
  if (report_threshold && !(*report_threshold >= 0.0)) {
    throw ConfigError("report threshold must be nonnegative");
  }
}

void SampleMultiset::merge(const SampleMultiset& other) {
  for (const auto& [key, c] : other.counts_) {
    counts_[key] += c;
  }
  total_ += other.total_;
}

Count SampleMultiset::count(PairKey pair) const noexcept {
  const auto it = counts_.find(pair.packed());
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::pair<PairKey, Count>> SampleMultiset::entries() const {
  std::vector<std::pair<PairKey, Count>> out;
  out.reserve(counts_.size());
  for (const auto& [key, c] : counts_) {
    out.emplace_back(PairKey::unpack(key), c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

PreparedDatabase::PreparedDatabase(const TransactionDatabase& db, int threads) {
  supports_ = count_supports(db, threads);
  auto sorted = threads == 1 ? kernels::serial::sort_transactions(db, supports_)
                             : kernels::omp::sort_transactions(db, supports_, threads);
  offsets_ = std::move(sorted.offsets);
  items_ = std::move(sorted.items);
  item_supports_ = std::move(sorted.supports);
  distinct_ = db.distinct_items();
}

SupportIndex count_supports(const TransactionDatabase& db, int threads) {
  SupportIndex index;
  index.counts = threads == 1 ? kernels::serial::count_supports(db)
                              : kernels::omp::count_supports(db, threads);
  index.transactions = db.size();
  return index;
}

void sort_by_support(std::span<ItemId> items, const SupportIndex& supports) {
  std::sort(items.begin(), items.end(),
            [&](ItemId a, ItemId b) { return supports.precedes(a, b); });
}

std::vector<PairKey> sample_transaction(std::span<const ItemId> txn, const SupportIndex& supports,
                                        const SamplingConfig& config, double r) {
  std::vector<ItemId> items(txn.begin(), txn.end());
  sort_by_support(items, supports);
  std::vector<Count> item_supports(items.size());
  std::transform(items.begin(), items.end(), item_supports.begin(),
                 [&](ItemId item) { return supports(item); });
  const ScaledWeight weight(config.measure, config.delta, config.mu, supports.transactions);
  std::vector<PairKey> out;
  scan_transaction(std::span<const Count>(item_supports), weight, r,
                   [&](std::size_t i, std::size_t j) { out.push_back({items[i], items[j]}); });
  return out;
}

std::optional<ReportedPair> judge_pair(PairKey pair, Count samples, Count ci, Count cj,
                                       const ScaledWeight& weight, const SamplingConfig& config,
                                       Count m) {
  const double f = weight.weight(ci, cj);
  const auto observed = static_cast<double>(samples);
  if (!(observed > config.effective_report_threshold() || observed * f >= 1.0)) {
    return std::nullopt;
  }
  const auto mu = static_cast<double>(config.mu);
  ReportedPair rp;
  rp.pair = pair;
  rp.samples = samples;
  rp.exact = f * mu >= 1.0;
  const double cij =
      rp.exact ? observed
               : std::min(observed / (f * mu), static_cast<double>(std::min(ci, cj)));
  rp.estimated_similarity = similarity_from_estimate(config.measure, ci, cj, cij, m);
  return rp;
}

std::vector<ReportedPair> filter_report(const SampleMultiset& multiset,
                                        const SupportIndex& supports,
                                        const SamplingConfig& config) {
  const ScaledWeight weight(config.measure, config.delta, config.mu, supports.transactions);
  std::vector<ReportedPair> out;
  multiset.for_each([&](PairKey pair, Count samples) {
    if (auto rp = judge_pair(pair, samples, supports(pair.first), supports(pair.second), weight,
                             config, supports.transactions)) {
      out.push_back(*rp);
    }
  });
  std::sort(out.begin(), out.end(),
            [](const ReportedPair& a, const ReportedPair& b) { return a.pair < b.pair; });
  return out;
}

BiSamResult run_bisam(const TransactionDatabase& db, const SamplingConfig& config, int threads) {
  config.validate();
  return run_bisam(PreparedDatabase(db, threads), config, threads);
}

BiSamResult run_bisam(const PreparedDatabase& db, const SamplingConfig& config, int threads) {
  config.validate();
  BiSamResult result;
  result.multiset = threads == 1 ? kernels::serial::sample_pairs(db, config)
                                 : kernels::omp::sample_pairs(db, config, threads);
  result.report = filter_report(result.multiset, db.supports(), config);

  auto& cost = result.cost;
  cost.mode = CostMode::observed;
  cost.item_occurrences = db.item_occurrences();
  cost.distinct_items = db.distinct_items();
  cost.samples = static_cast<double>(result.multiset.total());
  cost.distinct_pairs = static_cast<double>(result.multiset.distinct());
  cost.bisam_time = static_cast<double>(cost.item_occurrences) + cost.samples;
  cost.bisam_space = static_cast<double>(cost.distinct_items) + cost.distinct_pairs;
  cost.output_count = static_cast<double>(result.report.size());
  return result;
}

}  // namespace bisam
