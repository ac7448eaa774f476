#include <atomic>

#include <fmt/format.h>
#include <omp.h>

#include "bisam/errors.hpp"
#include "bisam/kernels.hpp"
#include "bisam/rng.hpp"

namespace bisam::kernels::omp {

namespace {

int team_size(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

// OpenMP loops want a signed induction variable.
std::int64_t as_index(std::size_t n) { return static_cast<std::int64_t>(n); }

}  // namespace

std::vector<Count> count_supports(const TransactionDatabase& db, int threads) {
  const auto items = db.items();
  std::vector<Count> counts(db.universe(), 0);
#pragma omp parallel num_threads(team_size(threads))
  {
    std::vector<Count> local(counts.size(), 0);
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < as_index(items.size()); ++k) {
      ++local[items[static_cast<std::size_t>(k)]];
    }
#pragma omp critical(bisam_supports_merge)
    for (std::size_t i = 0; i < counts.size(); ++i) {
      counts[i] += local[i];
    }
  }
  return counts;
}

SortedTransactions sort_transactions(const TransactionDatabase& db, const SupportIndex& supports,
                                     int threads) {
  SortedTransactions out;
  out.offsets.assign(db.offsets().begin(), db.offsets().end());
  out.items.assign(db.items().begin(), db.items().end());
  out.supports.resize(out.items.size());
#pragma omp parallel for schedule(dynamic, 256) num_threads(team_size(threads))
  for (std::int64_t t = 0; t < as_index(db.size()); ++t) {
    const std::size_t begin = out.offsets[static_cast<std::size_t>(t)];
    const std::size_t end = out.offsets[static_cast<std::size_t>(t) + 1];
    sort_by_support(std::span(out.items.data() + begin, end - begin), supports);
    for (std::size_t k = begin; k < end; ++k) {
      out.supports[k] = supports(out.items[k]);
    }
  }
  return out;
}

SampleMultiset sample_pairs(const PreparedDatabase& db, const SamplingConfig& config,
                            int threads) {
  const ScaledWeight weight(config.measure, config.delta, config.mu, db.supports().transactions);
  SampleMultiset merged;
#pragma omp parallel num_threads(team_size(threads))
  {
    SampleMultiset local;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t t = 0; t < as_index(db.size()); ++t) {
      const auto tx = static_cast<std::size_t>(t);
      const auto items = db.transaction(tx);
      const double r = rng::transaction_threshold(config.seed, tx);
      scan_transaction(db.transaction_supports(tx), weight, r,
                       [&](std::size_t i, std::size_t j) { local.add({items[i], items[j]}); });
    }
#pragma omp critical(bisam_sample_merge)
    merged.merge(local);
  }
  return merged;
}

PairCountTable count_pairs(const PreparedDatabase& db, Count pair_budget, int threads) {
  PairCountTable merged;
  std::atomic<bool> over_budget{false};
#pragma omp parallel num_threads(team_size(threads))
  {
    PairCountTable local;
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t t = 0; t < as_index(db.size()); ++t) {
      if (over_budget.load(std::memory_order_relaxed)) {
        continue;
      }
      const auto items = db.transaction(static_cast<std::size_t>(t));
      const std::size_t b = items.size();
      for (std::size_t i = 0; i + 1 < b; ++i) {
        for (std::size_t j = i + 1; j < b; ++j) {
          ++local.counts[PairKey{items[i], items[j]}.packed()];
        }
      }
      local.total_pair_occurrences += static_cast<Count>(b) * (b - (b > 0 ? 1 : 0)) / 2;
      if (local.counts.size() > pair_budget) {
        over_budget.store(true, std::memory_order_relaxed);
      }
    }
#pragma omp critical(bisam_pairs_merge)
    if (!over_budget.load(std::memory_order_relaxed)) {
      for (const auto& [key, c] : local.counts) {
        merged.counts[key] += c;
      }
      merged.total_pair_occurrences += local.total_pair_occurrences;
      if (merged.counts.size() > pair_budget) {
        over_budget.store(true, std::memory_order_relaxed);
      }
    }
  }
  if (over_budget.load()) {
    throw ResourceError(
        fmt::format("exact pair table exceeds the budget of {} entries", pair_budget));
  }
  return merged;
}

TransactionDatabase generate_independent(const IndependentModel& model, int threads) {
  const std::uint64_t key = model.seed ^ rng::kGenerateDomain;
  std::vector<std::vector<ItemId>> rows(model.m);
#pragma omp parallel for schedule(static) num_threads(team_size(threads))
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(model.m); ++t) {
    auto& row = rows[static_cast<std::size_t>(t)];
    for (Count i = 0; i < model.n; ++i) {
      if (rng::keyed_uniform(key, static_cast<std::uint64_t>(t), i) < model.probabilities[i]) {
        row.push_back(static_cast<ItemId>(i));
      }
    }
  }
  TransactionDatabase db;
  for (const auto& row : rows) {
    db.add_normalized(row);
  }
  return db;
}

}  // namespace bisam::kernels::omp
