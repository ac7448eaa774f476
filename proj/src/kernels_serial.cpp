#include <algorithm>

#include <fmt/format.h>

#include "bisam/errors.hpp"
#include "bisam/kernels.hpp"
#include "bisam/rng.hpp"

namespace bisam::kernels::serial {

std::vector<Count> count_supports(const TransactionDatabase& db) {
  std::vector<Count> counts(db.universe(), 0);
  for (const ItemId item : db.items()) {
    ++counts[item];
  }
  return counts;
}

SortedTransactions sort_transactions(const TransactionDatabase& db, const SupportIndex& supports) {
  SortedTransactions out;
  out.offsets.assign(db.offsets().begin(), db.offsets().end());
  out.items.assign(db.items().begin(), db.items().end());
  out.supports.resize(out.items.size());
  for (std::size_t t = 0; t < db.size(); ++t) {
    const auto begin = static_cast<std::ptrdiff_t>(out.offsets[t]);
    const auto end = static_cast<std::ptrdiff_t>(out.offsets[t + 1]);
    sort_by_support(std::span(out.items.begin() + begin, out.items.begin() + end), supports);
    for (auto k = begin; k < end; ++k) {
      out.supports[static_cast<std::size_t>(k)] = supports(out.items[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

SampleMultiset sample_pairs(const PreparedDatabase& db, const SamplingConfig& config) {
  const ScaledWeight weight(config.measure, config.delta, config.mu, db.supports().transactions);
  SampleMultiset multiset;
  for (std::size_t t = 0; t < db.size(); ++t) {
    const auto items = db.transaction(t);
    const double r = rng::transaction_threshold(config.seed, t);
    scan_transaction(db.transaction_supports(t), weight, r,
                     [&](std::size_t i, std::size_t j) { multiset.add({items[i], items[j]}); });
  }
  return multiset;
}

PairCountTable count_pairs(const PreparedDatabase& db, Count pair_budget) {
  PairCountTable table;
  for (std::size_t t = 0; t < db.size(); ++t) {
    const auto items = db.transaction(t);
    const std::size_t b = items.size();
    for (std::size_t i = 0; i + 1 < b; ++i) {
      for (std::size_t j = i + 1; j < b; ++j) {
        ++table.counts[PairKey{items[i], items[j]}.packed()];
      }
    }
    table.total_pair_occurrences += static_cast<Count>(b) * (b - (b > 0 ? 1 : 0)) / 2;
    if (table.counts.size() > pair_budget) {
      throw ResourceError(
          fmt::format("exact pair table exceeds the budget of {} entries", pair_budget));
    }
  }
  return table;
}

TransactionDatabase generate_independent(const IndependentModel& model) {
  const std::uint64_t key = model.seed ^ rng::kGenerateDomain;
  TransactionDatabase db;
  std::vector<ItemId> row;
  for (Count t = 0; t < model.m; ++t) {
    row.clear();
    for (Count i = 0; i < model.n; ++i) {
      if (rng::keyed_uniform(key, t, i) < model.probabilities[i]) {
        row.push_back(static_cast<ItemId>(i));
      }
    }
    db.add_normalized(row);
  }
  return db;
}

}  // namespace bisam::kernels::serial
