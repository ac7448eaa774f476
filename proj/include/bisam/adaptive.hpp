#pragma once

// Threshold-free sampling. Every (transaction, anchor) contributes one
// frontier pair to a max-priority queue keyed by its trigger: the Δ at which
// f(c_i, c_j, Δ) * mu = r_t. Popping in decreasing trigger order lowers Δ
// continuously; the pairs popped so far are exactly the pairs the fixed-Δ
// sampler takes at the current trigger with the same seed.

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

#include "bisam/sampler.hpp"

namespace bisam {

struct StopCriterion {
  enum class Kind { max_samples, min_delta };

  Kind kind = Kind::max_samples;
  Count max_samples = 0;
  double min_delta = 0.0;

  [[nodiscard]] static StopCriterion top_k(Count k) { return {Kind::max_samples, k, 0.0}; }
  [[nodiscard]] static StopCriterion at_delta(double delta) {
    return {Kind::min_delta, 0, delta};
  }
};

struct AdaptiveEmission {
  PairKey pair;
  double trigger = 0.0;
  Count transaction = 0;

  friend bool operator==(const AdaptiveEmission&, const AdaptiveEmission&) = default;
};

class AdaptiveStream {
 public:
  /// Throws UnsupportedMeasureError for linear composites, whose triggers
  /// have no closed form.
  AdaptiveStream(const PreparedDatabase& db, MeasureSpec measure, Count mu, std::uint64_t seed);

  /// Next sampled pair occurrence, in non-increasing trigger order; ties
  /// by (transaction, anchor, partner).
  std::optional<AdaptiveEmission> next();
  /// Pops the next entry only if the fixed-Δ sampler would take it at `delta`.
  std::optional<AdaptiveEmission> next_at(double delta);

  [[nodiscard]] std::optional<double> peek_trigger() const;
  [[nodiscard]] std::size_t queue_size() const noexcept { return queue_.size(); }
  [[nodiscard]] std::size_t peak_queue_size() const noexcept { return peak_; }

 private:
  struct Entry {
    double trigger;
    std::uint32_t transaction;
    std::uint32_t anchor;
    std::uint32_t partner;
  };
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const noexcept;
  };

  [[nodiscard]] double trigger_of(std::size_t t, std::size_t i, std::size_t j) const;
  void push(std::size_t t, std::size_t i, std::size_t j);
  AdaptiveEmission pop();

  const PreparedDatabase& db_;
  MeasureSpec measure_;
  Count mu_;
  std::uint64_t seed_;
  double upper_;
  std::priority_queue<Entry, std::vector<Entry>, Lower> queue_;
  std::size_t peak_ = 0;
};

struct AdaptiveResult {
  std::vector<AdaptiveEmission> stream;
  /// The emitted occurrences aggregated per pair.
  SampleMultiset multiset;
  /// Trigger of the last emitted pair (the min_delta itself for that stop).
  std::optional<double> stop_delta;
  /// The multiset passed through the report filter at stop_delta.
  std::vector<ReportedPair> report;
  std::size_t peak_queue_size = 0;
};

[[nodiscard]] AdaptiveResult stream_pairs_adaptive(const PreparedDatabase& db,
                                                   const MeasureSpec& measure, Count mu,
                                                   std::uint64_t seed, StopCriterion stop);
[[nodiscard]] AdaptiveResult stream_pairs_adaptive(const TransactionDatabase& db,
                                                   const MeasureSpec& measure, Count mu,
                                                   std::uint64_t seed, StopCriterion stop);

}  // namespace bisam
