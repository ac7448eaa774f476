#include "bisam/adaptive.hpp"

#include <limits>
#include <tuple>

#include "bisam/errors.hpp"
#include "bisam/rng.hpp"

namespace bisam {

bool AdaptiveStream::Lower::operator()(const Entry& a, const Entry& b) const noexcept {
  if (a.trigger != b.trigger) {
    return a.trigger < b.trigger;
  }
  return std::tie(a.transaction, a.anchor, a.partner) >
         std::tie(b.transaction, b.anchor, b.partner);
}

AdaptiveStream::AdaptiveStream(const PreparedDatabase& db, MeasureSpec measure, Count mu,
                               std::uint64_t seed)
    : db_(db),
      measure_(std::move(measure)),
      mu_(mu),
      seed_(seed),
      upper_(similarity_upper_bound(measure_, db.supports().transactions)) {
  if (mu == 0) {
    throw ConfigError("mu must be at least 1");
  }
  if (measure_.is_composite() && measure_.parts().combinator == Combinator::linear) {
    throw UnsupportedMeasureError("adaptive sampling needs closed-form triggers; " +
                                  measure_.name() + " is a linear composite");
  }
  if (db.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("too many transactions for the adaptive queue");
  }
  for (std::size_t t = 0; t < db.size(); ++t) {
    const std::size_t b = db.transaction(t).size();
    for (std::size_t i = 0; i + 1 < b; ++i) {
      push(t, i, i + 1);
    }
  }
}

double AdaptiveStream::trigger_of(std::size_t t, std::size_t i, std::size_t j) const {
  const auto supports = db_.transaction_supports(t);
  const double r = rng::transaction_threshold(seed_, t);
  if (r == 0.0) {
    return upper_;
  }
  // No solution in range means the pair is sampled at every admissible Δ.
  const auto s = solve_threshold_for_weight(measure_, supports[i], supports[j], r, mu_,
                                            db_.supports().transactions);
  return s ? std::min(*s, upper_) : upper_;
}

void AdaptiveStream::push(std::size_t t, std::size_t i, std::size_t j) {
  queue_.push(Entry{trigger_of(t, i, j), static_cast<std::uint32_t>(t),
                    static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
  peak_ = std::max(peak_, queue_.size());
}

AdaptiveEmission AdaptiveStream::pop() {
  const Entry e = queue_.top();
  queue_.pop();
  const auto items = db_.transaction(e.transaction);
  if (e.partner + 1 < items.size()) {
    push(e.transaction, e.anchor, e.partner + 1);
  }
  return {PairKey{items[e.anchor], items[e.partner]}, e.trigger, e.transaction};
}

std::optional<AdaptiveEmission> AdaptiveStream::next() {
  if (queue_.empty()) {
    return std::nullopt;
  }
  return pop();
}

std::optional<AdaptiveEmission> AdaptiveStream::next_at(double delta) {
  if (queue_.empty()) {
    return std::nullopt;
  }
  // Decide with the fixed-Δ sampler's own test rather than comparing
  // triggers, so that rounding in the inversion cannot split the two.
  const Entry& e = queue_.top();
  const auto supports = db_.transaction_supports(e.transaction);
  const ScaledWeight weight(measure_, delta, mu_, db_.supports().transactions);
  const double r = rng::transaction_threshold(seed_, e.transaction);
  if (!(weight(supports[e.anchor], supports[e.partner]) > r)) {
    return std::nullopt;
  }
  return pop();
}

std::optional<double> AdaptiveStream::peek_trigger() const {
  if (queue_.empty()) {
    return std::nullopt;
  }
  return queue_.top().trigger;
}

AdaptiveResult stream_pairs_adaptive(const PreparedDatabase& db, const MeasureSpec& measure,
                                     Count mu, std::uint64_t seed, StopCriterion stop) {
  if (stop.kind == StopCriterion::Kind::min_delta && !(stop.min_delta > 0.0)) {
    throw ConfigError("min_delta must be positive");
  }
  AdaptiveStream stream(db, measure, mu, seed);
  AdaptiveResult result;
  while (true) {
    std::optional<AdaptiveEmission> e;
    if (stop.kind == StopCriterion::Kind::max_samples) {
      if (result.stream.size() >= stop.max_samples) break;
      e = stream.next();
    } else {
      e = stream.next_at(stop.min_delta);
    }
    if (!e) break;
    result.multiset.add(e->pair);
    result.stream.push_back(*e);
  }
  if (stop.kind == StopCriterion::Kind::min_delta) {
    result.stop_delta = stop.min_delta;
  } else if (!result.stream.empty()) {
    result.stop_delta = result.stream.back().trigger;
  }
  if (result.stop_delta && *result.stop_delta > 0.0) {
    SamplingConfig config;
    config.measure = measure;
    config.delta = *result.stop_delta;
    config.mu = mu;
    config.seed = seed;
    result.report = filter_report(result.multiset, db.supports(), config);
  }
  result.peak_queue_size = stream.peak_queue_size();
  return result;
}

AdaptiveResult stream_pairs_adaptive(const TransactionDatabase& db, const MeasureSpec& measure,
                                     Count mu, std::uint64_t seed, StopCriterion stop) {
  const PreparedDatabase prepared(db);
  return stream_pairs_adaptive(prepared, measure, mu, seed, stop);
}

}  // namespace bisam
