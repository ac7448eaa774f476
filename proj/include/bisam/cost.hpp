#pragma once

// Machine-independent cost model: time counts associative-counter
// operations, space counts live counter entries.
//
//   BiSam time  = N + N'             BiSam space = n + distinct pairs in M
//   exact time  = N + sum_t C(b_t,2)  exact space = n + distinct co-occurring pairs

#include <optional>

#include "bisam/types.hpp"

namespace bisam {

enum class CostMode { observed, expectation };

struct CostReport {
  CostMode mode = CostMode::observed;

  Count item_occurrences = 0;  // N
  Count distinct_items = 0;    // n
  double samples = 0.0;        // N' (expected value in expectation mode)
  double distinct_pairs = 0.0;

  double bisam_time = 0.0;
  double bisam_space = 0.0;
  std::optional<Count> exact_time;
  std::optional<Count> exact_space;
  /// Reported pairs z (expected count in expectation mode).
  double output_count = 0.0;

  [[nodiscard]] std::optional<double> time_ratio() const {
    if (!exact_time || bisam_time <= 0.0) return std::nullopt;
    return static_cast<double>(*exact_time) / bisam_time;
  }
  [[nodiscard]] std::optional<double> space_ratio() const {
    if (!exact_space || bisam_space <= 0.0) return std::nullopt;
    return static_cast<double>(*exact_space) / bisam_space;
  }

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

}  // namespace bisam
