#pragma once

// Similarity measures expressible through a sampling function f with
//
//   |S_i ∩ S_j| * f(|S_i|, |S_j|, s(i, j)) = 1,
//
// where f is non-increasing in all three arguments. Evaluated at s = Δ,
// min(1, f * mu) is the per-co-occurrence sampling probability.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "bisam/types.hpp"

namespace bisam {

enum class MeasureKind { lift, cosine, jaccard, all_confidence, dice, overlap_coef, composite };

enum class Combinator { linear, min };

struct CompositeParts;

class MeasureSpec {
 public:
  /// Cosine, the measure used throughout the experiments.
  MeasureSpec() = default;
  explicit MeasureSpec(MeasureKind kind);

  [[nodiscard]] MeasureKind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_composite() const noexcept { return kind_ == MeasureKind::composite; }
  /// Only valid when is_composite().
  [[nodiscard]] const CompositeParts& parts() const;

  /// Canonical lowercase name for base measures; a readable expression for
  /// composites, accepted back by parse_measure().
  [[nodiscard]] std::string name() const;

  /// True when every similarity value lies in [0, 1].
  [[nodiscard]] bool bounded_by_one() const noexcept;

  friend bool operator==(const MeasureSpec& a, const MeasureSpec& b);

 private:
  friend MeasureSpec compose_measures(Combinator, double, const MeasureSpec&, double,
                                      const MeasureSpec&, double, double);

  MeasureKind kind_ = MeasureKind::cosine;
  std::shared_ptr<const CompositeParts> parts_;
};

/// A composite weight is combine(alpha * f1(ci, cj, s * t1), beta * f2(ci, cj, s * t2)).
/// The per-component thresholds t1, t2 rescale the shared level s, so at
/// s = 1 each component is evaluated at its own threshold ("cosine at least
/// 0.7 and lift at least 2" is min(cosine@0.7, lift@2) searched at s = 1).
struct CompositeParts {
  Combinator combinator = Combinator::min;
  double alpha = 1.0;
  MeasureSpec first;
  double first_threshold = 1.0;
  double beta = 1.0;
  MeasureSpec second;
  double second_threshold = 1.0;
};

[[nodiscard]] std::string_view measure_name(MeasureKind kind);

/// Accepts the six base names, plus `min(a,b)` / `linear(a,b)` where each
/// operand is `[coef*]name[@threshold]`, nested freely.
[[nodiscard]] MeasureSpec parse_measure(std::string_view text);

[[nodiscard]] MeasureSpec compose_measures(Combinator combinator, double alpha,
                                           const MeasureSpec& first, double beta,
                                           const MeasureSpec& second, double first_threshold = 1.0,
                                           double second_threshold = 1.0);

/// s(i, j) from the supports ci, cj, the co-occurrence count cij and the
/// transaction count m. Lift is cij * m / (ci * cj).
[[nodiscard]] double similarity_from_counts(const MeasureSpec& measure, Count ci, Count cj,
                                            Count cij, Count m);

/// The same, for a real-valued (estimated) co-occurrence count.
[[nodiscard]] double similarity_from_estimate(const MeasureSpec& measure, Count ci, Count cj,
                                              double cij, Count m);

/// f(ci, cj, s). `m` only matters for lift.
[[nodiscard]] double sampling_weight(const MeasureSpec& measure, Count ci, Count cj, double s,
                                     Count m);

/// The s solving f(ci, cj, s) * mu = r. Returns nullopt when no solution
/// exists in the measure's admissible range: for jaccard when the solution
/// would exceed 1, for composites when f * mu stays above r for all s.
[[nodiscard]] std::optional<double> solve_threshold_for_weight(const MeasureSpec& measure, Count ci,
                                                               Count cj, double r, Count mu,
                                                               Count m);

/// Largest attainable similarity (m for lift, 1 for the others, +inf for
/// composites).
[[nodiscard]] double similarity_upper_bound(const MeasureSpec& measure, Count m);

namespace detail {

/// Unchecked f for a base measure; the sampling kernels' hot path.
[[nodiscard]] inline double base_weight(MeasureKind kind, double ci, double cj, double s,
                                        double m) noexcept {
  switch (kind) {
    case MeasureKind::lift:
      return m / (s * ci * cj);
    case MeasureKind::cosine:
      return 1.0 / (s * std::sqrt(ci * cj));
    case MeasureKind::jaccard:
      return (1.0 + s) / s / (ci + cj);
    case MeasureKind::all_confidence:
      return 1.0 / (s * (ci < cj ? cj : ci));
    case MeasureKind::dice:
      return 1.0 / (s * (ci + cj));
    case MeasureKind::overlap_coef:
      return 1.0 / (s * (ci < cj ? ci : cj));
    case MeasureKind::composite:
      break;
  }
  return 0.0;
}

/// Unchecked f for any measure, composites included.
[[nodiscard]] double weight(const MeasureSpec& measure, double ci, double cj, double s,
                            double m) noexcept;

}  // namespace detail

/// f(., ., Δ) * mu bound to a fixed threshold and transaction count, for
/// inner loops. Base measures dispatch without touching the composite tree.
class ScaledWeight {
 public:
  ScaledWeight(const MeasureSpec& measure, double delta, Count mu, Count m)
      : measure_(&measure),
        kind_(measure.kind()),
        delta_(delta),
        mu_(static_cast<double>(mu)),
        m_(static_cast<double>(m)) {}

  /// f(ci, cj, Δ).
  [[nodiscard]] double weight(Count ci, Count cj) const noexcept {
    const auto a = static_cast<double>(ci);
    const auto b = static_cast<double>(cj);
    if (kind_ != MeasureKind::composite) {
      return detail::base_weight(kind_, a, b, delta_, m_);
    }
    return detail::weight(*measure_, a, b, delta_, m_);
  }

  /// f(ci, cj, Δ) * mu, the quantity compared against r_t.
  [[nodiscard]] double operator()(Count ci, Count cj) const noexcept {
    return weight(ci, cj) * mu_;
  }

 private:
  const MeasureSpec* measure_;
  MeasureKind kind_;
  double delta_;
  double mu_;
  double m_;
};

}  // namespace bisam
