#pragma once

// Error probabilities of the report filter "M > mu/2 or M f >= 1".
//
// For a pair sampled in the binomial regime, M ~ Binomial(c_ij, f mu) with
// mean mu * s / Δ (every base measure but jaccard). The filter misses such a
// pair when M <= floor(threshold); the Poisson approximation replaces the
// binomial by Poisson(mu * s / Δ).

#include <span>
#include <utility>
#include <vector>

#include "bisam/types.hpp"

namespace bisam {

/// ceil(8 ln(1/epsilon)), the Chernoff-sufficient mu.
[[nodiscard]] Count required_mu(double epsilon);

/// exp(-mu / 8), the Chernoff bound on the false-negative probability.
[[nodiscard]] double chernoff_false_negative_bound(Count mu);

/// P(X <= k) and P(X > k) for X ~ Poisson(lambda).
[[nodiscard]] double poisson_cdf(Count k, double lambda);
[[nodiscard]] double poisson_sf(Count k, double lambda);

/// P(X <= k) and P(X > k) for X ~ Binomial(n, p).
[[nodiscard]] double binomial_cdf(Count k, Count n, double p);
[[nodiscard]] double binomial_sf(Count k, Count n, double p);

/// Largest sample count the strict filter M > threshold rejects.
[[nodiscard]] Count rejected_cutoff(double threshold);

/// P(pair at the threshold is not reported) under Poisson(mu), i.e.
/// P(X <= floor(threshold)). threshold defaults to mu / 2.
[[nodiscard]] double false_negative_poisson(Count mu);
[[nodiscard]] double false_negative_poisson(Count mu, double threshold);

/// P(pair at the threshold is never sampled) = exp(-mu), for the variant
/// that returns the whole multiset.
[[nodiscard]] double false_negative_any_sample(Count mu);

/// P(X > mu/2) for X ~ Poisson(mu * ratio), ratio = s / Δ.
[[nodiscard]] double false_positive_poisson(Count mu, double ratio);
[[nodiscard]] double false_positive_poisson(Count mu, double ratio, double threshold);

struct ErrorProfile {
  Count mu = 0;
  double false_negative = 0.0;
  double false_negative_any_sample = 0.0;
  double chernoff_bound = 0.0;
  /// (s / Δ, false-positive probability)
  std::vector<std::pair<double, double>> false_positive_at_ratio;
};

[[nodiscard]] ErrorProfile error_profile(Count mu, std::span<const double> ratios = {});

}  // namespace bisam
