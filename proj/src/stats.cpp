#include "bisam/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bisam/errors.hpp"

namespace bisam {

namespace {

// Sums exp(log_term(j)) for j in [lo, hi], scaled by the largest term so
// that underflow of individual terms does not lose the total. Past the
// peak the summation stops once terms fall below 1e-18 of the total.
template <typename LogTerm>
double sum_log_terms(Count lo, Count hi, Count peak, LogTerm log_term) {
  if (lo > hi) {
    return 0.0;
  }
  const Count anchor = std::clamp(peak, lo, hi);
  const double lmax = log_term(anchor);
  if (!std::isfinite(lmax)) {
    return 0.0;
  }
  double sum = 0.0;
  for (Count j = anchor;; --j) {
    const double term = std::exp(log_term(j) - lmax);
    sum += term;
    if (j == lo || term < 1e-18 * sum) break;
  }
  for (Count j = anchor + 1; j <= hi; ++j) {
    const double term = std::exp(log_term(j) - lmax);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(lmax) * sum;
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

Count required_mu(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("error probability must lie in (0, 1)");
  }
  const double mu = 8.0 * -std::log(epsilon);
  // Absorb the rounding of log() so that, e.g., epsilon = e^-1 gives 8.
  return static_cast<Count>(std::ceil(mu * (1.0 - 1e-12)));
}

double chernoff_false_negative_bound(Count mu) { return std::exp(-static_cast<double>(mu) / 8.0); }

double poisson_cdf(Count k, double lambda) {
  if (!(lambda >= 0.0)) {
    throw DomainError("Poisson mean must be nonnegative");
  }
  if (lambda == 0.0) {
    return 1.0;
  }
  if (static_cast<double>(k) > lambda) {
    return clamp01(1.0 - poisson_sf(k, lambda));
  }
  const double log_lambda = std::log(lambda);
  const auto log_pmf = [&](Count j) {
    const auto x = static_cast<double>(j);
    return x * log_lambda - lambda - std::lgamma(x + 1.0);
  };
  return clamp01(sum_log_terms(0, k, static_cast<Count>(lambda), log_pmf));
}

double poisson_sf(Count k, double lambda) {
  if (!(lambda >= 0.0)) {
    throw DomainError("Poisson mean must be nonnegative");
  }
  if (lambda == 0.0) {
    return 0.0;
  }
  if (static_cast<double>(k) < lambda) {
    return clamp01(1.0 - poisson_cdf(k, lambda));
  }
  const double log_lambda = std::log(lambda);
  const auto log_pmf = [&](Count j) {
    const auto x = static_cast<double>(j);
    return x * log_lambda - lambda - std::lgamma(x + 1.0);
  };
  const Count far = k + 1 + static_cast<Count>(lambda + 40.0 * std::sqrt(lambda) + 1000.0);
  return clamp01(sum_log_terms(k + 1, far, static_cast<Count>(lambda), log_pmf));
}

namespace {

struct BinomialLogPmf {
  Count n;
  double log_p;
  double log_q;
  double log_n_fact;

  double operator()(Count j) const {
    const auto x = static_cast<double>(j);
    const auto y = static_cast<double>(n - j);
    return log_n_fact - std::lgamma(x + 1.0) - std::lgamma(y + 1.0) + x * log_p + y * log_q;
  }
};

void check_binomial(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binomial probability must lie in [0, 1]");
  }
}

}  // namespace

double binomial_cdf(Count k, Count n, double p) {
  check_binomial(p);
  if (k >= n || p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const BinomialLogPmf log_pmf{n, std::log(p), std::log1p(-p),
                               std::lgamma(static_cast<double>(n) + 1.0)};
  const auto mode = static_cast<Count>(static_cast<double>(n + 1) * p);
  return clamp01(sum_log_terms(0, k, std::min(mode, n), log_pmf));
}

double binomial_sf(Count k, Count n, double p) {
  check_binomial(p);
  if (k >= n || p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const BinomialLogPmf log_pmf{n, std::log(p), std::log1p(-p),
                               std::lgamma(static_cast<double>(n) + 1.0)};
  const auto mode = static_cast<Count>(static_cast<double>(n + 1) * p);
  return clamp01(sum_log_terms(k + 1, n, std::min(mode, n), log_pmf));
}

Count rejected_cutoff(double threshold) {
  if (!(threshold >= 0.0)) {
    throw DomainError("report threshold must be nonnegative");
  }
  return static_cast<Count>(std::floor(threshold));
}

double false_negative_poisson(Count mu) {
  return false_negative_poisson(mu, static_cast<double>(mu) / 2.0);
}

double false_negative_poisson(Count mu, double threshold) {
  if (mu == 0) {
    throw DomainError("mu must be at least 1");
  }
  return poisson_cdf(rejected_cutoff(threshold), static_cast<double>(mu));
}

double false_negative_any_sample(Count mu) {
  if (mu == 0) {
    throw DomainError("mu must be at least 1");
  }
  return std::exp(-static_cast<double>(mu));
}

double false_positive_poisson(Count mu, double ratio) {
  return false_positive_poisson(mu, ratio, static_cast<double>(mu) / 2.0);
}

double false_positive_poisson(Count mu, double ratio, double threshold) {
  if (mu == 0) {
    throw DomainError("mu must be at least 1");
  }
  if (!(ratio >= 0.0)) {
    throw DomainError("similarity ratio must be nonnegative");
  }
  return poisson_sf(rejected_cutoff(threshold), static_cast<double>(mu) * ratio);
}

ErrorProfile error_profile(Count mu, std::span<const double> ratios) {
  ErrorProfile p;
  p.mu = mu;
  p.false_negative = false_negative_poisson(mu);
  p.false_negative_any_sample = false_negative_any_sample(mu);
  p.chernoff_bound = chernoff_false_negative_bound(mu);
  for (const double ratio : ratios) {
    p.false_positive_at_ratio.emplace_back(ratio, false_positive_poisson(mu, ratio));
  }
  return p;
}

}  // namespace bisam
