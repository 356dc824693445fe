#pragma once

// Goodness-of-fit helpers for the Monte Carlo checks.

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "dcrep/error.hpp"

namespace dcrep::stats {

/// Asymptotic Kolmogorov tail P(K > lambda).
inline double kolmogorov_sf(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample KS against a continuous CDF (Stephens' small-sample correction).
inline KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
  detail::require(!xs.empty(), "ks_one_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)};
}

inline KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
  detail::require(!xs.empty() && !ys.empty(), "ks_two_sample: empty sample");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double x = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= x) ++i;
    while (j < ys.size() && ys[j] <= x) ++j;
    d = std::max(d, std::abs(i / n1 - j / n2));
  }
  const double ne = std::sqrt(n1 * n2 / (n1 + n2));
  return {d, kolmogorov_sf((ne + 0.12 + 0.11 / ne) * d)};
}

inline double chi_square_sf(double statistic, double dof) {
  detail::require(dof > 0, "chi_square_sf: dof must be positive");
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts to expected probabilities.
/// Cells with zero expected probability must have zero counts and are skipped.
inline ChiSquareResult chi_square_gof(const std::vector<double>& counts, const std::vector<double>& probs) {
  detail::require(counts.size() == probs.size(), "chi_square_gof: size mismatch");
  double total = 0.0;
  for (double c : counts) total += c;
  detail::require(total > 0, "chi_square_gof: no observations");
  double stat = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (probs[k] <= 0.0) {
      if (counts[k] > 0) return {std::numeric_limits<double>::infinity(), 0.0, 0.0};
      continue;
    }
    const double e = total * probs[k];
    stat += (counts[k] - e) * (counts[k] - e) / e;
    ++cells;
  }
  if (cells <= 1) return {0.0, 0.0, 1.0};
  return {stat, static_cast<double>(cells - 1), chi_square_sf(stat, cells - 1)};
}

}  // namespace dcrep::stats
