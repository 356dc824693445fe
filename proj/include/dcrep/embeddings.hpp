#pragma once

// Exact samplers for the zero-threshold color representations of Gaussian and
// symmetric stable Markov chains. Consecutive sites are joined when the
// interpolating Brownian segment does not hit zero; given its endpoints that
// event has the bridge probability 1 - exp(-2 x y / var) (same signs).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dcrep/error.hpp"
#include "dcrep/partitions.hpp"
#include "dcrep/rng.hpp"
#include "dcrep/stable_law.hpp"
#include "dcrep/stats.hpp"

namespace dcrep {

struct EmbeddingSample {
  std::vector<int> signs;            // +1 / -1
  Partition partition;               // zero-crossing clusters
  std::vector<double> path_meta;     // per-edge crossing probabilities
  std::uint32_t pattern() const {
    std::uint32_t r = 0;
    for (std::size_t i = 0; i < signs.size(); ++i)
      if (signs[i] > 0) r |= 1u << i;
    return r;
  }
};

namespace detail {

/// P(Brownian segment from x to y with variance var crosses zero).
inline double bridge_crossing(double x, double y, double var) {
  if ((x > 0) != (y > 0)) return 1.0;
  return std::exp(-2.0 * x * y / var);
}

// Runs of non-crossing edges along a path become blocks.
inline EmbeddingSample finish_path(const std::vector<double>& y, const std::vector<double>& pcross, Rng& rng) {
  EmbeddingSample s;
  const int n = static_cast<int>(y.size());
  std::vector<int> labels(n, 0);
  for (int i = 0; i < n; ++i) s.signs.push_back(y[i] > 0 ? 1 : -1);
  for (int i = 1; i < n; ++i) {
    const bool cross = pcross[i - 1] >= 1.0 || rng.uniform() < pcross[i - 1];
    labels[i] = cross ? labels[i - 1] + 1 : labels[i - 1];
  }
  s.partition = Partition(labels);
  s.path_meta = pcross;
  return s;
}

}  // namespace detail

/// OU zero-crossing partition of the Gaussian chain with Corr(Y_i, Y_j) = a^|i-j|.
///
/// The chain is Y_{i+1} = a Y_i + sqrt(1 - a^2) xi, i.e. the time-changed
/// walk w_i = a^{-i} Y_i at tau_i = a^{-2i} written back in stationary units,
/// so 2 w_i w_{i+1} / (tau_{i+1} - tau_i) = 2 a Y_i Y_{i+1} / (1 - a^2) with no overflow.
inline EmbeddingSample ou_partition_sample(double a, int n, Rng& rng) {
  detail::require(a > 0.0 && a < 1.0, "ou_partition_sample: a must be in (0, 1)");
  if (n < 1 || n > kMaxPartitionN) throw SizeError("ou_partition_sample: n out of range");
  const double s = std::sqrt(1 - a * a);
  std::vector<double> y(n), pc(n - 1);
  y[0] = rng.normal();
  for (int i = 1; i < n; ++i) {
    y[i] = a * y[i - 1] + s * rng.normal();
    pc[i - 1] = detail::bridge_crossing(a * y[i - 1], y[i], 1 - a * a);
  }
  return detail::finish_path(y, pc, rng);
}

inline EmbeddingSample ou_partition_sample(double a, int n, std::uint64_t seed) {
  Rng rng(seed);
  return ou_partition_sample(a, n, rng);
}

inline std::vector<EmbeddingSample> ou_partition_batch(double a, int n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<EmbeddingSample> out;
  out.reserve(m);
  for (std::size_t t = 0; t < m; ++t) out.push_back(ou_partition_sample(a, n, rng));
  return out;
}

namespace detail {

struct StableStep {
  double next;
  double pcross;
};

// Y' = a y + c sqrt(S) N with S the alpha/2 subordinator; the segment from a y
// to Y' is Brownian with variance c^2 S. The jump y -> a y keeps the sign.
inline StableStep stable_step(double alpha, double a, double c, double y, Rng& rng) {
  const double S = subordinator_scale(alpha) * pos_stable(alpha / 2, rng);
  const double var = c * c * S;
  const double next = a * y + std::sqrt(var) * rng.normal();
  return {next, bridge_crossing(a * y, next, var)};
}

inline void check_stable_args(double alpha, double a, int n, const char* who) {
  detail::require(alpha > 0.0 && alpha < 2.0, std::string(who) + ": alpha must be in (0, 2)");
  detail::require(a > 0.0 && a < 1.0, std::string(who) + ": a must be in (0, 1)");
  if (n < 1 || n > kMaxPartitionN) throw SizeError(std::string(who) + ": n out of range");
}

}  // namespace detail

/// Subordinated-Brownian partition of the stable chain Y_{i+1} = a Y_i + (1 - a^alpha)^{1/alpha} Z.
inline EmbeddingSample stable_chain_partition_sample(double alpha, double a, int n, Rng& rng) {
  detail::check_stable_args(alpha, a, n, "stable_chain_partition_sample");
  const double c = std::pow(1 - std::pow(a, alpha), 1 / alpha);
  std::vector<double> y(n), pc(n - 1);
  y[0] = sym_stable(alpha, rng);
  for (int i = 1; i < n; ++i) {
    const auto st = detail::stable_step(alpha, a, c, y[i - 1], rng);
    y[i] = st.next;
    pc[i - 1] = st.pcross;
  }
  return detail::finish_path(y, pc, rng);
}

inline EmbeddingSample stable_chain_partition_sample(double alpha, double a, int n, std::uint64_t seed) {
  Rng rng(seed);
  return stable_chain_partition_sample(alpha, a, n, rng);
}

inline std::vector<EmbeddingSample> stable_chain_batch(double alpha, double a, int n, std::size_t m,
                                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<EmbeddingSample> out;
  out.reserve(m);
  for (std::size_t t = 0; t < m; ++t) out.push_back(stable_chain_partition_sample(alpha, a, n, rng));
  return out;
}

/// Star tree: coordinate 0 is the root, 1..leaves are children driven independently.
inline EmbeddingSample stable_star_partition_sample(double alpha, double a, int leaves, Rng& rng) {
  detail::check_stable_args(alpha, a, leaves + 1, "stable_star_partition_sample");
  const double c = std::pow(1 - std::pow(a, alpha), 1 / alpha);
  const int n = leaves + 1;
  std::vector<double> y(n);
  std::vector<double> pc(leaves);
  y[0] = sym_stable(alpha, rng);
  for (int j = 1; j < n; ++j) {
    const auto st = detail::stable_step(alpha, a, c, y[0], rng);
    y[j] = st.next;
    pc[j - 1] = st.pcross;
  }
  EmbeddingSample s;
  std::vector<int> labels(n, 0);
  int next_label = 1;
  for (int i = 0; i < n; ++i) s.signs.push_back(y[i] > 0 ? 1 : -1);
  for (int j = 1; j < n; ++j) {
    const bool cross = pc[j - 1] >= 1.0 || rng.uniform() < pc[j - 1];
    labels[j] = cross ? next_label++ : 0;
  }
  s.partition = Partition(labels);
  s.path_meta = pc;
  return s;
}

// ---------------------------------------------------------------------------

struct ColorPropertyBin {
  std::string partition;
  std::size_t count = 0;
  double chi2 = 0.0;
  double p_value = 1.0;
  bool tested = false;
};

struct ColorPropertyReport {
  bool passed = true;
  bool signs_constant_on_blocks = true;
  double significance = 1e-3;
  std::vector<ColorPropertyBin> bins;
  double aggregate_max_z = 0.0;  // max_cell |nu_hat - push_forward| / se
  double aggregate_limit = 4.0;
  std::vector<std::string> warnings;
};

/// Checks that, given the partition, block colors are independent fair coins,
/// and that the empirical sign law equals the push-forward of the empirical
/// partition law at p = 1/2.
inline ColorPropertyReport verify_color_property(const std::vector<EmbeddingSample>& samples,
                                                 double significance = 1e-3, double z_limit = 4.0,
                                                 std::size_t min_samples = 10000) {
  ColorPropertyReport rep;
  rep.significance = significance;
  rep.aggregate_limit = z_limit;
  detail::require(samples.size() >= min_samples,
                  "verify_color_property: need at least " + std::to_string(min_samples) + " samples");
  const int n = samples.front().partition.n();
  const auto& parts = partitions_of(n);
  std::vector<std::vector<double>> block_counts(parts.size());
  std::vector<double> pcount(parts.size(), 0.0), scount(std::size_t{1} << n, 0.0);
  for (const auto& s : samples) {
    detail::require(s.partition.n() == n && static_cast<int>(s.signs.size()) == n,
                    "verify_color_property: mixed sample sizes");
    const auto j = partition_index(s.partition);
    const int k = s.partition.block_count();
    std::uint32_t colors = 0, seen = 0;
    for (int i = 0; i < n; ++i) {
      const int b = s.partition.label(i);
      const bool plus = s.signs[i] > 0;
      if (!((seen >> b) & 1u)) {
        seen |= 1u << b;
        if (plus) colors |= 1u << b;
      } else if (((colors >> b) & 1u) != static_cast<std::uint32_t>(plus)) {
        rep.signs_constant_on_blocks = false;
      }
    }
    if (block_counts[j].empty()) block_counts[j].assign(std::size_t{1} << k, 0.0);
    block_counts[j][colors] += 1.0;
    pcount[j] += 1.0;
    scount[s.pattern()] += 1.0;
  }

  std::size_t tested = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (pcount[j] == 0) continue;
    ColorPropertyBin bin;
    bin.partition = parts[j].key();
    bin.count = static_cast<std::size_t>(pcount[j]);
    const std::size_t cells = block_counts[j].size();
    if (pcount[j] < 5.0 * static_cast<double>(cells)) {
      rep.warnings.push_back("bin " + bin.partition + " excluded: " + std::to_string(bin.count) + " samples");
    } else if (cells > 1) {
      const auto r = stats::chi_square_gof(block_counts[j], std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
      bin.chi2 = r.statistic;
      bin.p_value = r.p_value;
      bin.tested = true;
      ++tested;
    }
    rep.bins.push_back(bin);
  }
  for (const auto& b : rep.bins)
    if (b.tested && b.p_value < significance / static_cast<double>(tested)) rep.passed = false;

  const double m = static_cast<double>(samples.size());
  std::vector<double> w(parts.size());
  for (std::size_t j = 0; j < parts.size(); ++j) w[j] = pcount[j] / m;
  const auto pf = apply_color_map(PartitionDistribution(n, w), 0.5);
  for (std::size_t r = 0; r < scount.size(); ++r) {
    const double v = scount[r] / m;
    const double se = std::max(std::sqrt(v * (1 - v) / m), 1.0 / m);
    rep.aggregate_max_z = std::max(rep.aggregate_max_z, std::abs(v - pf[r]) / se);
  }
  rep.passed = rep.passed && rep.signs_constant_on_blocks && rep.aggregate_max_z <= z_limit;
  return rep;
}

}  // namespace dcrep
