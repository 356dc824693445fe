#pragma once

// Set partitions of [n], the color map onto {0,1}^n laws, and color-process
// simulation.
//
// Conventions
//   * Indices are 0-based internally and 1-based in keys ("12|3").
//   * A partition is stored as a restricted growth string: label[i] is the
//     block of element i, blocks numbered in order of their least element.
//     Enumeration order is lexicographic in that string, which for n=3 gives
//     123, 12|3, 13|2, 1|23, 1|2|3.
//   * A binary pattern rho is an integer with bit i = coordinate i. Its key
//     prints coordinate 1 first, so pattern 0b001 is "100".

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "dcrep/error.hpp"
#include "dcrep/rng.hpp"

namespace dcrep {

inline constexpr int kMaxPartitionN = 12;
inline constexpr double kExactTol = 1e-12;

class Partition {
 public:
  Partition() = default;

  /// From a label vector (any labelling; it is normalized).
  explicit Partition(const std::vector<int>& labels) : n_(static_cast<int>(labels.size())) {
    if (n_ < 1 || n_ > kMaxPartitionN) throw SizeError("Partition: n must be in [1, 12]");
    std::map<int, int> relabel;
    for (int i = 0; i < n_; ++i) {
      auto [it, inserted] = relabel.emplace(labels[i], static_cast<int>(relabel.size()));
      labels_[i] = static_cast<std::uint8_t>(it->second);
    }
    blocks_ = static_cast<int>(relabel.size());
  }

  /// From blocks of 0-based indices.
  static Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks) {
    std::vector<int> labels(n, -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      detail::require(!blocks[b].empty(), "Partition: empty block");
      for (int i : blocks[b]) {
        detail::require(i >= 0 && i < n, "Partition: index out of range");
        detail::require(labels[i] < 0, "Partition: blocks overlap");
        labels[i] = static_cast<int>(b);
      }
    }
    for (int l : labels) detail::require(l >= 0, "Partition: blocks do not cover [n]");
    return Partition(labels);
  }

  /// Parses keys as written by key(): "12|3", or "1,10|2,...|9" when n > 9.
  static Partition parse(const std::string& key) {
    // Single digits ("12|3") unless commas separate multi-digit labels ("1,10|2").
    const bool multi = key.find(',') != std::string::npos;
    std::vector<std::vector<int>> blocks(1);
    int n = 0, cur = 0;
    bool in_num = false;
    auto flush = [&] {
      if (!in_num) return;
      if (cur < 1) throw DomainError("Partition::parse: labels start at 1 in '" + key + "'");
      blocks.back().push_back(cur - 1);
      ++n;
      cur = 0;
      in_num = false;
    };
    for (char c : key) {
      if (c >= '0' && c <= '9') {
        cur = cur * 10 + (c - '0');
        in_num = true;
        if (!multi) flush();
      } else if (c == '|' || c == ',' || c == ' ') {
        flush();
        if (c == '|') blocks.emplace_back();
      } else {
        throw DomainError("Partition::parse: bad character in '" + key + "'");
      }
    }
    flush();
    return from_blocks(n, blocks);
  }

  int n() const { return n_; }
  int block_count() const { return blocks_; }
  int label(int i) const { return labels_[i]; }

  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(blocks_);
    for (int i = 0; i < n_; ++i) out[labels_[i]].push_back(i);
    return out;
  }

  bool same_block(int i, int j) const { return labels_[i] == labels_[j]; }

  /// Canonical key: blocks ordered by least element, 1-based digits.
  std::string key() const {
    std::string s;
    for (const auto& b : blocks()) {
      if (!s.empty()) s += '|';
      for (int i : b) {
        if (n_ > 9) {
          if (s.size() && s.back() != '|') s += ',';
          s += std::to_string(i + 1);
        } else {
          s += static_cast<char>('1' + i);
        }
      }
    }
    return s;
  }

  /// 4 bits per label; unique per partition of a fixed n.
  std::uint64_t code() const {
    std::uint64_t c = 0;
    for (int i = 0; i < n_; ++i) c |= static_cast<std::uint64_t>(labels_[i]) << (4 * i);
    return c;
  }

  /// Induced partition on the sorted index subset S.
  Partition restrict_to(const std::vector<int>& S) const {
    std::vector<int> labels;
    labels.reserve(S.size());
    for (int i : S) labels.push_back(labels_[i]);
    return Partition(labels);
  }

  /// Pattern (bit mask) that colors block b with bit b of `colors`.
  std::uint32_t pattern(std::uint32_t colors) const {
    std::uint32_t rho = 0;
    for (int i = 0; i < n_; ++i)
      if ((colors >> labels_[i]) & 1u) rho |= 1u << i;
    return rho;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_ == b.n_ && a.code() == b.code();
  }
  friend bool operator<(const Partition& a, const Partition& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return std::lexicographical_compare(a.labels_.begin(), a.labels_.begin() + a.n_, b.labels_.begin(),
                                        b.labels_.begin() + b.n_);
  }

 private:
  int n_ = 0;
  int blocks_ = 0;
  std::array<std::uint8_t, kMaxPartitionN> labels_{};
};

inline std::uint64_t bell_number(int n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

/// All partitions of [n] in restricted-growth-string order.
inline std::vector<Partition> enumerate_partitions(int n) {
  if (n < 1 || n > kMaxPartitionN) throw SizeError("enumerate_partitions: n must be in [1, 12]");
  std::vector<Partition> out;
  out.reserve(bell_number(n));
  std::vector<int> a(n, 0), mx(n, 0);  // mx[i] = max(a[0..i-1])
  while (true) {
    out.emplace_back(a);
    int i = n - 1;
    while (i > 0 && a[i] > mx[i]) --i;
    if (i == 0) break;
    ++a[i];
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      mx[j] = std::max(mx[j - 1], a[j - 1]);
    }
  }
  return out;
}

/// Cached enumeration shared by the distribution types.
inline const std::vector<Partition>& partitions_of(int n) {
  static std::array<std::vector<Partition>, kMaxPartitionN + 1> cache;
  static std::array<std::once_flag, kMaxPartitionN + 1> once;
  if (n < 1 || n > kMaxPartitionN) throw SizeError("partitions_of: n must be in [1, 12]");
  std::call_once(once[n], [n] { cache[n] = enumerate_partitions(n); });
  return cache[n];
}

inline std::size_t partition_index(const Partition& s) {
  static std::array<std::unordered_map<std::uint64_t, std::size_t>, kMaxPartitionN + 1> index;
  static std::array<std::once_flag, kMaxPartitionN + 1> once;
  const int n = s.n();
  std::call_once(once[n], [n] {
    const auto& all = partitions_of(n);
    for (std::size_t k = 0; k < all.size(); ++k) index[n].emplace(all[k].code(), k);
  });
  return index[n].at(s.code());
}

// ---------------------------------------------------------------------------
// Binary patterns

inline std::string pattern_key(std::uint32_t rho, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if ((rho >> i) & 1u) s[i] = '1';
  return s;
}

inline std::uint32_t parse_pattern(const std::string& key) {
  std::uint32_t rho = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (key[i] == '1') {
      rho |= 1u << i;
    } else if (key[i] != '0') {
      throw DomainError("parse_pattern: bad key '" + key + "'");
    }
  }
  return rho;
}

inline int popcount(std::uint32_t x) { return std::popcount(x); }

// ---------------------------------------------------------------------------

class PartitionDistribution {
 public:
  PartitionDistribution() = default;

  /// Weights aligned with partitions_of(n).
  PartitionDistribution(int n, std::vector<double> weights, bool is_signed = false)
      : n_(n), weights_(std::move(weights)), signed_(is_signed) {
    if (weights_.size() != partitions_of(n).size())
      throw SizeError("PartitionDistribution: expected " + std::to_string(partitions_of(n).size()) + " weights");
    double total = 0.0;
    for (double w : weights_) {
      total += w;
      if (!signed_ && w < -kExactTol) throw DomainError("PartitionDistribution: negative weight in probability vector");
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("PartitionDistribution: weights do not sum to 1");
  }

  static PartitionDistribution point_mass(const Partition& s) {
    std::vector<double> w(partitions_of(s.n()).size(), 0.0);
    w[partition_index(s)] = 1.0;
    return PartitionDistribution(s.n(), std::move(w));
  }

  static PartitionDistribution from_map(int n, const std::map<std::string, double>& by_key, bool is_signed = false) {
    std::vector<double> w(partitions_of(n).size(), 0.0);
    for (const auto& [k, v] : by_key) {
      const Partition s = Partition::parse(k);
      detail::require(s.n() == n, "PartitionDistribution: key '" + k + "' has wrong size");
      w[partition_index(s)] += v;
    }
    return PartitionDistribution(n, std::move(w), is_signed);
  }

  static PartitionDistribution uniform(int n) {
    const auto m = partitions_of(n).size();
    return PartitionDistribution(n, std::vector<double>(m, 1.0 / static_cast<double>(m)));
  }

  /// Dirichlet(1,...,1) draw.
  static PartitionDistribution random(int n, Rng& rng) {
    std::vector<double> w(partitions_of(n).size());
    double total = 0.0;
    for (auto& v : w) total += (v = rng.exponential());
    for (auto& v : w) v /= total;
    return PartitionDistribution(n, std::move(w));
  }

  int n() const { return n_; }
  bool is_signed() const { return signed_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Partition>& support() const { return partitions_of(n_); }
  double weight(const Partition& s) const { return weights_[partition_index(s)]; }
  double weight(const std::string& key) const { return weight(Partition::parse(key)); }

  bool is_probability(double tol = kExactTol) const {
    return std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w >= -tol; });
  }

 private:
  int n_ = 0;
  std::vector<double> weights_;
  bool signed_ = false;
};

// ---------------------------------------------------------------------------

class BinaryLaw {
 public:
  BinaryLaw() = default;

  /// Probabilities indexed by pattern; marginal_p is the mean single-site marginal.
  BinaryLaw(int n, std::vector<double> probs, std::optional<std::vector<double>> se = std::nullopt)
      : n_(n), probs_(std::move(probs)), se_(std::move(se)) {
    if (n < 1 || n > 20) throw SizeError("BinaryLaw: n must be in [1, 20]");
    if (probs_.size() != (std::size_t{1} << n)) throw SizeError("BinaryLaw: expected 2^n probabilities");
    if (se_ && se_->size() != probs_.size()) throw SizeError("BinaryLaw: stderr size mismatch");
    double total = 0.0;
    for (double v : probs_) total += v;
    const double tol = se_ ? 1e-9 : kExactTol;
    if (std::abs(total - 1.0) > tol) throw DomainError("BinaryLaw: probabilities do not sum to 1");
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += marginal(i);
    p_ = s / n_;
  }

  static BinaryLaw product(int n, double p) {
    std::vector<double> v(std::size_t{1} << n);
    for (std::uint32_t r = 0; r < v.size(); ++r) {
      const int k = popcount(r);
      v[r] = std::pow(p, k) * std::pow(1.0 - p, n - k);
    }
    return BinaryLaw(n, std::move(v));
  }

  static BinaryLaw from_map(int n, const std::map<std::string, double>& by_key) {
    std::vector<double> v(std::size_t{1} << n, 0.0);
    for (const auto& [k, p] : by_key) {
      detail::require(static_cast<int>(k.size()) == n, "BinaryLaw: key '" + k + "' has wrong length");
      v[parse_pattern(k)] = p;
    }
    return BinaryLaw(n, std::move(v));
  }

  int n() const { return n_; }
  std::size_t size() const { return probs_.size(); }
  double marginal_p() const { return p_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::uint32_t rho) const { return probs_[rho]; }
  double prob(const std::string& key) const { return probs_[parse_pattern(key)]; }
  bool has_stderr() const { return se_.has_value(); }
  const std::vector<double>& stderr_vec() const { return *se_; }
  double stderr_at(std::uint32_t rho) const { return se_ ? (*se_)[rho] : 0.0; }

  /// P(X_i = 1).
  double marginal(int i) const {
    double s = 0.0;
    for (std::uint32_t r = 0; r < probs_.size(); ++r)
      if ((r >> i) & 1u) s += probs_[r];
    return s;
  }

  double max_marginal_deviation(double p) const {
    double d = 0.0;
    for (int i = 0; i < n_; ++i) d = std::max(d, std::abs(marginal(i) - p));
    return d;
  }

  /// Standard error of the marginal estimate, sqrt(p(1-p)/m) recovered from cell errors.
  double marginal_stderr() const {
    if (!se_) return 0.0;
    // For a multinomial cell, se^2 = nu(1-nu)/m; recover m from any informative cell.
    for (std::uint32_t r = 0; r < probs_.size(); ++r) {
      const double v = probs_[r];
      if (v > 0 && v < 1 && (*se_)[r] > 0) {
        const double m = v * (1 - v) / ((*se_)[r] * (*se_)[r]);
        return std::sqrt(p_ * (1 - p_) / m);
      }
    }
    return 0.0;
  }

  /// Law of the coordinates in the sorted subset S.
  BinaryLaw marginalize(const std::vector<int>& S) const {
    const int k = static_cast<int>(S.size());
    detail::require(k >= 1, "BinaryLaw::marginalize: empty subset");
    std::vector<double> v(std::size_t{1} << k, 0.0);
    std::optional<std::vector<double>> se;
    for (std::uint32_t r = 0; r < probs_.size(); ++r) {
      std::uint32_t t = 0;
      for (int j = 0; j < k; ++j)
        if ((r >> S[j]) & 1u) t |= 1u << j;
      v[t] += probs_[r];
    }
    if (se_) {
      const double m = sample_count();
      se = std::vector<double>(v.size());
      for (std::size_t t = 0; t < v.size(); ++t) (*se)[t] = std::sqrt(std::max(v[t] * (1 - v[t]), 0.0) / m);
    }
    return BinaryLaw(k, std::move(v), std::move(se));
  }

  /// nu_rho == nu_{1-rho}.
  double symmetry_defect() const {
    const std::uint32_t full = static_cast<std::uint32_t>(probs_.size() - 1);
    double d = 0.0;
    for (std::uint32_t r = 0; r < probs_.size(); ++r) d = std::max(d, std::abs(probs_[r] - probs_[full ^ r]));
    return d;
  }

  /// Sample count implied by the stderr vector (MC laws only).
  double sample_count() const {
    if (!se_) return 0.0;
    for (std::uint32_t r = 0; r < probs_.size(); ++r) {
      const double v = probs_[r];
      if (v > 0 && v < 1 && (*se_)[r] > 0) return std::round(v * (1 - v) / ((*se_)[r] * (*se_)[r]));
    }
    return 0.0;
  }

 private:
  int n_ = 0;
  std::vector<double> probs_;
  std::optional<std::vector<double>> se_;
  double p_ = 0.0;
};

/// Empirical law from pattern counts; stderr = sqrt(nu(1-nu)/m).
inline BinaryLaw empirical_law(int n, const std::vector<double>& counts) {
  double m = 0.0;
  for (double c : counts) m += c;
  detail::require(m > 0, "empirical_law: no samples");
  std::vector<double> v(counts.size()), se(counts.size());
  for (std::size_t r = 0; r < counts.size(); ++r) {
    v[r] = counts[r] / m;
    se[r] = std::sqrt(v[r] * (1 - v[r]) / m);
  }
  return BinaryLaw(n, std::move(v), std::move(se));
}

// ---------------------------------------------------------------------------
// Color map

/// Column of the color map for one partition: P(pattern | partition).
inline std::vector<double> color_column(const Partition& s, double p) {
  detail::require(p >= 0.0 && p <= 1.0, "color_column: p must be in [0, 1]");
  std::vector<double> col(std::size_t{1} << s.n(), 0.0);
  const int k = s.block_count();
  for (std::uint32_t c = 0; c < (1u << k); ++c) {
    const int ones = popcount(c);
    col[s.pattern(c)] += std::pow(p, ones) * std::pow(1.0 - p, k - ones);
  }
  return col;
}

/// Dense 2^n x Bell(n) color matrix (n <= 8).
inline Eigen::MatrixXd color_map(int n, double p) {
  if (n < 1 || n > 8) throw SizeError("color_map: dense form supports n <= 8");
  detail::require(p > 0.0 && p < 1.0, "color_map: p must be in (0, 1)");
  const auto& parts = partitions_of(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(std::size_t{1} << n, static_cast<Eigen::Index>(parts.size()));
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto col = color_column(parts[j], p);
    for (std::size_t r = 0; r < col.size(); ++r) A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = col[r];
  }
  return A;
}

/// Law of the color process; signed q gives the signed image.
inline std::vector<double> apply_color_map(const PartitionDistribution& q, double p) {
  const auto& parts = partitions_of(q.n());
  std::vector<double> nu(std::size_t{1} << q.n(), 0.0);
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const double w = q.weights()[j];
    if (w == 0.0) continue;
    const int k = parts[j].block_count();
    for (std::uint32_t c = 0; c < (1u << k); ++c) {
      const int ones = popcount(c);
      nu[parts[j].pattern(c)] += w * std::pow(p, ones) * std::pow(1.0 - p, k - ones);
    }
  }
  return nu;
}

inline BinaryLaw push_forward(const PartitionDistribution& q, double p) {
  detail::require(!q.is_signed() && q.is_probability(), "push_forward: q must be a probability distribution");
  detail::require(p >= 0.0 && p <= 1.0, "push_forward: p must be in [0, 1]");
  return BinaryLaw(q.n(), apply_color_map(q, p));
}

inline PartitionDistribution marginalize_partition(const PartitionDistribution& q, const std::vector<int>& S) {
  detail::require(!S.empty(), "marginalize_partition: empty subset");
  std::vector<int> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  detail::require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() && sorted.front() >= 0 &&
                      sorted.back() < q.n(),
                  "marginalize_partition: invalid subset");
  const int k = static_cast<int>(sorted.size());
  std::vector<double> w(partitions_of(k).size(), 0.0);
  const auto& parts = partitions_of(q.n());
  for (std::size_t j = 0; j < parts.size(); ++j) w[partition_index(parts[j].restrict_to(sorted))] += q.weights()[j];
  return PartitionDistribution(k, std::move(w), q.is_signed());
}

struct ColorSimulation {
  std::vector<std::uint32_t> samples;
  BinaryLaw law;
};

/// m independent draws of the color process with parameter (q, p).
inline ColorSimulation simulate_color_process(const PartitionDistribution& q, double p, std::size_t m,
                                              std::uint64_t seed) {
  detail::require(!q.is_signed() && q.is_probability(), "simulate_color_process: q must be a probability");
  detail::require(m >= 1, "simulate_color_process: m must be >= 1");
  detail::require(p >= 0.0 && p <= 1.0, "simulate_color_process: p must be in [0, 1]");
  const auto& parts = partitions_of(q.n());
  std::vector<double> cdf(parts.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < parts.size(); ++j) cdf[j] = (acc += std::max(q.weights()[j], 0.0));
  Rng rng(seed);
  ColorSimulation out;
  out.samples.reserve(m);
  std::vector<double> counts(std::size_t{1} << q.n(), 0.0);
  for (std::size_t t = 0; t < m; ++t) {
    const double u = rng.uniform() * acc;
    const auto j = std::min<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin(), parts.size() - 1);
    std::uint32_t colors = 0;
    for (int b = 0; b < parts[j].block_count(); ++b)
      if (rng.uniform() < p) colors |= 1u << b;
    const std::uint32_t rho = parts[j].pattern(colors);
    out.samples.push_back(rho);
    counts[rho] += 1.0;
  }
  out.law = empirical_law(q.n(), counts);
  return out;
}

}  // namespace dcrep
