#pragma once

// Symmetric alpha-stable vectors X = L S with S iid S_alpha(1,0,0).
//
// Scale convention: S_alpha(sigma,0,0) has characteristic function
// exp(-sigma^alpha |t|^alpha), so alpha = 2 with sigma = 1/sqrt(2) is N(0,1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcrep/error.hpp"
#include "dcrep/partitions.hpp"
#include "dcrep/rng.hpp"

namespace dcrep {

/// One S_alpha(1,0,0) draw (Chambers-Mallows-Stuck).
inline double sym_stable(double alpha, Rng& rng) {
  const double pi = std::numbers::pi;
  const double v = pi * (rng.uniform() - 0.5);
  if (alpha == 1.0) return std::tan(v);
  const double w = rng.exponential();
  return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
         std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

/// One S_alpha(1,1,0) draw, alpha in (0,1); strictly positive.
inline double pos_stable(double alpha, Rng& rng) {
  const double pi = std::numbers::pi;
  const double v = pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double b = pi / 2;
  const double s = std::pow(std::cos(pi * alpha / 2), -1.0 / alpha);
  const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
  return std::max(x, std::numeric_limits<double>::min());
}

inline std::vector<double> sample_sym_stable(double alpha, double sigma, std::size_t m, std::uint64_t seed) {
  detail::require(alpha > 0.0 && alpha <= 2.0, "sample_sym_stable: alpha must be in (0, 2]");
  detail::require(sigma > 0.0, "sample_sym_stable: sigma must be positive");
  Rng rng(seed);
  std::vector<double> out(m);
  for (auto& x : out) x = sigma * sym_stable(alpha, rng);
  return out;
}

inline std::vector<double> sample_pos_stable(double alpha_half, double scale, std::size_t m, std::uint64_t seed) {
  detail::require(alpha_half > 0.0 && alpha_half < 1.0, "sample_pos_stable: alpha must be in (0, 1)");
  detail::require(scale > 0.0, "sample_pos_stable: scale must be positive");
  Rng rng(seed);
  std::vector<double> out(m);
  for (auto& x : out) x = scale * pos_stable(alpha_half, rng);
  return out;
}

/// Scale of the subordinator S with S^{1/2} N(0,1) ~ S_alpha(1,0,0).
inline double subordinator_scale(double alpha) {
  return 2.0 * std::pow(std::cos(std::numbers::pi * alpha / 4), 2.0 / alpha);
}

// ---------------------------------------------------------------------------

struct SpectralAtom {
  Eigen::VectorXd x;  // unit vector
  double w = 0.0;
};

class SpectralMeasure {
 public:
  SpectralMeasure() = default;

  /// Atoms are given with their mirrors; duplicates are merged.
  SpectralMeasure(double alpha, int d, const std::vector<SpectralAtom>& atoms) : alpha_(alpha), d_(d) {
    detail::require(alpha > 0.0 && alpha < 2.0, "SpectralMeasure: alpha must be in (0, 2)");
    for (const auto& a : atoms) add(a.x, a.w);
    detail::require(!atoms_.empty(), "SpectralMeasure: no atoms");
    for (const auto& a : atoms_) {
      bool mirrored = false;
      for (const auto& b : atoms_)
        mirrored = mirrored || ((a.x + b.x).norm() <= 1e-10 && std::abs(a.w - b.w) <= 1e-12 * std::max(1.0, a.w));
      if (!mirrored) throw DomainError("SpectralMeasure: measure is not symmetric");
    }
  }

  /// Atom list from the positive representatives (mirrors implied).
  static SpectralMeasure from_representatives(double alpha, int d, const std::vector<SpectralAtom>& reps) {
    std::vector<SpectralAtom> all;
    for (const auto& a : reps) {
      all.push_back(a);
      all.push_back({-a.x, a.w});
    }
    return SpectralMeasure(alpha, d, all);
  }

  double alpha() const { return alpha_; }
  int d() const { return d_; }
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }

  double total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.w;
    return s;
  }

  SpectralMeasure scaled(double t) const {
    detail::require(t > 0.0, "SpectralMeasure::scaled: t must be positive");
    auto copy = *this;
    for (auto& a : copy.atoms_) a.w *= t;
    return copy;
  }

  /// Representatives: the first atom of every mirror pair.
  std::vector<SpectralAtom> representatives() const {
    std::vector<SpectralAtom> reps;
    for (const auto& a : atoms_) {
      bool seen = false;
      for (const auto& r : reps) seen = seen || (a.x + r.x).norm() <= 1e-10;
      if (!seen) reps.push_back(a);
    }
    return reps;
  }

  /// The scaled atom (2 w)^{1/alpha} x used by the tail limit formulas.
  Eigen::VectorXd scaled_atom(const SpectralAtom& a) const { return std::pow(2.0 * a.w, 1.0 / alpha_) * a.x; }

 private:
  void add(const Eigen::VectorXd& x, double w) {
    detail::require(static_cast<int>(x.size()) == d_, "SpectralMeasure: atom has wrong dimension");
    detail::require(w > 0.0 && std::isfinite(w), "SpectralMeasure: atom weights must be positive");
    detail::require(std::abs(x.norm() - 1.0) <= 1e-12, "SpectralMeasure: atoms must be unit vectors");
    for (auto& a : atoms_) {
      if ((a.x - x).norm() <= 1e-10) {
        a.w += w;
        return;
      }
    }
    atoms_.push_back({x, w});
  }

  double alpha_ = 1.0;
  int d_ = 0;
  std::vector<SpectralAtom> atoms_;
};

// ---------------------------------------------------------------------------

class StableLinearModel {
 public:
  StableLinearModel() = default;

  StableLinearModel(double alpha, Eigen::MatrixXd loadings) : alpha_(alpha), L_(std::move(loadings)) {
    detail::require(alpha > 0.0 && alpha <= 2.0, "StableLinearModel: alpha must be in (0, 2]");
    detail::require(L_.rows() >= 1 && L_.cols() >= 1, "StableLinearModel: empty loading matrix");
    for (Eigen::Index i = 0; i < L_.rows(); ++i)
      for (Eigen::Index j = 0; j < i; ++j) {
        // Equal rows give identical coordinates.
        if ((L_.row(i) - L_.row(j)).cwiseAbs().maxCoeff() <= 1e-14)
          throw DomainError("StableLinearModel: rows " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                            " are identical");
      }
  }

  static StableLinearModel independent(int n, double alpha) {
    return StableLinearModel(alpha, Eigen::MatrixXd::Identity(n, n));
  }

  /// X_1 = a S_1 + c S_2, X_2 = -a S_1 + c S_2 with c = (1 - a^alpha)^{1/alpha}.
  static StableLinearModel corr2d(double a, double alpha) {
    const double c = std::pow(1.0 - std::pow(a, alpha), 1.0 / alpha);
    Eigen::MatrixXd L(2, 2);
    L << a, c, -a, c;
    return StableLinearModel(alpha, L);
  }

  /// X_i = a S_0 + c S_i, i = 1..n.
  static StableLinearModel common_factor(int n, double a, double alpha) {
    const double c = std::pow(1.0 - std::pow(a, alpha), 1.0 / alpha);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n + 1);
    for (int i = 0; i < n; ++i) {
      L(i, 0) = a;
      L(i, i + 1) = c;
    }
    return StableLinearModel(alpha, L);
  }

  /// X_1 = S_1, X_i = a X_{i-1} + c S_i.
  static StableLinearModel markov_chain(int n, double a, double alpha) {
    const double c = std::pow(1.0 - std::pow(a, alpha), 1.0 / alpha);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    L(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
      L.row(i) = a * L.row(i - 1);
      L(i, i) = c;
    }
    return StableLinearModel(alpha, L);
  }

  /// The three-coordinate, seven-factor example with parameters (a, b).
  static StableLinearModel alt_example(double a, double b, double alpha) {
    const double r = 1.0 - 2 * std::pow(a, alpha) - 2 * std::pow(b, alpha);
    detail::require(r >= 0.0, "alt_example: need 2a^alpha + 2b^alpha <= 1");
    const double c = std::pow(r, 1.0 / alpha);
    Eigen::MatrixXd L(3, 7);
    L << a, b, 0, b, a, 0, c,  //
        0, a, b, 0, b, a, c,   //
        b, 0, a, a, 0, b, c;
    return StableLinearModel(alpha, L);
  }

  double alpha() const { return alpha_; }
  int d() const { return static_cast<int>(L_.rows()); }
  int m() const { return static_cast<int>(L_.cols()); }
  const Eigen::MatrixXd& loadings() const { return L_; }

  /// Scale^alpha of coordinate i.
  double row_mass(int i) const { return L_.row(i).cwiseAbs().array().pow(alpha_).sum(); }

  bool is_standardized(int i, double tol = 1e-9) const { return std::abs(row_mass(i) - 1.0) <= tol; }

  bool all_standardized(double tol = 1e-9) const {
    for (int i = 0; i < d(); ++i)
      if (!is_standardized(i, tol)) return false;
    return true;
  }

 private:
  double alpha_ = 1.0;
  Eigen::MatrixXd L_;
};

inline SpectralMeasure spectral_from_matrix(const StableLinearModel& model) {
  detail::require(model.alpha() < 2.0, "spectral_from_matrix: alpha must be < 2");
  std::vector<SpectralAtom> atoms;
  const auto& L = model.loadings();
  for (Eigen::Index j = 0; j < L.cols(); ++j) {
    const double r = L.col(j).norm();
    if (r == 0.0) throw DomainError("spectral_from_matrix: column " + std::to_string(j + 1) + " is zero");
    const Eigen::VectorXd u = L.col(j) / r;
    const double w = std::pow(r, model.alpha()) / 2;
    atoms.push_back({u, w});
    atoms.push_back({-u, w});
  }
  return SpectralMeasure(model.alpha(), model.d(), atoms);
}

/// Monte Carlo law of I(X > h).
inline BinaryLaw stable_threshold_law_mc(const StableLinearModel& model, double h, std::size_t m,
                                         std::uint64_t seed) {
  detail::require(m >= 1, "stable_threshold_law_mc: m must be >= 1");
  if (h != 0.0 && !model.all_standardized())
    throw DomainError("stable_threshold_law_mc: unequal marginals at h != 0; no color representation is possible");
  const int d = model.d();
  if (d > 20) throw SizeError("stable_threshold_law_mc: d must be <= 20");
  const auto& L = model.loadings();
  Rng rng(seed);
  std::vector<double> counts(std::size_t{1} << d, 0.0);
  Eigen::VectorXd s(model.m()), x(d);
  const double sigma = model.alpha() == 2.0 ? std::numbers::sqrt2 / 2 : 1.0;
  for (std::size_t t = 0; t < m; ++t) {
    for (int k = 0; k < model.m(); ++k) s(k) = sigma * sym_stable(model.alpha(), rng);
    x.noalias() = L * s;
    std::uint32_t rho = 0;
    for (int i = 0; i < d; ++i)
      if (x(i) > h) rho |= 1u << i;
    counts[rho] += 1.0;
  }
  return empirical_law(d, counts);
}

// ---------------------------------------------------------------------------

enum class Corr2dVerdict { AlwaysColor, NotColorAtZero };

inline Corr2dVerdict corr2d_criterion(double a, double alpha) {
  detail::require(a > 0.0 && a < 1.0, "corr2d_criterion: a must be in (0, 1)");
  detail::require(alpha > 0.0 && alpha < 2.0, "corr2d_criterion: alpha must be in (0, 2)");
  return a <= std::pow(2.0, -1.0 / alpha) ? Corr2dVerdict::AlwaysColor : Corr2dVerdict::NotColorAtZero;
}

struct McEstimate {
  double value = 0.0;
  double se = 0.0;
};

/// P(c S_2 >= a|S_1| + h) - P(S_1 >= h)^2 by Monte Carlo; its sign is the sign
/// of Cov(X_1^h, X_2^h) in the two-coordinate model.
inline McEstimate corr2d_inequality_mc(double a, double alpha, double h, std::size_t m, std::uint64_t seed) {
  detail::require(a > 0.0 && a < 1.0 && alpha > 0.0 && alpha < 2.0 && m >= 2, "corr2d_inequality_mc: bad arguments");
  const double c = std::pow(1.0 - std::pow(a, alpha), 1.0 / alpha);
  Rng rng(seed);
  double n_lhs = 0, n_tail = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const double s1 = sym_stable(alpha, rng);
    const double s2 = sym_stable(alpha, rng);
    const double s3 = sym_stable(alpha, rng);
    n_lhs += (c * s2 >= a * std::abs(s1) + h);
    n_tail += (s3 >= h);
  }
  const double md = static_cast<double>(m);
  const double p1 = n_lhs / md, p2 = n_tail / md;
  const double var = p1 * (1 - p1) / md + 4 * p2 * p2 * p2 * (1 - p2) / md;
  return {p1 - p2 * p2, std::sqrt(var)};
}

struct StablegoodResult {
  double integral = 0.0;
  bool below_one = false;
  bool support_in_every_orthant = false;
};

inline StablegoodResult stablegood_integral(const SpectralMeasure& mu) {
  const int d = mu.d();
  detail::require(d >= 2, "stablegood_integral: dimension must be >= 2");
  StablegoodResult out;
  for (const auto& a : mu.atoms()) {
    std::vector<double> c(a.x.data(), a.x.data() + d);
    std::nth_element(c.begin(), c.begin() + 1, c.end(), std::greater<>());
    out.integral += 2.0 * a.w * std::pow(std::max(c[1], 0.0), mu.alpha());
  }
  out.below_one = out.integral < 1.0;
  out.support_in_every_orthant = true;
  for (std::uint32_t orth = 0; orth < (1u << d) && out.support_in_every_orthant; ++orth) {
    bool found = false;
    for (const auto& a : mu.atoms()) {
      bool inside = true;
      for (int i = 0; i < d && inside; ++i) inside = ((orth >> i) & 1u) ? a.x(i) > 0 : a.x(i) < 0;
      found = found || inside;
    }
    out.support_in_every_orthant = found;
  }
  return out;
}

}  // namespace dcrep
