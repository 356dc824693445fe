#pragma once

// Threshold laws of mean-zero Gaussian vectors.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcrep/error.hpp"
#include "dcrep/numerics.hpp"
#include "dcrep/partitions.hpp"
#include "dcrep/rng.hpp"
#include "dcrep/special.hpp"

namespace dcrep {

class CovarianceSpec {
 public:
  CovarianceSpec() = default;

  explicit CovarianceSpec(Eigen::MatrixXd A) : A_(std::move(A)) {
    const auto n = A_.rows();
    if (n < 1 || A_.cols() != n) throw SizeError("CovarianceSpec: matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(A_(i, i) > 0.0)) throw DomainError("CovarianceSpec: diagonal must be strictly positive");
      for (Eigen::Index j = 0; j < i; ++j) {
        if (!std::isfinite(A_(i, j)) || std::abs(A_(i, j) - A_(j, i)) > 1e-12)
          throw DomainError("CovarianceSpec: matrix is not symmetric");
        A_(j, i) = A_(i, j);
      }
    }
    is_standard_ = true;
    for (Eigen::Index i = 0; i < n; ++i) is_standard_ = is_standard_ && std::abs(A_(i, i) - 1.0) <= 1e-12;
    if (is_standard_) {
      for (Eigen::Index i = 0; i < n; ++i) {
        A_(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
          if (std::abs(A_(i, j)) > 1.0 + 1e-12) throw DomainError("CovarianceSpec: correlation outside [-1, 1]");
          if (A_(i, j) >= 1.0 - 1e-12)
            throw DomainError("CovarianceSpec: a_ij = 1 makes two coordinates identical");
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A_);
    eigenvalues_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    const double cutoff = 1e-10 * eigenvalues_.maxCoeff();
    rank_ = 0;
    for (Eigen::Index i = 0; i < n; ++i) rank_ += eigenvalues_(i) > cutoff ? 1 : 0;
    is_pd_ = rank_ == n;
    if (is_pd_) inverse_ = A_.llt().solve(Eigen::MatrixXd::Identity(n, n));
  }

  // --- factories ----------------------------------------------------------

  /// Standard 3x3 from (a12, a13, a23).
  static CovarianceSpec from_correlations3(double a12, double a13, double a23) {
    Eigen::Matrix3d A;
    A << 1, a12, a13, a12, 1, a23, a13, a23, 1;
    return CovarianceSpec(A);
  }

  static CovarianceSpec fully_symmetric(int n, double a) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Constant(n, n, a);
    A.diagonal().setOnes();
    return CovarianceSpec(A);
  }

  /// a_ij = a^|i-j|.
  static CovarianceSpec markov_chain(int n, double a) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = std::pow(a, std::abs(i - j));
    return CovarianceSpec(A);
  }

  /// Four points on a great circle of S^2 forming a square of side angle
  /// theta: X = (cos t)Y_0 + (sin t)(Y_1 or Y_2 or -Y_1 or -Y_2).
  static CovarianceSpec sphere_square(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double adj = c * c, opp = c * c - s * s;
    Eigen::Matrix4d A;
    A << 1, adj, opp, adj,  //
        adj, 1, adj, opp,   //
        opp, adj, 1, adj,   //
        adj, opp, adj, 1;
    return CovarianceSpec(A);
  }

  /// X_1..X_{n-1} fully symmetric with correlation a, X_n their normalized sum.
  static CovarianceSpec symmetric_plus_mean(int n, double a) {
    detail::require(n >= 2, "symmetric_plus_mean: n must be >= 2");
    const int k = n - 1;
    const double norm = std::sqrt(a * k * k + (1 - a) * k);
    Eigen::MatrixXd A = Eigen::MatrixXd::Constant(n, n, a);
    A.diagonal().setOnes();
    for (int i = 0; i < k; ++i) A(i, k) = A(k, i) = (1 + (k - 1) * a) / norm;
    return CovarianceSpec(A);
  }

  /// (1, a, a; a, 1, b; a, b, 1).
  static CovarianceSpec ab_matrix(double a, double b) { return from_correlations3(a, a, b); }

  // --- accessors ----------------------------------------------------------

  int n() const { return static_cast<int>(A_.rows()); }
  const Eigen::MatrixXd& matrix() const { return A_; }
  double operator()(int i, int j) const { return A_(i, j); }
  bool is_pd() const { return is_pd_; }
  bool is_standard() const { return is_standard_; }
  int rank() const { return rank_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  double det() const { return eigenvalues_.prod(); }

  const Eigen::MatrixXd& inverse() const {
    if (!is_pd_) throw DomainError("CovarianceSpec: matrix is singular");
    return inverse_;
  }

  double angle(int i, int j) const {
    detail::require(is_standard_, "CovarianceSpec: angles need unit diagonal");
    return std::acos(std::clamp(A_(i, j), -1.0, 1.0));
  }

  /// Factor L with L L^T = A using the eigenpairs above the rank cutoff.
  Eigen::MatrixXd factor() const {
    const int n = this->n();
    Eigen::MatrixXd L(n, rank_);
    int c = 0;
    for (int k = n - rank_; k < n; ++k, ++c) L.col(c) = eigenvectors_.col(k) * std::sqrt(eigenvalues_(k));
    return L;
  }

  /// Unit null vectors (eigenvalues at or below the rank cutoff).
  Eigen::MatrixXd null_space() const {
    return eigenvectors_.leftCols(n() - rank_);
  }

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd inverse_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  int rank_ = 0;
  bool is_pd_ = false;
  bool is_standard_ = false;
};

struct ThresholdQuery {
  double h = 0.0;
  double p = 0.5;

  static ThresholdQuery at(double h) {
    ThresholdQuery q{h, special::normal_sf(h)};
    if (!(q.p > 0.0 && q.p < 1.0)) throw DomainError("ThresholdQuery: marginal underflows for this h");
    return q;
  }
};

// ---------------------------------------------------------------------------

/// P(X_1 > 0, X_2 > 0) for a standard pair with correlation a.
inline double sheppard_pair(double a) {
  detail::require(std::abs(a) < 1.0, "sheppard_pair: |a| must be < 1");
  return 0.5 - std::acos(a) / (2 * std::numbers::pi);
}

/// Weight of the joint block in the pair's zero-threshold color representation.
inline double pair_cluster_weight(double a) {
  detail::require(std::abs(a) < 1.0, "pair_cluster_weight: |a| must be < 1");
  return 1.0 - 2.0 * std::acos(a) / std::numbers::pi;
}

/// Exact law of (I(X_i > 0))_{i=1..3} for a standard 3-vector.
inline BinaryLaw zero_threshold_law_3(const CovarianceSpec& cov) {
  if (cov.n() != 3) throw SizeError("zero_threshold_law_3: n must be 3");
  detail::require(cov.is_standard(), "zero_threshold_law_3: covariance must have unit diagonal");
  detail::require(cov.rank() >= 2, "zero_threshold_law_3: rank must be at least 2");
  const double pi = std::numbers::pi;
  const double t12 = cov.angle(0, 1), t13 = cov.angle(0, 2), t23 = cov.angle(1, 2);
  const double p111 = 0.5 - (t12 + t13 + t23) / (4 * pi);
  // P(X_i > 0, X_j > 0) = p111 + P(X_i > 0, X_j > 0, X_k < 0).
  const double p110 = 0.5 - t12 / (2 * pi) - p111;
  const double p101 = 0.5 - t13 / (2 * pi) - p111;
  const double p011 = 0.5 - t23 / (2 * pi) - p111;
  std::vector<double> v(8);
  v[0b111] = v[0b000] = p111;
  v[0b011] = v[0b100] = p110;  // X1, X2 up; X3 down
  v[0b101] = v[0b010] = p101;
  v[0b110] = v[0b001] = p011;
  for (double& x : v) x = std::max(x, 0.0);
  return BinaryLaw(3, std::move(v));
}

/// P(X_1 > h, X_2 > h) for a standard pair with correlation a.
inline double bivariate_threshold_exact(double a, double h) {
  detail::require(std::abs(a) < 1.0, "bivariate_threshold_exact: |a| must be < 1");
  const double s = std::sqrt(1.0 - a * a);
  auto f = [&](double x) { return special::normal_pdf(x) * special::normal_sf((h - a * x) / s); };
  // Split at the bulk of the integrand so the infinite map stays well resolved.
  const double mid = std::max(h, 0.0) + 8.0;
  const double v1 = numerics::integrate(f, h, mid, 1e-13, 1e-14).value;
  const double v2 = numerics::integrate(f, mid, std::numeric_limits<double>::infinity(), 1e-13, 1e-14).value;
  return v1 + v2;
}

/// Monte Carlo law of I(X > h) with X = L Z.
inline BinaryLaw threshold_law_mc(const CovarianceSpec& cov, double h, std::size_t m, std::uint64_t seed) {
  detail::require(m >= 1, "threshold_law_mc: m must be >= 1");
  const int n = cov.n();
  if (n > 20) throw SizeError("threshold_law_mc: n must be <= 20");
  const Eigen::MatrixXd L = cov.factor();
  const int r = static_cast<int>(L.cols());
  Rng rng(seed);
  std::vector<double> counts(std::size_t{1} << n, 0.0);
  Eigen::VectorXd z(r), x(n);
  for (std::size_t t = 0; t < m; ++t) {
    for (int k = 0; k < r; ++k) z(k) = rng.normal();
    x.noalias() = L * z;
    std::uint32_t rho = 0;
    for (int i = 0; i < n; ++i)
      if (x(i) > h) rho |= 1u << i;
    counts[rho] += 1.0;
  }
  return empirical_law(n, counts);
}

// ---------------------------------------------------------------------------

enum class TailStatus { Value, UseHalfRatio, PatternMismatch };

struct TailAsymptote {
  TailStatus status = TailStatus::Value;
  double value = 0.0;      // leading-order nu_rho(h)
  double exponent = 0.0;   // 1^T A^{-1} 1 / 2, coefficient of h^2 in -log nu
  double prefactor = 0.0;  // value = prefactor * h^{-n} * exp(-exponent h^2)
  Eigen::VectorXd alpha;   // 1^T A^{-1}
  std::uint32_t pattern = 0;
};

/// Leading-order tail of nu_rho(h) where rho is the sign pattern of 1^T A^{-1}.
inline TailAsymptote tail_asymptote(const CovarianceSpec& cov, std::uint32_t rho, double h) {
  detail::require(cov.is_pd(), "tail_asymptote: covariance must be positive definite");
  detail::require(cov.is_standard(), "tail_asymptote: covariance must have unit diagonal");
  detail::require(h > 0, "tail_asymptote: h must be positive");
  const int n = cov.n();
  TailAsymptote out;
  out.alpha = cov.inverse().colwise().sum().transpose();
  std::uint32_t sign_pattern = 0;
  bool zero = false;
  for (int i = 0; i < n; ++i) {
    if (std::abs(out.alpha(i)) <= 1e-10) zero = true;
    if (out.alpha(i) > 0) sign_pattern |= 1u << i;
  }
  out.pattern = sign_pattern;
  out.exponent = 0.5 * out.alpha.sum();
  if (zero) {
    out.status = TailStatus::UseHalfRatio;
    return out;
  }
  if (rho != sign_pattern) {
    out.status = TailStatus::PatternMismatch;
    return out;
  }
  double prod = 1.0;
  for (int i = 0; i < n; ++i) prod *= std::abs(out.alpha(i));
  out.prefactor = 1.0 / (std::pow(2 * std::numbers::pi, 0.5 * n) * std::sqrt(cov.det()) * prod);
  out.value = out.prefactor * std::pow(h, -n) * std::exp(-out.exponent * h * h);
  return out;
}

/// Limit of nu_{1^n}(h) / nu_{.1^{n-1}}(h) when the first Savage coordinate vanishes.
inline constexpr double kHalfRatioLimit = 0.5;

}  // namespace dcrep
