#pragma once

// Matrix-level criteria: inverse Stieltjes, Savage vectors, DGFF structure,
// the three-point large-h classifier and obstructions for singular covariances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "dcrep/error.hpp"
#include "dcrep/gaussian_law.hpp"

namespace dcrep {

inline constexpr double kSavageZeroTol = 1e-10;
inline constexpr double kStieltjesTol = 1e-12;
inline constexpr double kBlockTol = 1e-12;

struct InverseStieltjesResult {
  bool ok = false;
  std::vector<std::tuple<int, int, double>> offending;  // (i, j, A^{-1}(i,j)) with i < j
};

inline InverseStieltjesResult is_inverse_stieltjes(const CovarianceSpec& cov) {
  if (!cov.is_pd()) throw DomainError("is_inverse_stieltjes: matrix is singular");
  const auto& B = cov.inverse();
  InverseStieltjesResult r;
  for (int i = 0; i < cov.n(); ++i)
    for (int j = i + 1; j < cov.n(); ++j)
      if (B(i, j) > kStieltjesTol) r.offending.emplace_back(i, j, B(i, j));
  r.ok = r.offending.empty();
  return r;
}

enum class Savage { Strict, Weak, Fails };

inline std::string to_string(Savage s) {
  switch (s) {
    case Savage::Strict: return "Strict";
    case Savage::Weak: return "Weak";
    case Savage::Fails: return "Fails";
  }
  return "?";
}

inline Savage savage_class(const Eigen::VectorXd& v) {
  const double mn = v.minCoeff();
  if (mn > kSavageZeroTol) return Savage::Strict;
  if (mn >= -kSavageZeroTol) return Savage::Weak;
  return Savage::Fails;
}

/// 1^T A^{-1}.
inline Eigen::VectorXd savage_vector(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  return A.llt().solve(Eigen::VectorXd::Ones(n));
}

struct DgffResult {
  bool ok = false;
  std::vector<std::string> failing;  // subset of "block", "inverse-stieltjes", "weak-savage", "block-savage"
  std::vector<std::vector<int>> blocks;
};

/// Connected components of the graph with edges a_ij > tol.
inline std::vector<std::vector<int>> positive_blocks(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  std::vector<int> comp(n, -1);
  std::vector<std::vector<int>> blocks;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    blocks.emplace_back();
    std::vector<int> stack{s};
    comp[s] = static_cast<int>(blocks.size()) - 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      blocks.back().push_back(i);
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && A(i, j) > kBlockTol) {
          comp[j] = comp[s];
          stack.push_back(j);
        }
    }
    std::sort(blocks.back().begin(), blocks.back().end());
  }
  return blocks;
}

inline DgffResult is_dgff(const CovarianceSpec& cov) {
  DgffResult r;
  const auto& A = cov.matrix();
  const int n = cov.n();
  r.blocks = positive_blocks(A);
  std::vector<int> block_of(n);
  for (std::size_t b = 0; b < r.blocks.size(); ++b)
    for (int i : r.blocks[b]) block_of[i] = static_cast<int>(b);
  bool block_ok = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (block_of[i] == block_of[j]) {
        block_ok = block_ok && A(i, j) > kBlockTol;
      } else {
        block_ok = block_ok && std::abs(A(i, j)) <= kBlockTol;
      }
    }
  if (!block_ok) r.failing.emplace_back("block");
  if (!cov.is_pd()) {
    r.failing.emplace_back("inverse-stieltjes");
    r.failing.emplace_back("weak-savage");
    r.failing.emplace_back("block-savage");
    return r;
  }
  if (!is_inverse_stieltjes(cov).ok) r.failing.emplace_back("inverse-stieltjes");
  const Eigen::VectorXd sv = cov.inverse().colwise().sum().transpose();
  if (savage_class(sv) == Savage::Fails) r.failing.emplace_back("weak-savage");
  for (const auto& b : r.blocks) {
    bool any = false;
    for (int i : b) any = any || sv(i) > kSavageZeroTol;
    if (!any) {
      r.failing.emplace_back("block-savage");
      break;
    }
  }
  r.ok = r.failing.empty();
  return r;
}

struct ConditionReport {
  Eigen::VectorXd savage_vector;
  Savage savage = Savage::Fails;
  bool stieltjes_inverse = false;
  bool dgff = false;
  std::vector<std::string> dgff_failing;
  double quadratic = 0.0;  // 1^T A^{-1} 1
  // Three-point cross-checks (NaN / false otherwise).
  double savage1_closed_form = std::numeric_limits<double>::quiet_NaN();
  bool min_sum_inequality = false;
};

inline ConditionReport savage_report(const CovarianceSpec& cov) {
  if (!cov.is_pd()) throw DomainError("savage_report: matrix is singular");
  ConditionReport r;
  r.savage_vector = cov.inverse().colwise().sum().transpose();
  r.savage = savage_class(r.savage_vector);
  r.quadratic = r.savage_vector.sum();
  r.stieltjes_inverse = is_inverse_stieltjes(cov).ok;
  const auto d = is_dgff(cov);
  r.dgff = d.ok;
  r.dgff_failing = d.failing;
  if (cov.n() == 3 && cov.is_standard()) {
    const double a12 = cov(0, 1), a13 = cov(0, 2), a23 = cov(1, 2);
    r.savage1_closed_form = (1 + a23 - a12 - a13) * (1 - a23) / cov.matrix().determinant();
    r.min_sum_inequality = 1 + 2 * std::min({a12, a13, a23}) > a12 + a13 + a23;
  }
  return r;
}

// ---------------------------------------------------------------------------

enum class LargeH { ColorForLargeH, NotColorForLargeH, OutOfScope };

inline std::string to_string(LargeH v) {
  switch (v) {
    case LargeH::ColorForLargeH: return "ColorForLargeH";
    case LargeH::NotColorForLargeH: return "NotColorForLargeH";
    case LargeH::OutOfScope: return "OutOfScope";
  }
  return "?";
}

struct LargeHVerdict {
  LargeH verdict = LargeH::OutOfScope;
  std::string case_tag;  // "i", "ii", "iii", "zero-cov", "degenerate"
  double savage_min = 0.0;
  double quadratic = 0.0;
  bool trivial = false;  // two or more zero covariances
};

inline LargeHVerdict classify_large_h_3(const CovarianceSpec& cov) {
  if (cov.n() != 3) throw SizeError("classify_large_h_3: n must be 3");
  detail::require(cov.is_standard(), "classify_large_h_3: covariance must have unit diagonal");
  const double a[3] = {cov(0, 1), cov(0, 2), cov(1, 2)};
  for (double x : a) detail::require(x >= 0.0 && x < 1.0, "classify_large_h_3: correlations must lie in [0, 1)");
  if (!cov.is_pd()) throw DomainError("classify_large_h_3: singular covariance; use classify_degenerate");
  LargeHVerdict v;
  const Eigen::VectorXd sv = cov.inverse().colwise().sum().transpose();
  v.savage_min = sv.minCoeff();
  v.quadratic = sv.sum();
  const int zeros = static_cast<int>(std::count_if(std::begin(a), std::end(a), [](double x) { return x <= kBlockTol; }));
  if (zeros == 1) {
    v.verdict = LargeH::NotColorForLargeH;
    v.case_tag = "zero-cov";
    return v;
  }
  if (zeros >= 2) {
    v.verdict = LargeH::ColorForLargeH;
    v.case_tag = "zero-cov";
    v.trivial = true;
    return v;
  }
  if (v.savage_min > kSavageZeroTol) {
    v.verdict = LargeH::ColorForLargeH;
    v.case_tag = "i";
  } else if (v.savage_min >= -kSavageZeroTol) {
    v.verdict = LargeH::ColorForLargeH;
    v.case_tag = "ii";
  } else {
    // Strict: on the boundary the quadratic form is 2 up to roundoff.
    v.verdict = v.quadratic < 2.0 - kSavageZeroTol ? LargeH::ColorForLargeH : LargeH::NotColorForLargeH;
    v.case_tag = "iii";
  }
  return v;
}

// ---------------------------------------------------------------------------

enum class DegenerateKind { NotColorAnyPositiveH, NotColorForLargeH };

inline std::string to_string(DegenerateKind k) {
  return k == DegenerateKind::NotColorAnyPositiveH ? "NotColorAnyPositiveH" : "NotColorForLargeH";
}

struct DegenerateVerdict {
  DegenerateKind kind = DegenerateKind::NotColorForLargeH;
  std::uint32_t forbidden = 0;  // pattern with probability zero for every h > 0
  std::uint32_t required = 0;   // its complement, which has positive probability
  Eigen::VectorXd null_vector;
};

inline std::vector<DegenerateVerdict> classify_degenerate(const CovarianceSpec& cov) {
  std::vector<DegenerateVerdict> out;
  const int n = cov.n();
  if (cov.rank() == n) return out;
  const Eigen::MatrixXd N = cov.null_space();
  if (cov.rank() == n - 1 && N.cols() == 1) {
    Eigen::VectorXd a = N.col(0);
    a /= a.cwiseAbs().maxCoeff();
    const bool full_support_subvectors = a.cwiseAbs().minCoeff() > 1e-9;
    if (full_support_subvectors && std::abs(a.sum()) > 1e-9) {
      if (a.sum() > 0) a = -a;
      DegenerateVerdict v;
      v.kind = DegenerateKind::NotColorAnyPositiveH;
      for (int i = 0; i < n; ++i)
        if (a(i) < 0) v.forbidden |= 1u << i;
      v.required = ((1u << n) - 1) ^ v.forbidden;
      v.null_vector = a;
      out.push_back(v);
    }
  }
  bool nonneg = cov.is_standard();
  for (int i = 0; i < n && nonneg; ++i)
    for (int j = i + 1; j < n && nonneg; ++j) nonneg = cov(i, j) >= 0.0 && cov(i, j) < 1.0;
  if (nonneg) {
    DegenerateVerdict v;
    v.kind = DegenerateKind::NotColorForLargeH;
    v.null_vector = N.col(0);
    out.push_back(v);
  }
  return out;
}

/// Gram matrix of unit vectors (rows of `points`).
inline CovarianceSpec covariance_from_points(const Eigen::MatrixXd& points) {
  Eigen::MatrixXd U = points;
  for (Eigen::Index i = 0; i < U.rows(); ++i) U.row(i).normalize();
  Eigen::MatrixXd G = U * U.transpose();
  G.diagonal().setOnes();
  return CovarianceSpec(G);
}

// ---------------------------------------------------------------------------

struct AbRegion {
  double a = 0.0, b = 0.0;
  bool pd = false;
  bool large_h_color = false;  // meaningful only when pd
  bool dgff = false;
  bool markov_boundary = false;
  double savage_min = 0.0;
  std::string large_h_case;
  CovarianceSpec cov;  // the (1,a,a; a,1,b; a,b,1) matrix when pd
};

/// Closed-form region tests for (1,a,a; a,1,b; a,b,1), with the matrix
/// classifiers evaluated alongside.
inline AbRegion ab_region_classify(double a, double b, double markov_tol = 1e-12) {
  detail::require(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0, "ab_region_classify: a, b must lie in (0, 1)");
  AbRegion r;
  r.a = a;
  r.b = b;
  r.pd = 2 * a * a < 1 + b;
  r.markov_boundary = std::abs(b - a * a) <= markov_tol;
  if (!r.pd) return r;
  r.cov = CovarianceSpec::ab_matrix(a, b);
  if (!r.cov.is_pd()) {
    r.pd = false;
    return r;
  }
  const auto v = classify_large_h_3(r.cov);
  r.large_h_color = v.verdict == LargeH::ColorForLargeH;
  r.large_h_case = v.case_tag;
  r.savage_min = v.savage_min;
  r.dgff = is_dgff(r.cov).ok;
  return r;
}

/// The closed-form large-h region: 2a - 1 <= b or (2a - 1)^2 < b.
inline bool ab_large_h_color_formula(double a, double b) {
  return 2 * a - 1 <= b || (2 * a - 1) * (2 * a - 1) < b;
}

}  // namespace dcrep
