#pragma once

// Deciding whether a law on {0,1}^n is the law of a color process.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "dcrep/error.hpp"
#include "dcrep/gaussian_law.hpp"
#include "dcrep/partitions.hpp"
#include "dcrep/report.hpp"
#include "dcrep/simplex.hpp"

namespace dcrep {

using Rational = boost::multiprecision::cpp_rational;

/// Representation weights on B_3 in enumeration order 123, 12|3, 13|2, 1|23, 1|2|3.
struct SignedRep3 {
  double q123 = 0.0;
  double q12_3 = 0.0;
  double q13_2 = 0.0;
  double q1_23 = 0.0;
  double q1_2_3 = 0.0;
  bool feasible = false;

  std::array<double, 5> as_array() const { return {q123, q12_3, q13_2, q1_23, q1_2_3}; }
  double sum() const { return q123 + q12_3 + q13_2 + q1_23 + q1_2_3; }
  double min() const {
    const auto a = as_array();
    return *std::min_element(a.begin(), a.end());
  }

  PartitionDistribution distribution() const {
    const auto a = as_array();
    return PartitionDistribution(3, std::vector<double>(a.begin(), a.end()), !feasible);
  }

  static SignedRep3 from_array(const std::array<double, 5>& a, double tol = 1e-9) {
    SignedRep3 r{a[0], a[1], a[2], a[3], a[4], false};
    r.feasible = r.min() >= -tol;
    return r;
  }
};

namespace detail {

inline double marginal_tolerance(const BinaryLaw& nu) {
  return nu.has_stderr() ? std::max(1e-9, 5.0 * nu.marginal_stderr()) : 1e-9;
}

inline void require_equal_marginals(const BinaryLaw& nu, double p, const char* who) {
  if (nu.max_marginal_deviation(p) > marginal_tolerance(nu))
    throw DomainError(std::string(who) + ": marginals are not all equal to p");
}

}  // namespace detail

/// The unique signed representation of a 3-point law with marginal p != 1/2.
inline SignedRep3 signed_rep_3(const BinaryLaw& nu) {
  if (nu.n() != 3) throw SizeError("signed_rep_3: n must be 3");
  const double p = nu.marginal_p();
  detail::require_equal_marginals(nu, p, "signed_rep_3");
  detail::require(std::abs(p - 0.5) > 1e-9, "signed_rep_3: p = 1/2 has no unique representation");
  const double d = (1 - p) * p * (1 - 2 * p);
  auto v = [&](const char* k) { return nu.prob(k); };
  std::array<double, 5> q{};
  q[4] = (v("100") - v("011")) / d;
  q[1] = ((1 - p) * v("110") - p * v("001")) / d;
  q[2] = ((1 - p) * v("101") - p * v("010")) / d;
  q[3] = ((1 - p) * v("011") - p * v("100")) / d;
  q[0] = 1.0 - ((p * v("000")) - (1 - p) * v("111")) / d;
  return SignedRep3::from_array(q);
}

/// The representations of a {0,1}-symmetric 3-point law, parameterized by t.
struct SymmetricRepFamily3 {
  double nu001 = 0.0, nu010 = 0.0, nu100 = 0.0;
  double t_lo = 0.0, t_hi = -1.0;

  bool empty() const { return t_hi < t_lo - 1e-12; }

  SignedRep3 at(double t) const {
    const double s = nu001 + nu010 + nu100;
    return SignedRep3::from_array({1 - 4 * s + t, 4 * nu001 - t, 4 * nu010 - t, 4 * nu100 - t, 2 * t}, 1e-12);
  }

  /// The canonical member, t = t_lo.
  SignedRep3 canonical() const { return at(t_lo); }
};

inline SymmetricRepFamily3 symmetric_rep_family_3(const BinaryLaw& nu) {
  if (nu.n() != 3) throw SizeError("symmetric_rep_family_3: n must be 3");
  const double tol = nu.has_stderr() ? 4.0 * *std::max_element(nu.stderr_vec().begin(), nu.stderr_vec().end()) : 1e-10;
  if (nu.symmetry_defect() > std::max(tol, 1e-10))
    throw DomainError("symmetric_rep_family_3: law is not {0,1}-symmetric");
  SymmetricRepFamily3 f;
  f.nu001 = nu.prob("001");
  f.nu010 = nu.prob("010");
  f.nu100 = nu.prob("100");
  f.t_lo = std::max(0.0, 4 * (f.nu001 + f.nu010 + f.nu100) - 1);
  f.t_hi = 4 * std::min({f.nu001, f.nu010, f.nu100});
  return f;
}

/// Gaussian form of the family interval from the three angles.
inline std::pair<double, double> symmetric_family_interval_angles(double t12, double t13, double t23) {
  const double pi = std::numbers::pi;
  const double s = t12 + t13 + t23;
  return {std::max(0.0, s / pi - 1), (s - 2 * std::max({t12, t13, t23})) / pi};
}

// ---------------------------------------------------------------------------
// LP feasibility

enum class FeasibilityStatus { Feasible, Infeasible, Borderline };

inline std::string to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::Feasible: return "Feasible";
    case FeasibilityStatus::Infeasible: return "Infeasible";
    case FeasibilityStatus::Borderline: return "Borderline";
  }
  return "?";
}

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Infeasible;
  std::optional<PartitionDistribution> q;
  double margin = 0.0;              // exact: min sum of violations; MC: min t with |Aq - nu| <= t w
  std::vector<double> certificate;  // y with y^T A <= 0 columnwise and y^T nu > 0
  double residual = 0.0;            // |A q - nu|_inf of the returned q
};

struct TolPolicy {
  bool monte_carlo = false;  // use the law's standard errors
  double sigmas = 3.0;       // relaxation width in standard errors
  double feasible_tol = 1e-12;
  double borderline_tol = 1e-9;

  static TolPolicy exact() { return {}; }
  static TolPolicy mc(double sigmas = 3.0) { return {true, sigmas, 1e-12, 1e-9}; }
  static TolPolicy for_law(const BinaryLaw& nu) { return nu.has_stderr() ? mc() : exact(); }
};

namespace detail {

inline std::vector<double> clamp_distribution(const std::vector<double>& x, std::size_t k) {
  std::vector<double> q(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k));
  double s = 0.0;
  for (auto& v : q) s += (v = std::max(v, 0.0));
  for (auto& v : q) v /= s;
  return q;
}

inline double residual(const std::vector<double>& nu_hat, const BinaryLaw& nu) {
  double r = 0.0;
  for (std::size_t i = 0; i < nu_hat.size(); ++i) r = std::max(r, std::abs(nu_hat[i] - nu[static_cast<std::uint32_t>(i)]));
  return r;
}

}  // namespace detail

inline FeasibilityResult lp_feasibility(const BinaryLaw& nu, double p, const TolPolicy& pol) {
  const int n = nu.n();
  if (n > 8) throw SizeError("lp_feasibility: n must be <= 8");
  detail::require_equal_marginals(nu, p, "lp_feasibility");
  if (pol.monte_carlo && !nu.has_stderr()) throw DomainError("lp_feasibility: Monte Carlo policy needs standard errors");
  const Eigen::MatrixXd A = color_map(n, p);
  const std::size_t rows = A.rows(), k = A.cols();
  FeasibilityResult out;

  if (!pol.monte_carlo) {
    std::vector<double> a(rows * k), b(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      b[i] = nu[static_cast<std::uint32_t>(i)];
      for (std::size_t j = 0; j < k; ++j) a[i * k + j] = A(i, j);
    }
    Simplex<double> lp(rows, k, a, b, {});
    const auto res = lp.solve(1e-13);
    out.margin = std::max(res.phase1_objective, 0.0);
    if (out.margin <= pol.feasible_tol || out.margin <= pol.borderline_tol) {
      out.status = out.margin <= pol.feasible_tol ? FeasibilityStatus::Feasible : FeasibilityStatus::Borderline;
      out.q = PartitionDistribution(n, detail::clamp_distribution(res.x, k));
      out.residual = detail::residual(apply_color_map(*out.q, p), nu);
    } else {
      out.status = FeasibilityStatus::Infeasible;
      out.certificate = res.farkas;
    }
    return out;
  }

  // Monte Carlo: minimize t subject to |A q - nu| <= t w, sum q = 1, q >= 0.
  const double m = std::max(nu.sample_count(), 1.0);
  std::vector<double> w(rows);
  for (std::size_t i = 0; i < rows; ++i) w[i] = std::max(nu.stderr_at(static_cast<std::uint32_t>(i)), 1.0 / m);
  {
    const std::size_t R = 2 * rows + 1, C = k + 1 + 2 * rows;
    std::vector<double> a(R * C, 0.0), b(R, 0.0), c(C, 0.0);
    c[k] = 1.0;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < k; ++j) a[i * C + j] = a[(rows + i) * C + j] = A(i, j);
      a[i * C + k] = -w[i];
      a[i * C + k + 1 + i] = 1.0;
      a[(rows + i) * C + k] = w[i];
      a[(rows + i) * C + k + 1 + rows + i] = -1.0;
      b[i] = b[rows + i] = nu[static_cast<std::uint32_t>(i)];
    }
    for (std::size_t j = 0; j < k; ++j) a[2 * rows * C + j] = 1.0;
    b[2 * rows] = 1.0;
    Simplex<double> lp(R, C, a, b, c);
    const auto res = lp.solve(1e-13);
    if (res.status != LpStatus::Optimal) throw NumericalError("lp_feasibility: relaxed program failed");
    out.margin = res.objective;
    if (out.margin <= pol.sigmas) {
      out.status = FeasibilityStatus::Feasible;
      out.q = PartitionDistribution(n, detail::clamp_distribution(res.x, k));
      out.residual = detail::residual(apply_color_map(*out.q, p), nu);
      return out;
    }
  }
  // Certificate for the relaxed polytope at t = sigmas.
  const std::size_t R = 2 * rows + 1, C = k + 2 * rows;
  std::vector<double> a(R * C, 0.0), b(R, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i * C + j] = a[(rows + i) * C + j] = A(i, j);
    a[i * C + k + i] = 1.0;
    a[(rows + i) * C + k + rows + i] = -1.0;
    b[i] = nu[static_cast<std::uint32_t>(i)] + pol.sigmas * w[i];
    b[rows + i] = nu[static_cast<std::uint32_t>(i)] - pol.sigmas * w[i];
  }
  for (std::size_t j = 0; j < k; ++j) a[2 * rows * C + j] = 1.0;
  b[2 * rows] = 1.0;
  Simplex<double> lp(R, C, a, b, {});
  const auto res = lp.solve(1e-13);
  out.status = FeasibilityStatus::Infeasible;
  out.certificate = res.farkas;
  return out;
}

inline FeasibilityResult lp_feasibility(const BinaryLaw& nu) {
  return lp_feasibility(nu, nu.marginal_p(), TolPolicy::for_law(nu));
}

struct RationalFeasibility {
  bool feasible = false;
  std::vector<Rational> q;        // exact representation when feasible
  std::vector<Rational> farkas;   // exact certificate when infeasible
};

/// Exact decision over the rationals; nu indexed by pattern.
inline RationalFeasibility lp_feasibility_exact(int n, const std::vector<Rational>& nu, const Rational& p) {
  if (n < 1 || n > 5) throw SizeError("lp_feasibility_exact: n must be in [1, 5]");
  detail::require(nu.size() == (std::size_t{1} << n), "lp_feasibility_exact: expected 2^n probabilities");
  detail::require(p > 0 && p < 1, "lp_feasibility_exact: p must be in (0, 1)");
  const auto& parts = partitions_of(n);
  const std::size_t rows = nu.size(), k = parts.size();
  std::vector<Rational> a(rows * k, Rational(0));
  for (std::size_t j = 0; j < k; ++j) {
    const int blocks = parts[j].block_count();
    for (std::uint32_t c = 0; c < (1u << blocks); ++c) {
      Rational w(1);
      for (int b = 0; b < blocks; ++b) w *= ((c >> b) & 1u) ? p : Rational(1 - p);
      a[parts[j].pattern(c) * k + j] += w;
    }
  }
  Simplex<Rational> lp(rows, k, a, nu, {});
  auto res = lp.solve(Rational(0));
  RationalFeasibility out;
  out.feasible = res.phase1_objective == 0;
  if (out.feasible) {
    out.q.assign(res.x.begin(), res.x.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    out.farkas = std::move(res.farkas);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Four points on a circle of S^2 (square configuration)

/// Exact zero-threshold law of the square configuration. The 3-marginals are
/// exact; together with nu_0101 = nu_1010 = 0 they determine the law.
inline BinaryLaw square_law_zero(double theta) {
  const auto cov = CovarianceSpec::sphere_square(theta);
  const std::array<std::array<int, 3>, 4> triples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * 8 + 3, 16);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(4 * 8 + 3);
  int row = 0;
  for (const auto& t : triples) {
    Eigen::Matrix3d sub;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sub(i, j) = cov(t[i], t[j]);
    const BinaryLaw law3 = zero_threshold_law_3(CovarianceSpec(sub));
    for (std::uint32_t r3 = 0; r3 < 8; ++r3, ++row) {
      for (std::uint32_t r = 0; r < 16; ++r) {
        std::uint32_t s = 0;
        for (int i = 0; i < 3; ++i)
          if ((r >> t[i]) & 1u) s |= 1u << i;
        if (s == r3) M(row, r) = 1.0;
      }
      rhs(row) = law3[r3];
    }
  }
  M(row++, parse_pattern("0101")) = 1.0;
  M(row++, parse_pattern("1010")) = 1.0;
  M.row(row).setOnes();
  rhs(row) = 1.0;
  Eigen::VectorXd v = M.colPivHouseholderQr().solve(rhs);
  if ((M * v - rhs).cwiseAbs().maxCoeff() > 1e-12)
    throw NumericalError("square_law_zero: 3-marginals are inconsistent");
  std::vector<double> probs(16);
  for (int r = 0; r < 16; ++r) probs[r] = std::abs(v(r)) < 1e-15 ? 0.0 : v(r);
  return BinaryLaw(4, std::move(probs));
}

struct SquareSolution {
  bool conditions_hold = false;
  SignedRep3 rep3;
  std::optional<PartitionDistribution> q4;
  double slack_full = 0.0;  // q123 - q13,2
  double slack_pair = 0.0;  // 2 q12,3 - 2 q13,2 - q1,2,3
};

/// B_4 reconstruction from a 3-point representation of the marginal on {1,2,3}.
inline SquareSolution square_circle_from_rep3(const SignedRep3& r, double tol = 1e-12) {
  SquareSolution s;
  s.rep3 = r;
  s.slack_full = r.q123 - r.q13_2;
  s.slack_pair = 2 * r.q12_3 - 2 * r.q13_2 - r.q1_2_3;
  s.conditions_hold = s.slack_full >= -tol && r.q13_2 >= -tol && s.slack_pair >= -tol && r.q1_2_3 >= -tol;
  if (!s.conditions_hold) return s;
  const double qt = r.q13_2, qa = r.q1_2_3 / 2, qaa = r.q12_3 - r.q13_2 - r.q1_2_3 / 2;
  std::map<std::string, double> w{{"1234", r.q123 - r.q13_2},
                                  {"123|4", qt}, {"124|3", qt}, {"134|2", qt}, {"1|234", qt},
                                  {"12|3|4", qa}, {"1|23|4", qa}, {"1|2|34", qa}, {"14|2|3", qa},
                                  {"12|34", qaa}, {"14|23", qaa},
                                  {"1|2|3|4", 0.0}, {"13|2|4", 0.0}, {"1|24|3", 0.0}, {"13|24", 0.0}};
  for (auto& [k, v] : w) v = std::max(v, 0.0);
  double total = 0.0;
  for (const auto& [k, v] : w) total += v;
  for (auto& [k, v] : w) v /= total;
  s.q4 = PartitionDistribution::from_map(4, w);
  return s;
}

/// Decides the square law nu4 by searching representations of its 3-marginal
/// that satisfy the square inequalities.
inline FeasibilityResult square_circle_solver(const BinaryLaw& nu4) {
  if (nu4.n() != 4) throw SizeError("square_circle_solver: n must be 4");
  const double se = nu4.has_stderr() ? *std::max_element(nu4.stderr_vec().begin(), nu4.stderr_vec().end()) : 0.0;
  const double tol = nu4.has_stderr() ? 4.0 * se : 1e-10;
  if (nu4.prob("0101") > tol || nu4.prob("1010") > tol)
    throw DomainError("square_circle_solver: nu_0101 must vanish");
  // Dihedral symmetry: rotations and the reflection fixing 1 and 3.
  auto permute = [](std::uint32_t r, const std::array<int, 4>& to) {
    std::uint32_t s = 0;
    for (int i = 0; i < 4; ++i)
      if ((r >> i) & 1u) s |= 1u << to[i];
    return s;
  };
  for (const auto& g : {std::array<int, 4>{1, 2, 3, 0}, std::array<int, 4>{0, 3, 2, 1}})
    for (std::uint32_t r = 0; r < 16; ++r)
      if (std::abs(nu4[r] - nu4[permute(r, g)]) > std::max(tol, 1e-10))
        throw DomainError("square_circle_solver: law lacks the dihedral symmetry");

  const double p = nu4.marginal_p();
  const BinaryLaw nu3 = nu4.marginalize({0, 1, 2});
  FeasibilityResult out;
  SquareSolution sol;
  const double ctol = nu4.has_stderr() ? 3.0 * se : 1e-12;
  if (std::abs(p - 0.5) > std::max(tol, 1e-9)) {
    sol = square_circle_from_rep3(signed_rep_3(nu3), ctol);
  } else {
    // q12,3 = q1,23 by symmetry; all constraints are linear in t.
    const auto fam = symmetric_rep_family_3(nu3);
    double lo = fam.t_lo, hi = fam.t_hi;
    const auto r0 = fam.at(0.0);
    // q123 - q13,2 = (1 - 4S - 4nu010) + 2t >= 0
    lo = std::max(lo, -(r0.q123 - r0.q13_2) / 2);
    // 2q12,3 - 2q13,2 - q1,2,3 = 2(r0.q12_3 - r0.q13_2) - 2t >= 0
    hi = std::min(hi, r0.q12_3 - r0.q13_2);
    sol = square_circle_from_rep3(fam.at(std::min(std::max(lo, fam.t_lo), std::max(hi, fam.t_lo))), ctol);
    if (hi < lo - ctol) sol.conditions_hold = false;
  }
  out.margin = std::min({sol.slack_full, sol.slack_pair, sol.rep3.q13_2, sol.rep3.q1_2_3});
  if (!sol.conditions_hold) {
    out.status = FeasibilityStatus::Infeasible;
    return out;
  }
  out.q = sol.q4;
  out.residual = detail::residual(apply_color_map(*out.q, p), nu4);
  const double rtol = nu4.has_stderr() ? 4.0 * se : 1e-9;
  out.status = out.residual <= rtol ? FeasibilityStatus::Feasible : FeasibilityStatus::Infeasible;
  return out;
}

// ---------------------------------------------------------------------------

/// nu_{0^n} >= 1/4 is sufficient for a {0,1}-symmetric law.
inline Verdict quick_sufficient_symmetric(const BinaryLaw& nu) {
  const double tol = nu.has_stderr() ? 4.0 * *std::max_element(nu.stderr_vec().begin(), nu.stderr_vec().end()) : 1e-10;
  if (nu.symmetry_defect() > std::max(tol, 1e-10))
    throw DomainError("quick_sufficient_symmetric: law is not {0,1}-symmetric");
  return nu[0] >= 0.25 ? Verdict::ColorRep : Verdict::Undetermined;
}

/// Left minus right side of the symmetric-plus-mean necessary condition,
/// (pi/2)(n-2)/(n-1) - arcsin sqrt((n-2)/(n-1)); zero iff the condition holds.
inline double symmetric_plus_mean_gap(int n) {
  detail::require(n >= 3, "symmetric_plus_mean_gap: n must be >= 3");
  const double x = static_cast<double>(n - 2) / (n - 1);
  return std::numbers::pi / 2 * x - std::asin(std::sqrt(x));
}

}  // namespace dcrep
