#pragma once

// Closed-form limits of the n = 3 representation: h -> 0 for Gaussian
// vectors, h -> infinity for symmetric stable vectors with atomic spectral
// measure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcrep/dc_solver.hpp"
#include "dcrep/error.hpp"
#include "dcrep/gaussian_law.hpp"
#include "dcrep/numerics.hpp"
#include "dcrep/report.hpp"
#include "dcrep/special.hpp"
#include "dcrep/stable_law.hpp"

namespace dcrep {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SmallHLimits3 {
  double q1_2_3 = 0.0, q12_3 = 0.0, q13_2 = 0.0, q1_23 = 0.0, q123 = 0.0;
  double kappa = 0.0;
  bool feasible = false;  // every limit > 1e-10
  Verdict verdict = Verdict::Undetermined;

  SignedRep3 rep() const { return SignedRep3::from_array({q123, q12_3, q13_2, q1_23, q1_2_3}, 0.0); }
  double sum() const { return q1_2_3 + q12_3 + q13_2 + q1_23 + q123; }
};

namespace detail {

inline SmallHLimits3 finish_small_h(SmallHLimits3 s) {
  const double mn = std::min({s.q1_2_3, s.q12_3, s.q13_2, s.q1_23, s.q123});
  s.feasible = mn > 1e-10;
  s.verdict = s.feasible ? Verdict::ColorRep : (mn < -1e-10 ? Verdict::NoColorRep : Verdict::Undetermined);
  return s;
}

}  // namespace detail

/// Limits as h -> 0 of the unique signed representation of X^h.
inline SmallHLimits3 small_h_limits_3(const CovarianceSpec& cov) {
  if (cov.n() != 3) throw SizeError("small_h_limits_3: n must be 3");
  detail::require(cov.is_standard(), "small_h_limits_3: covariance must have unit diagonal");
  if (!cov.is_pd()) throw DomainError("small_h_limits_3: covariance must be positive definite");
  const double pi = std::numbers::pi;
  const double a12 = cov(0, 1), a13 = cov(0, 2), a23 = cov(1, 2);
  const double t12 = cov.angle(0, 1), t13 = cov.angle(0, 2), t23 = cov.angle(1, 2);
  // kappa = 1 - E/pi with E the spherical excess of the triangle spanned by the
  // three unit vectors. The arccos form acos(det/((1+a12)(1+a13)(1+a23)) - 1)/pi
  // agrees only while a12 + a13 + a23 >= -1, where E <= pi.
  const double det = std::max(cov.matrix().determinant(), 0.0);
  SmallHLimits3 s;
  s.kappa = 1 - 2 * std::atan2(std::sqrt(det), 1 + a12 + a13 + a23) / pi;
  s.q1_2_3 = 2 - 2 * s.kappa;
  s.q12_3 = (t13 + t23 - t12) / pi - 1 + s.kappa;
  s.q13_2 = (t12 + t23 - t13) / pi - 1 + s.kappa;
  s.q1_23 = (t12 + t13 - t23) / pi - 1 + s.kappa;
  s.q123 = 2 - (t12 + t13 + t23) / pi - s.kappa;
  return detail::finish_small_h(s);
}

enum class SmallHFamily { FullySymmetric, Markov };

/// Closed forms specialized to the fully symmetric and Markov families.
inline SmallHLimits3 small_h_family_limits(SmallHFamily fam, double a) {
  detail::require(a > 0.0 && a < 1.0, "small_h_family_limits: a must be in (0, 1)");
  const double pi = std::numbers::pi;
  SmallHLimits3 s;
  if (fam == SmallHFamily::FullySymmetric) {
    const double k = std::acos(a * (a * a - 6 * a - 3) / std::pow(1 + a, 3));
    const double t = std::acos(a);
    s.kappa = k / pi;
    s.q1_2_3 = 2 - 2 * k / pi;
    s.q12_3 = s.q13_2 = s.q1_23 = t / pi - 1 + k / pi;
    s.q123 = 2 - 3 * t / pi - k / pi;
  } else {
    const double k = std::acos(-2 * a / (1 + a * a));
    const double t1 = std::acos(a), t2 = std::acos(a * a);
    s.kappa = k / pi;
    s.q1_2_3 = 2 - 2 * k / pi;
    s.q12_3 = s.q1_23 = t2 / pi - 1 + k / pi;
    s.q13_2 = (2 * t1 - t2) / pi - 1 + k / pi;
    s.q123 = 2 - (2 * t1 + t2) / pi - k / pi;
  }
  return detail::finish_small_h(s);
}

struct FamilyScan {
  std::vector<double> a;
  std::vector<SmallHLimits3> limits;
  bool all_positive = true;
};

inline FamilyScan small_h_positive_families(SmallHFamily fam, const std::vector<double>& grid) {
  FamilyScan out;
  for (double a : grid) {
    out.a.push_back(a);
    out.limits.push_back(small_h_family_limits(fam, a));
    out.all_positive = out.all_positive && out.limits.back().feasible;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stable large-h limits

/// lim nu_rho(h) / nu_1(h) for a pattern rho != 0 over the measure's coordinates.
inline double stable_order1_limit(const SpectralMeasure& mu, std::uint32_t rho) {
  const int d = mu.d();
  detail::require(rho != 0 && rho < (1u << d), "stable_order1_limit: pattern must be nonzero");
  const double alpha = mu.alpha();
  double total = 0.0;
  for (const auto& atom : mu.atoms()) {
    const Eigen::VectorXd x = mu.scaled_atom(atom);
    double lo = 0.0, hi = kInf;
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      if ((rho >> i) & 1u) {
        if (x(i) <= 0) ok = false;
        else lo = std::max(lo, 1.0 / x(i));
      } else if (x(i) > 0) {
        hi = std::min(hi, 1.0 / x(i));
      }
    }
    if (!ok || hi <= lo) continue;
    total += std::pow(lo, -alpha) - (std::isinf(hi) ? 0.0 : std::pow(hi, -alpha));
  }
  return total;
}

// Largest accepted tanh-sinh error estimate per order-2 piece, relative to the
// piece's L1 norm. For alpha <= 0.55 the pieces come out near 1e-9; close to
// alpha = 1 the (s - knot)^{-alpha} singularity of the inner integral leaves
// estimates around 1e-4, which is reported back rather than hidden.
inline constexpr double kOrder2Accept = 1e-3;

/// 1/2 sum over ordered atom pairs of the double integral defining
/// lim nu_rho(h) / nu_1(h)^2, with the summed quadrature error estimate.
/// The value is +inf when the limit diverges.
inline numerics::Integral stable_order2_limit_estimate(const SpectralMeasure& mu, std::uint32_t rho) {
  const int d = mu.d();
  detail::require(rho < (1u << d), "stable_order2_limit: pattern out of range");
  const double alpha = mu.alpha();
  std::vector<Eigen::VectorXd> xs;
  for (const auto& a : mu.atoms()) xs.push_back(mu.scaled_atom(a));

  double total = 0.0, err = 0.0;
  const numerics::Integral diverges{kInf, 0.0};
  for (const auto& x : xs) {
    for (const auto& y : xs) {
      // s1 = anchor + dir * off. Coordinates vanishing at the anchor get an
      // exact zero base so that v_i = -dir * off * x_i keeps full precision
      // next to a knot.
      auto inner = [&](double anchor, double dir, double off) {
        double lo = 0.0, hi = kInf;
        for (int i = 0; i < d; ++i) {
          double base = 1.0 - anchor * x(i);
          if (std::abs(base) <= 1e-13) base = 0.0;
          const double v = base - dir * off * x(i);
          const bool in = (rho >> i) & 1u;
          if (y(i) == 0.0) {
            if (in ? !(0.0 > v) : !(0.0 <= v)) return 0.0;
          } else if ((y(i) > 0) == in) {
            lo = std::max(lo, v / y(i));
          } else {
            hi = std::min(hi, v / y(i));
          }
        }
        if (!(hi > lo)) return 0.0;
        if (lo <= 0.0) return kInf;
        return std::pow(lo, -alpha) - (std::isinf(hi) ? 0.0 : std::pow(hi, -alpha));
      };
      auto at = [&](double s1) { return inner(0.0, 1.0, s1); };

      std::vector<double> br;
      for (int i = 0; i < d; ++i) {
        if (x(i) > 0) br.push_back(1.0 / x(i));
        for (int j = i + 1; j < d; ++j) {
          if (y(i) == 0.0 || y(j) == 0.0) continue;
          const double den = x(i) / y(i) - x(j) / y(j);
          if (den == 0.0) continue;
          const double s = (1.0 / y(i) - 1.0 / y(j)) / den;
          if (s > 0) br.push_back(s);
        }
      }
      std::sort(br.begin(), br.end());
      br.erase(std::unique(br.begin(), br.end(), [](double u, double v) { return std::abs(u - v) <= 1e-14 * v; }),
               br.end());
      std::vector<double> knots{0.0};
      knots.insert(knots.end(), br.begin(), br.end());
      knots.push_back(kInf);

      auto finite = [](double v) { return std::isinf(v) ? 0.0 : v; };
      // Half piece next to a knot, in the offset from it, with weight
      // alpha s^{-1-alpha}. off = t^m with m = 1/(1 - alpha) cancels an
      // off^{-alpha} singularity at the knot.
      const double m = alpha < 1.0 ? 1.0 / (1.0 - alpha) : 1.0;
      auto near = [&](double anchor, double dir, double len) {
        auto f = [&](double t) {
          const double off = std::pow(t, m);
          const double v = finite(inner(anchor, dir, off));
          if (v == 0.0) return 0.0;
          return alpha * std::pow(anchor + dir * off, -1 - alpha) * v * m * std::pow(t, m - 1);
        };
        const auto r = numerics::integrate_singular(f, 0.0, std::pow(len, 1 / m), 1e-12, kOrder2Accept);
        err += r.error;
        return r.value;
      };
      // Tail (from, inf) with u = s^{-alpha}, weight du.
      auto tail = [&](double from) {
        auto g = [&](double u) { return finite(at(std::pow(u, -1 / alpha))); };
        const auto r = numerics::integrate_singular(g, 0.0, std::pow(from, -alpha), 1e-12, kOrder2Accept);
        err += r.error;
        return r.value;
      };

      for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double l = knots[k], r = knots[k + 1];
        const double mid = std::isinf(r) ? (l > 0 ? 2 * l : 1.0) : 0.5 * (l + r);
        const double im = at(mid);
        if (im == 0.0) continue;
        if (std::isinf(im)) return diverges;
        if (l == 0.0) {
          // Near 0 the weight is s1^{-1-alpha}; the piece converges iff the
          // inner integral vanishes there faster than s1^alpha.
          const double e = 1e-7 * (std::isinf(r) ? 1.0 : r);
          const double i1 = at(e), i2 = at(2 * e);
          if (std::isinf(i1) || std::isinf(i2)) return diverges;
          if (i1 > 0.0 && std::log2(i2 / i1) <= alpha + 0.05) return diverges;
        }
        // An inner integral blowing up at a knot, like (s1 - knot)^{-alpha},
        // is integrable only for alpha < 1.
        const double w = std::isinf(r) ? l : r - l;
        for (double ed : {l > 0 ? 1e-9 * w : -1.0, std::isinf(r) ? -1.0 : 1e-9 * w}) {
          if (ed < 0) continue;
          const bool left = ed == 1e-9 * w && l > 0;
          const double v = left ? inner(l, 1.0, ed) : inner(r, -1.0, ed);
          if (alpha >= 1.0 && (std::isinf(v) || v > 1e3 * std::max(im, 1.0))) return diverges;
        }
        if (std::isinf(r)) {
          const double cut = l > 0 ? 2 * l : 1.0;
          if (l > 0) total += near(l, 1.0, cut - l);
          else total += near(0.0, 1.0, cut);
          total += tail(cut);
        } else {
          const double half = 0.5 * (r - l);
          total += near(l, 1.0, half) + near(r, -1.0, half);
        }
      }
    }
  }
  return {0.5 * total, 0.5 * err};
}

inline double stable_order2_limit(const SpectralMeasure& mu, std::uint32_t rho) {
  return stable_order2_limit_estimate(mu, rho).value;
}

/// Relative accuracy of stable_order2_limit observed against the closed forms
/// for the common-factor and Markov models. The quadrature's own estimate
/// understates the error once alpha > 0.6.
inline double stable_order2_relative_accuracy(double alpha) {
  if (alpha <= 0.55) return 1e-7;
  if (alpha <= 0.75) return 1e-4;
  return 5e-2;
}

/// g(alpha) = alpha Gamma(2 alpha) Gamma(1 - alpha) / Gamma(1 + alpha).
inline double ptalpha_factor(double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, "ptalpha_factor: alpha must be in (0, 1)");
  return alpha * special::gamma(2 * alpha) * special::gamma(1 - alpha) / special::gamma(1 + alpha);
}

/// The same factor via the duplication formula.
inline double ptalpha_factor_duplication(double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, "ptalpha_factor_duplication: alpha must be in (0, 1)");
  return std::pow(2.0, 2 * alpha - 1) * special::gamma(alpha + 0.5) * special::gamma(1 - alpha) /
         std::sqrt(std::numbers::pi);
}

/// d/dalpha log g = 2 log 2 + psi(alpha + 1/2) - psi(1 - alpha).
inline double ptalpha_log_derivative(double alpha) {
  return 2 * std::numbers::ln2 + special::digamma(alpha + 0.5) - special::digamma(1 - alpha);
}

inline double stable_order2_limit_101_symmetric(double a, double alpha) {
  detail::require(a > 0.0 && a < 1.0, "stable_order2_limit_101_symmetric: a must be in (0, 1)");
  detail::require(alpha > 0.0 && alpha < 2.0, "stable_order2_limit_101_symmetric: alpha must be in (0, 2)");
  if (alpha >= 1.0) return kInf;
  const double aa = std::pow(a, alpha);
  return (1 - aa) * (1 - aa) + aa * (1 - aa) * ptalpha_factor(alpha);
}

inline double stable_order2_limit_101_markov(double a, double alpha) {
  detail::require(a > 0.0 && a < 1.0, "stable_order2_limit_101_markov: a must be in (0, 1)");
  detail::require(alpha > 0.0 && alpha < 2.0, "stable_order2_limit_101_markov: alpha must be in (0, 2)");
  auto f = [&](double s) { return std::pow(1 - a * a * s, -alpha) * alpha * std::pow(s, -1 - alpha); };
  const double v = numerics::integrate(f, 1.0, 1.0 / a, 1e-12, 1e-13).value;
  return (1 - std::pow(a, alpha)) * v;
}

struct PhaseTransition {
  double root = 0.0;
  bool increasing_on_grid = false;
};

inline PhaseTransition phase_transition_alpha(int grid_points = 100) {
  PhaseTransition out;
  out.root = numerics::bisect([](double al) { return ptalpha_factor(al) - 1.0; }, 0.01, 0.99, 1e-14);
  out.increasing_on_grid = true;
  double prev = -kInf;
  for (int k = 0; k < grid_points; ++k) {
    const double al = 0.05 + 0.9 * (k + 0.5) / grid_points;
    const double g = ptalpha_factor(al);
    out.increasing_on_grid = out.increasing_on_grid && g > prev && ptalpha_log_derivative(al) > 0;
    prev = g;
  }
  return out;
}

// ---------------------------------------------------------------------------

struct StableLimitReport {
  std::map<std::string, double> order1;  // pattern key -> lim nu_rho / nu_1
  double order2_101 = 0.0;
  // Derived limits of the signed representation, order 123, 12|3, 13|2, 1|23, 1|2|3.
  std::array<double, 5> q{};
  double q_sum = 0.0;
};

inline StableLimitReport stable_limit_report(const SpectralMeasure& mu) {
  if (mu.d() != 3) throw SizeError("stable_limit_report: dimension must be 3");
  StableLimitReport r;
  for (std::uint32_t rho = 1; rho < 8; ++rho) r.order1[pattern_key(rho, 3)] = stable_order1_limit(mu, rho);
  r.order2_101 = stable_order2_limit(mu, parse_pattern("101"));
  const auto& o = r.order1;
  r.q = {o.at("111"), o.at("110"), o.at("101"), o.at("011"), o.at("100") - o.at("011")};
  for (double v : r.q) r.q_sum += v;
  return r;
}

// ---------------------------------------------------------------------------

enum class AltRegime { I, II, III };

inline std::string to_string(AltRegime r) {
  switch (r) {
    case AltRegime::I: return "i";
    case AltRegime::II: return "ii";
    case AltRegime::III: return "iii";
  }
  return "?";
}

struct AltExampleConstants {
  double c1 = 0.0;
  double c2 = 0.0;  // +inf when a == b
  AltRegime regime = AltRegime::II;
};

inline AltExampleConstants alt_example_constants(double a, double b) {
  detail::require(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0, "alt_example_constants: a, b must lie in (0, 1)");
  detail::require(2 * a * a + 2 * b * b < 1.0, "alt_example_constants: need 2a^2 + 2b^2 < 1");
  AltExampleConstants k;
  auto f = [&](double c) { return 2 * std::pow(a, c) + 2 * std::pow(b, c) - 1; };
  k.c1 = numerics::bisect(f, 1e-12, 2.0, 1e-15);
  k.c2 = a == b ? kInf : std::numbers::ln2 / std::abs(std::log(a) - std::log(b));
  if (k.c2 <= k.c1) {
    k.regime = AltRegime::I;
  } else if (k.c2 >= 2) {
    k.regime = AltRegime::II;
  } else {
    k.regime = AltRegime::III;
  }
  return k;
}

/// max(a,b)^alpha - 2 min(a,b)^alpha.
inline double alt_example_g(double a, double b, double alpha) {
  return std::pow(std::max(a, b), alpha) - 2 * std::pow(std::min(a, b), alpha);
}

/// Large-h limits of the representation, order 123, 12|3, 13|2, 1|23, 1|2|3.
inline std::array<double, 5> alt_example_q_limits(double a, double b, double alpha) {
  detail::require(2 * std::pow(a, alpha) + 2 * std::pow(b, alpha) <= 1.0,
                  "alt_example_q_limits: need 2a^alpha + 2b^alpha <= 1");
  const double m = 2 * std::pow(std::min(a, b), alpha);
  return {1 - 2 * std::pow(a, alpha) - 2 * std::pow(b, alpha), m, m, m, 2 * alt_example_g(a, b, alpha)};
}

}  // namespace dcrep
