#pragma once

// Reference computations that share no code path with the library. Each one
// takes a different route to the same quantity: brute enumeration instead of
// block colorings, Owen's T instead of quadrature, derivatives of orthant
// probabilities instead of the small-h closed forms.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/owens_t.hpp>
#include <Eigen/Dense>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// Bell numbers from the Bell triangle: row n starts with the last entry of row n - 1.
inline std::vector<std::uint64_t> bell_triangle(int nmax) {
  std::vector<std::uint64_t> out{1};
  std::vector<std::uint64_t> row{1};
  for (int n = 1; n <= nmax; ++n) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = next;
    out.push_back(row.front());
  }
  return out;
}

/// Restricted growth strings of length n: label[0] = 0, label[i] <= 1 + max(previous).
inline std::vector<std::vector<int>> growth_strings(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  auto rec = [&](auto&& self, int i, int mx) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= mx + 1; ++v) {
      cur[i] = v;
      self(self, i + 1, std::max(mx, v));
    }
  };
  if (n > 0) rec(rec, 1, 0);
  return out;
}

/// P(pattern | labels, p) by scanning all 2^n patterns and checking block constancy.
inline std::vector<double> brute_color_column(const std::vector<int>& labels, double p) {
  const int n = static_cast<int>(labels.size());
  std::vector<double> col(std::size_t{1} << n, 0.0);
  for (std::uint32_t rho = 0; rho < (1u << n); ++rho) {
    bool constant = true;
    int ones = 0, blocks = 0;
    std::vector<int> seen(n, -1);
    for (int i = 0; i < n && constant; ++i) {
      const int b = labels[i];
      const int bit = (rho >> i) & 1u;
      if (seen[b] < 0) {
        seen[b] = bit;
        ++blocks;
        ones += bit;
      } else if (seen[b] != bit) {
        constant = false;
      }
    }
    if (constant) col[rho] = std::pow(p, ones) * std::pow(1 - p, blocks - ones);
  }
  return col;
}

inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double phi0() { return 1.0 / std::sqrt(2 * kPi); }

/// P(X > h, Y > h) for a standard pair with correlation r (Owen's T form).
inline double bivariate_upper(double r, double h) {
  return normal_sf(h) - 2 * boost::math::owens_t(h, std::sqrt((1 - r) / (1 + r)));
}

/// Same quantity by conditioning on the first coordinate; no cancellation, so
/// it stays accurate deep in the tail.
inline double bivariate_upper_quad(double r, double h) {
  const double s = std::sqrt(1 - r * r);
  auto f = [&](double t) {
    const double x = h + t;
    return std::exp(-0.5 * x * x) / std::sqrt(2 * kPi) * normal_sf((h - r * x) / s);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 40.0 / (1 + h), 20, 1e-13);
}

/// Zero-threshold trivariate orthant probability, arcsin form.
inline double trivariate_orthant0(double a12, double a13, double a23) {
  return 0.125 + (std::asin(a12) + std::asin(a13) + std::asin(a23)) / (4 * kPi);
}

/// Law of I(X > 0) for a standard trivariate Gaussian, by inclusion-exclusion
/// over upper orthants. Index bit i is coordinate i.
inline std::array<double, 8> trivariate_law0(double a12, double a13, double a23) {
  const double r[3][3] = {{1, a12, a13}, {a12, 1, a23}, {a13, a23, 1}};
  auto upper = [&](std::uint32_t S) -> double {
    const int k = std::popcount(S);
    if (k == 0) return 1.0;
    if (k == 1) return 0.5;
    if (k == 2) {
      int i = std::countr_zero(S), j = 31 - std::countl_zero(S);
      return 0.25 + std::asin(r[i][j]) / (2 * kPi);
    }
    return trivariate_orthant0(a12, a13, a23);
  };
  std::array<double, 8> nu{};
  for (std::uint32_t rho = 0; rho < 8; ++rho) {
    double s = 0.0;
    for (std::uint32_t T = 0; T < 8; ++T) {
      if ((T & rho) != rho) continue;
      s += ((std::popcount(T ^ rho) & 1) ? -1.0 : 1.0) * upper(T);
    }
    nu[rho] = s;
  }
  return nu;
}

/// d/dh at h = 0 of the law of I(X > h), from d/dh P(X_S > h) =
/// -phi(0) sum_{i in S} P(X_{S-i} > 0 | X_i = 0), the conditional law being
/// centered with partial correlations.
inline std::array<double, 8> trivariate_law0_derivative(double a12, double a13, double a23) {
  const double r[3][3] = {{1, a12, a13}, {a12, 1, a23}, {a13, a23, 1}};
  auto dupper = [&](std::uint32_t S) -> double {
    const int k = std::popcount(S);
    if (k == 0) return 0.0;
    if (k == 1) return -phi0();
    if (k == 2) return -2 * phi0() * 0.5;
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, l = (i + 2) % 3;
      const double partial = (r[j][l] - r[i][j] * r[i][l]) / std::sqrt((1 - r[i][j] * r[i][j]) * (1 - r[i][l] * r[i][l]));
      s += 0.25 + std::asin(partial) / (2 * kPi);
    }
    return -phi0() * s;
  };
  std::array<double, 8> d{};
  for (std::uint32_t rho = 0; rho < 8; ++rho) {
    double s = 0.0;
    for (std::uint32_t T = 0; T < 8; ++T) {
      if ((T & rho) != rho) continue;
      s += ((std::popcount(T ^ rho) & 1) ? -1.0 : 1.0) * dupper(T);
    }
    d[rho] = s;
  }
  return d;
}

/// h -> 0 limits of the n = 3 signed representation, as ratios of first
/// derivatives (numerators and denominator vanish at h = 0).
/// Order: 123, 12|3, 13|2, 1|23, 1|2|3.
inline std::array<double, 5> small_h_limits(double a12, double a13, double a23) {
  const auto v = trivariate_law0(a12, a13, a23);
  const auto dv = trivariate_law0_derivative(a12, a13, a23);
  const double dp = -phi0();
  // D = (1 - p) p (1 - 2p), D'(0) = 1/4 * (-2 dp).
  const double dD = -0.5 * dp;
  // (1-p) v_a - p v_b at h = 0 vanishes when v_a = v_b; derivative by the product rule.
  auto dmix = [&](int a, int b) { return -dp * v[a] + 0.5 * dv[a] - dp * v[b] - 0.5 * dv[b]; };
  const int b000 = 0, b001 = 0b100, b010 = 0b010, b100 = 0b001, b011 = 0b110, b101 = 0b101, b110 = 0b011,
            b111 = 0b111;
  // key "xyz" has x at bit 0, so "110" is bits 0 and 1.
  std::array<double, 5> q{};
  q[4] = (dv[b100] - dv[b011]) / dD;
  q[1] = dmix(b110, b001) / dD;
  q[2] = dmix(b101, b010) / dD;
  q[3] = dmix(b011, b100) / dD;
  // p v000 - (1-p) v111
  const double dn = dp * v[b000] + 0.5 * dv[b000] + dp * v[b111] - 0.5 * dv[b111];
  q[0] = 1.0 - dn / dD;
  return q;
}

/// Random symmetric positive definite Stieltjes matrix B (nonpositive off
/// diagonal, nonnegative row sums), so A = B^{-1} is inverse Stieltjes with
/// weak Savage.
template <class Rng>
Eigen::MatrixXd random_stieltjes(int n, Rng& rng, double density = 0.7) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      // a path keeps the graph connected
      if (j == i + 1 || rng.uniform() < density) B(i, j) = B(j, i) = -rng.uniform(0.05, 1.0);
    }
  for (int i = 0; i < n; ++i) B(i, i) = -B.row(i).sum() + rng.uniform(0.0, 0.5);
  return B;
}

}  // namespace oracle
