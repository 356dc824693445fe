#include <gtest/gtest.h>

#include "dcrep/gaussian_law.hpp"
#include "oracles.hpp"

using namespace dcrep;

namespace {

CovarianceSpec random_pd3(Rng& rng) {
  for (;;) {
    const auto c = CovarianceSpec::from_correlations3(rng.uniform(-0.95, 0.95), rng.uniform(-0.95, 0.95),
                                                      rng.uniform(-0.95, 0.95));
    if (c.is_pd() && c.eigenvalues().minCoeff() > 1e-3) return c;
  }
}

}  // namespace

TEST(Bivariate, RelativeAccuracyDeepInTail) {
  for (double a : {-0.7, 0.0, 0.4, 0.95})
    for (double h : {5.0, 8.0, 12.0})
      EXPECT_NEAR(bivariate_threshold_exact(a, h) / oracle::bivariate_upper_quad(a, h), 1.0, 1e-12) << a << " " << h;
}

TEST(Bivariate, SheppardAtZero) {
  for (double a : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
    EXPECT_NEAR(bivariate_threshold_exact(a, 0.0), 0.5 - std::acos(a) / (2 * std::numbers::pi), 1e-12);
    EXPECT_NEAR(sheppard_pair(a), 0.5 - std::acos(a) / (2 * std::numbers::pi), 1e-15);
  }
}

TEST(Bivariate, MatchesOwensT) {
  for (double a : {-0.7, 0.0, 0.3, 0.8, 0.95})
    for (double h : {-1.0, 0.5, 1.5, 3.0, 5.0}) {
      const double ref = oracle::bivariate_upper(a, h);
      EXPECT_NEAR(bivariate_threshold_exact(a, h), ref, 1e-11 * std::max(1.0, 1.0 / ref) * ref + 1e-15)
          << "a=" << a << " h=" << h;
      // The Owen T form cancels down to about eps * sf(h); the quadrature does not.
      EXPECT_NEAR(oracle::bivariate_upper_quad(a, h), ref, 1e-13 * oracle::normal_sf(h)) << "a=" << a << " h=" << h;
    }
}

TEST(Bivariate, PairClusterWeight) {
  // P(X1 = X2) = 1 - arccos(a)/pi equals q(12) + (1 - q(12))/2.
  for (double a : {0.1, 0.5, 0.9}) {
    const double w = pair_cluster_weight(a);
    EXPECT_NEAR(w + (1 - w) / 2, 1 - std::acos(a) / std::numbers::pi, 1e-15);
  }
}

TEST(Trivariate, ZeroThresholdLawMatchesInclusionExclusion) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const auto c = random_pd3(rng);
    const auto ref = oracle::trivariate_law0(c(0, 1), c(0, 2), c(1, 2));
    const auto nu = zero_threshold_law_3(c);
    for (std::uint32_t r = 0; r < 8; ++r) EXPECT_NEAR(nu[r], ref[r], 1e-13);
  }
}

TEST(Trivariate, CoplanarRankTwoAllowed) {
  // theta13 = theta12 + theta23: three unit vectors in a plane.
  const auto c = CovarianceSpec::from_correlations3(std::cos(0.3), std::cos(0.5), std::cos(0.2));
  EXPECT_EQ(c.rank(), 2);
  const auto nu = zero_threshold_law_3(c);
  const auto ref = oracle::trivariate_law0(c(0, 1), c(0, 2), c(1, 2));
  for (std::uint32_t r = 0; r < 8; ++r) EXPECT_NEAR(nu[r], std::max(ref[r], 0.0), 1e-12);
}

TEST(MonteCarlo, AgreesWithExactLaw) {
  const auto c = CovarianceSpec::from_correlations3(0.3, 0.6, -0.2);
  const auto mc = threshold_law_mc(c, 0.0, 200000, 5);
  const auto ex = zero_threshold_law_3(c);
  for (std::uint32_t r = 0; r < 8; ++r) EXPECT_LT(std::abs(mc[r] - ex[r]), 5 * mc.stderr_at(r));
}

TEST(MonteCarlo, PositiveThresholdBivariate) {
  const auto c = CovarianceSpec::from_correlations3(0.6, 0.0, 0.0);
  const auto mc = threshold_law_mc(c, 1.0, 400000, 6).marginalize({0, 1});
  const double ref = oracle::bivariate_upper(0.6, 1.0);
  EXPECT_LT(std::abs(mc[3] - ref), 5 * mc.stderr_at(3));
}

TEST(MonteCarlo, SeedDeterminism) {
  const auto c = CovarianceSpec::fully_symmetric(4, 0.4);
  const auto a = threshold_law_mc(c, 0.2, 1000, 99), b = threshold_law_mc(c, 0.2, 1000, 99);
  EXPECT_EQ(a.probs(), b.probs());
}

TEST(Covariance, FamiliesAndInverses) {
  const double a = 0.37;
  const int n = 5;
  const auto fs = CovarianceSpec::fully_symmetric(n, a);
  const double den = (1 - a) * (1 + (n - 1) * a);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      EXPECT_NEAR(fs.inverse()(i, j), i == j ? (1 + (n - 2) * a) / den : -a / den, 1e-12);
  const auto mk = CovarianceSpec::markov_chain(n, a);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double e = 0.0;
      if (i == j) e = (i == 0 || i == n - 1) ? 1 / (1 - a * a) : (1 + a * a) / (1 - a * a);
      else if (std::abs(i - j) == 1) e = -a / (1 - a * a);
      EXPECT_NEAR(mk.inverse()(i, j), e, 1e-12);
    }
}

TEST(Covariance, SymmetricPlusMean) {
  const auto c = CovarianceSpec::symmetric_plus_mean(4, 0.0);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(c(i, 3), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(c.rank(), 3);
  EXPECT_FALSE(c.is_pd());
}

TEST(Covariance, SphereSquareIsRankTwo) {
  const auto c = CovarianceSpec::sphere_square(std::numbers::pi / 4);
  EXPECT_EQ(c.rank(), 3);
  EXPECT_EQ(c.n(), 4);
  EXPECT_EQ(CovarianceSpec::sphere_square(0.3).null_space().cols(), 1);
}

TEST(Covariance, RejectsNonSymmetric) {
  Eigen::MatrixXd A(2, 2);
  A << 1, 0.5, 0.4, 1;
  EXPECT_THROW(CovarianceSpec{A}, DomainError);
}

TEST(TailAsymptote, ExponentAndPattern) {
  const auto c = CovarianceSpec::fully_symmetric(3, 0.5);
  const auto t = tail_asymptote(c, 0b111, 4.0);
  EXPECT_EQ(t.status, TailStatus::Value);
  EXPECT_NEAR(t.exponent, 0.5 * 3 / (1 + 2 * 0.5), 1e-12);
  EXPECT_GT(t.value, 0.0);
  const auto zero = tail_asymptote(CovarianceSpec::ab_matrix(0.75, 0.5), 0b111, 4.0);
  EXPECT_EQ(zero.status, TailStatus::UseHalfRatio);
}

TEST(TailAsymptote, BivariateRatioTendsToOne) {
  const double a = 0.4;
  Eigen::MatrixXd A(2, 2);
  A << 1, a, a, 1;
  const CovarianceSpec c(A);
  double prev = 1e9;
  for (double h : {4.0, 8.0, 16.0}) {
    const double ratio = tail_asymptote(c, 0b11, h).value / oracle::bivariate_upper_quad(a, h);
    EXPECT_LT(std::abs(ratio - 1), prev);
    prev = std::abs(ratio - 1);
  }
  EXPECT_LT(prev, 0.02);
}
