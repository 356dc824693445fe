#include <gtest/gtest.h>

#include "dcrep/conditions.hpp"
#include "oracles.hpp"

using namespace dcrep;

namespace {

Eigen::MatrixXd principal(const Eigen::MatrixXd& A, const std::vector<int>& S) {
  const auto k = static_cast<Eigen::Index>(S.size());
  Eigen::MatrixXd B(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) B(i, j) = A(S[i], S[j]);
  return B;
}

Eigen::MatrixXd savage_counterexample() {
  Eigen::MatrixXd A(4, 4);
  A << 1, 0.81, 0.51, 0.4,  //
      0.81, 1, 0.3, 0.5,    //
      0.51, 0.3, 1, 0.5,    //
      0.4, 0.5, 0.5, 1;
  return A;
}

}  // namespace

TEST(Dgff, FamiliesAccepted) {
  for (double a : {0.1, 0.5, 0.9})
    for (int n : {2, 3, 5, 8}) {
      EXPECT_TRUE(is_dgff(CovarianceSpec::fully_symmetric(n, a)).ok);
      EXPECT_TRUE(is_dgff(CovarianceSpec::markov_chain(n, a)).ok);
    }
}

TEST(Dgff, SavageVectorsOfFamilies) {
  const double a = 0.42;
  const int n = 6;
  const auto fs = savage_vector(CovarianceSpec::fully_symmetric(n, a).matrix());
  for (int j = 0; j < n; ++j) EXPECT_NEAR(fs(j), 1 / (1 + (n - 1) * a), 1e-12);
  const auto mk = savage_vector(CovarianceSpec::markov_chain(n, a).matrix());
  for (int j = 0; j < n; ++j) EXPECT_NEAR(mk(j), (j == 0 || j == n - 1) ? 1 / (1 + a) : (1 - a) / (1 + a), 1e-12);
}

TEST(Dgff, BlockStructure) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(4, 4);
  A(0, 1) = A(1, 0) = 0.5;
  A(2, 3) = A(3, 2) = 0.3;
  const auto r = is_dgff(CovarianceSpec(A));
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.blocks.size(), 2u);
  A(0, 2) = A(2, 0) = -0.1;
  EXPECT_FALSE(is_dgff(CovarianceSpec(A)).ok);
}

TEST(Dgff, HeredityOnRandomInverseStieltjes) {
  Rng rng(41);
  int checked = 0;
  while (checked < 200) {
    const int n = 3 + static_cast<int>(rng.uniform() * 4);
    const Eigen::MatrixXd B = oracle::random_stieltjes(n, rng);
    const CovarianceSpec cov(Eigen::MatrixXd(B.inverse()));
    const auto d = is_dgff(cov);
    if (!d.ok || d.blocks.size() != 1) continue;
    ++checked;
    for (std::uint32_t mask = 1; mask < (1u << n) - 1; ++mask) {
      std::vector<int> S;
      for (int i = 0; i < n; ++i)
        if ((mask >> i) & 1u) S.push_back(i);
      const CovarianceSpec sub(principal(cov.matrix(), S));
      EXPECT_TRUE(is_inverse_stieltjes(sub).ok);
      EXPECT_NE(savage_class(savage_vector(sub.matrix())), Savage::Fails);
    }
  }
}

TEST(Dgff, SavageEqualitiesAndQuadraticMonotone) {
  Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    const int n = 3 + t % 4;
    const Eigen::MatrixXd B = oracle::random_stieltjes(n, rng);
    const Eigen::MatrixXd A = B.inverse();
    const Eigen::VectorXd sv = savage_vector(A);
    for (int k = 0; k < n; ++k) {
      std::vector<int> S;
      for (int i = 0; i < n; ++i)
        if (i != k) S.push_back(i);
      const Eigen::VectorXd sub = savage_vector(principal(A, S));
      for (std::size_t jj = 0; jj < S.size(); ++jj) {
        const int j = S[jj];
        EXPECT_NEAR(sub(static_cast<Eigen::Index>(jj)), sv(j) - sv(k) * B(j, k) / B(k, k), 1e-8);
        EXPECT_GE(sub(static_cast<Eigen::Index>(jj)), sv(j) - 1e-10);
      }
      EXPECT_LE(sub.sum(), sv.sum() + 1e-10);
    }
  }
}

TEST(Savage, CounterexampleNeedsInverseStieltjes) {
  const CovarianceSpec cov(savage_counterexample());
  EXPECT_TRUE(cov.is_pd());
  EXPECT_EQ(savage_class(savage_vector(cov.matrix())), Savage::Strict);
  EXPECT_EQ(savage_class(savage_vector(principal(cov.matrix(), {0, 1, 2}))), Savage::Fails);
  EXPECT_FALSE(is_inverse_stieltjes(cov).ok);
}

TEST(Savage, ThreePointClosedForm) {
  Rng rng(43);
  for (int t = 0; t < 200; ++t) {
    const auto c = CovarianceSpec::from_correlations3(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9));
    if (!c.is_pd()) continue;
    const auto r = savage_report(c);
    EXPECT_NEAR(r.savage_vector(0), r.savage1_closed_form, 1e-10 * std::max(1.0, std::abs(r.savage1_closed_form)));
  }
}

TEST(LargeH3, ReferenceExamples) {
  const auto a = classify_large_h_3(CovarianceSpec::from_correlations3(0.1, 0.5, 0.5));
  EXPECT_EQ(a.verdict, LargeH::ColorForLargeH);
  EXPECT_EQ(a.case_tag, "i");
  EXPECT_EQ(classify_large_h_3(CovarianceSpec::from_correlations3(0.05, 0.6825, 0.6825)).verdict,
            LargeH::NotColorForLargeH);
  const auto z = classify_large_h_3(CovarianceSpec::from_correlations3(0.0, 0.5, 0.5));
  EXPECT_EQ(z.verdict, LargeH::NotColorForLargeH);
  EXPECT_EQ(z.case_tag, "zero-cov");
}

TEST(LargeH3, CasesAgreeWithSavageReport) {
  Rng rng(44);
  for (int t = 0; t < 500; ++t) {
    const auto c = CovarianceSpec::from_correlations3(rng.uniform(0.01, 0.95), rng.uniform(0.01, 0.95), rng.uniform(0.01, 0.95));
    if (!c.is_pd()) continue;
    const auto v = classify_large_h_3(c);
    const auto s = savage_report(c);
    if (v.case_tag == "i") {
      EXPECT_EQ(s.savage, Savage::Strict);
    }
    if (v.case_tag == "iii") {
      EXPECT_EQ(s.savage, Savage::Fails);
      EXPECT_EQ(v.verdict == LargeH::ColorForLargeH, s.quadratic < 2.0);
    }
  }
}

TEST(LargeH3, CaseTwoBoundary) {
  // b = 2a - 1 puts the first Savage coordinate at zero.
  const auto v = classify_large_h_3(CovarianceSpec::ab_matrix(0.75, 0.5));
  EXPECT_EQ(v.case_tag, "ii");
  EXPECT_EQ(v.verdict, LargeH::ColorForLargeH);
}

TEST(Degenerate, SquareConfiguration) {
  const auto v = classify_degenerate(CovarianceSpec::sphere_square(std::numbers::pi / 4));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, DegenerateKind::NotColorForLargeH);
}

TEST(Degenerate, ThreePointsOnACircle) {
  Eigen::MatrixXd P(3, 2);
  P << 1, 0, std::cos(0.4), std::sin(0.4), std::cos(1.0), std::sin(1.0);
  const auto v = classify_degenerate(covariance_from_points(P));
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].kind, DegenerateKind::NotColorAnyPositiveH);
  EXPECT_EQ(v[0].required, 7u ^ v[0].forbidden);
  EXPECT_TRUE(classify_degenerate(CovarianceSpec::fully_symmetric(3, 0.3)).empty());
}

TEST(AbRegion, KnownPoints) {
  EXPECT_FALSE(ab_region_classify(0.9, 0.5).pd);
  const auto a = ab_region_classify(0.3, 0.2);
  EXPECT_TRUE(a.pd);
  EXPECT_TRUE(a.large_h_color);
  EXPECT_FALSE(ab_region_classify(0.8, 0.3).large_h_color);
  EXPECT_TRUE(ab_region_classify(0.5, 0.25).markov_boundary);
}

TEST(AbRegion, BoundaryIsStrict) {
  // b = (2a - 1)^2 exactly: the quadratic form equals 2.
  for (double a : {0.75, 0.625, 0.875}) {
    const double b = (2 * a - 1) * (2 * a - 1);
    EXPECT_FALSE(ab_region_classify(a, b).large_h_color) << a;
    EXPECT_FALSE(ab_large_h_color_formula(a, b)) << a;
  }
}

TEST(AbRegion, MatrixClassifierMatchesFormula) {
  for (double a = 0.01; a < 1; a += 0.02)
    for (double b = 0.01; b < 1; b += 0.02) {
      const auto r = ab_region_classify(a, b);
      if (!r.pd) continue;
      EXPECT_EQ(r.large_h_color, ab_large_h_color_formula(a, b)) << a << " " << b;
    }
}
