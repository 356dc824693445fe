#include <gtest/gtest.h>

#include "dcrep/dc_solver.hpp"
#include "dcrep/gaussian_law.hpp"
#include "oracles.hpp"

using namespace dcrep;

namespace {

// q1_2_3 etc. in enumeration order matches partitions_of(3).
std::array<double, 5> as_rep_order(const PartitionDistribution& q) {
  return {q.weight("123"), q.weight("12|3"), q.weight("13|2"), q.weight("1|23"), q.weight("1|2|3")};
}

}  // namespace

TEST(SignedRep3, EnumerationOrder) {
  const auto& parts = partitions_of(3);
  ASSERT_EQ(parts.size(), 5u);
  EXPECT_EQ(parts[0].key(), "123");
  EXPECT_EQ(parts[1].key(), "12|3");
  EXPECT_EQ(parts[2].key(), "13|2");
  EXPECT_EQ(parts[3].key(), "1|23");
  EXPECT_EQ(parts[4].key(), "1|2|3");
}

TEST(SignedRep3, RoundTripRandom) {
  Rng rng(31);
  for (int t = 0; t < 300; ++t) {
    const auto q = PartitionDistribution::random(3, rng);
    const double p = rng.uniform(0.05, 0.45) + (t % 2 ? 0.5 : 0.0);
    const auto r = signed_rep_3(push_forward(q, p));
    const auto want = as_rep_order(q);
    const auto got = r.as_array();
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
    EXPECT_TRUE(r.feasible);
  }
}

TEST(SignedRep3, SignedImageInverts) {
  // A signed q still has a unique preimage; feasibility is reported false.
  const PartitionDistribution q(3, {0.5, 0.3, 0.3, -0.2, 0.1}, true);
  const BinaryLaw nu(3, apply_color_map(q, 0.3));
  const auto r = signed_rep_3(nu);
  EXPECT_NEAR(r.q1_23, -0.2, 1e-12);
  EXPECT_FALSE(r.feasible);
}

TEST(SignedRep3, RejectsHalfAndUnequalMarginals) {
  EXPECT_THROW(signed_rep_3(BinaryLaw::product(3, 0.5)), DomainError);
  EXPECT_THROW(signed_rep_3(BinaryLaw(3, {0.2, 0.2, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1})), DomainError);
}

TEST(SymmetricFamily, IntervalMatchesAngles) {
  const auto c = CovarianceSpec::from_correlations3(0.3, 0.5, 0.4);
  const auto fam = symmetric_rep_family_3(zero_threshold_law_3(c));
  const auto [lo, hi] = symmetric_family_interval_angles(c.angle(0, 1), c.angle(0, 2), c.angle(1, 2));
  EXPECT_NEAR(fam.t_lo, lo, 1e-12);
  EXPECT_NEAR(fam.t_hi, hi, 1e-12);
  EXPECT_FALSE(fam.empty());
  // Every member pushes forward to the law.
  const auto nu = zero_threshold_law_3(c);
  for (double t : {fam.t_lo, 0.5 * (fam.t_lo + fam.t_hi), fam.t_hi}) {
    const auto r = fam.at(t);
    EXPECT_NEAR(r.sum(), 1.0, 1e-12);
    const auto img = apply_color_map(r.distribution(), 0.5);
    for (std::uint32_t k = 0; k < 8; ++k) EXPECT_NEAR(img[k], nu[k], 1e-12);
  }
}

TEST(LpFeasibility, AgreesWithExactRationalLp) {
  Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    // Random law with marginals p = 1/3 from a random signed 3-point q.
    std::array<long, 5> w{};
    long total = 0;
    for (auto& v : w) total += (v = static_cast<long>(rng.uniform() * 20) - 3);
    w[0] += 60 - total;
    std::vector<Rational> qw;
    for (long v : w) qw.emplace_back(v, 60);
    const Rational p(1, 3);
    std::vector<Rational> nu(8, Rational(0));
    const auto& parts = partitions_of(3);
    for (std::size_t j = 0; j < 5; ++j)
      for (std::uint32_t c = 0; c < (1u << parts[j].block_count()); ++c) {
        Rational m(1);
        for (int b = 0; b < parts[j].block_count(); ++b) m *= ((c >> b) & 1u) ? p : Rational(1 - p);
        nu[parts[j].pattern(c)] += qw[j] * m;
      }
    bool nonneg = true;
    for (const auto& v : nu) nonneg = nonneg && v >= 0;
    if (!nonneg) continue;
    const auto ex = lp_feasibility_exact(3, nu, p);
    std::vector<double> nd;
    for (const auto& v : nu) nd.push_back(static_cast<double>(v));
    const auto fl = lp_feasibility(BinaryLaw(3, nd), 1.0 / 3, TolPolicy::exact());
    EXPECT_EQ(ex.feasible, fl.status == FeasibilityStatus::Feasible);
    bool qnonneg = true;
    for (const auto& v : qw) qnonneg = qnonneg && v >= 0;
    EXPECT_EQ(ex.feasible, qnonneg);
  }
}

TEST(LpFeasibility, FarkasCertificateSeparates) {
  const PartitionDistribution q(3, {0.5, 0.3, 0.3, -0.2, 0.1}, true);
  const BinaryLaw nu(3, apply_color_map(q, 0.3));
  const auto r = lp_feasibility(nu, 0.3, TolPolicy::exact());
  ASSERT_EQ(r.status, FeasibilityStatus::Infeasible);
  ASSERT_EQ(r.certificate.size(), 8u);
  const auto A = color_map(3, 0.3);
  double ynu = 0.0;
  for (int i = 0; i < 8; ++i) ynu += r.certificate[i] * nu[i];
  for (int j = 0; j < 5; ++j) {
    double col = 0.0;
    for (int i = 0; i < 8; ++i) col += r.certificate[i] * A(i, j);
    EXPECT_LE(col, 1e-9);
  }
  EXPECT_GT(ynu, 1e-9);
}

TEST(LpFeasibility, ReturnsAValidRepresentation) {
  Rng rng(33);
  for (int n = 2; n <= 5; ++n) {
    const auto q = PartitionDistribution::random(n, rng);
    const auto nu = push_forward(q, 0.4);
    const auto r = lp_feasibility(nu);
    ASSERT_EQ(r.status, FeasibilityStatus::Feasible) << n;
    EXPECT_LT(r.residual, 1e-10);
  }
}

TEST(LpFeasibility, MonteCarloRelaxation) {
  Rng rng(34);
  const auto q = PartitionDistribution::random(3, rng);
  const auto sim = simulate_color_process(q, 0.5, 100000, 35);
  const auto r = lp_feasibility(sim.law);
  EXPECT_EQ(r.status, FeasibilityStatus::Feasible);
  EXPECT_LE(r.margin, 3.0);
  ASSERT_TRUE(r.q.has_value());
  EXPECT_TRUE(r.q->is_probability());
}

TEST(SquareCircle, FeasibleUpToQuarterPi) {
  for (double th : {0.3, 0.6, std::numbers::pi / 4}) {
    const auto r = square_circle_solver(square_law_zero(th));
    EXPECT_EQ(r.status, FeasibilityStatus::Feasible) << th;
    ASSERT_TRUE(r.q.has_value());
    EXPECT_LT(r.residual, 1e-9);
  }
  for (double th : {0.9, 1.2}) EXPECT_EQ(square_circle_solver(square_law_zero(th)).status, FeasibilityStatus::Infeasible);
}

TEST(SquareCircle, AgreesWithGenericLp) {
  for (double th : {0.5, 0.7, 0.85, 1.0}) {
    const auto nu = square_law_zero(th);
    const auto a = square_circle_solver(nu).status == FeasibilityStatus::Feasible;
    const auto b = lp_feasibility(nu).status != FeasibilityStatus::Infeasible;
    EXPECT_EQ(a, b) << th;
  }
}

TEST(SymmetricPlusMean, GapValue) {
  EXPECT_NEAR(symmetric_plus_mean_gap(4), std::numbers::pi / 3 - std::asin(std::sqrt(2.0 / 3)), 1e-15);
  EXPECT_NEAR(symmetric_plus_mean_gap(4), 0.0918809, 1e-7);
  EXPECT_NEAR(symmetric_plus_mean_gap(3), 0.0, 1e-15);
  EXPECT_GT(symmetric_plus_mean_gap(6), symmetric_plus_mean_gap(4));
}

TEST(QuickSufficient, ZeroCellQuarter) {
  EXPECT_EQ(quick_sufficient_symmetric(zero_threshold_law_3(CovarianceSpec::fully_symmetric(3, 0.9))), Verdict::ColorRep);
  EXPECT_EQ(quick_sufficient_symmetric(BinaryLaw::product(3, 0.5)), Verdict::Undetermined);
  EXPECT_THROW(quick_sufficient_symmetric(BinaryLaw::product(3, 0.3)), DomainError);
}
