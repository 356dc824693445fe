#include <gtest/gtest.h>

#include <set>

#include "dcrep/partitions.hpp"
#include "oracles.hpp"

using namespace dcrep;

TEST(Partitions, BellNumbersMatchTriangle) {
  const auto bell = oracle::bell_triangle(kMaxPartitionN);
  for (int n = 1; n <= kMaxPartitionN; ++n) EXPECT_EQ(bell_number(n), bell[n]) << "n=" << n;
  EXPECT_EQ(bell_number(12), 4213597u);
}

TEST(Partitions, EnumerationMatchesGrowthStrings) {
  for (int n = 1; n <= 7; ++n) {
    std::set<std::string> expect;
    for (const auto& g : oracle::growth_strings(n)) expect.insert(Partition(g).key());
    std::set<std::string> got;
    for (const auto& s : partitions_of(n)) got.insert(s.key());
    EXPECT_EQ(got, expect) << "n=" << n;
    EXPECT_EQ(partitions_of(n).size(), bell_number(n));
  }
}

TEST(Partitions, IndexIsInverseOfEnumeration) {
  const auto& parts = partitions_of(6);
  for (std::size_t j = 0; j < parts.size(); ++j) EXPECT_EQ(partition_index(parts[j]), j);
}

TEST(Partitions, ParseAndKeyRoundTrip) {
  for (const char* k : {"123", "12|3", "13|2", "1|23", "1|2|3", "14|23", "1|2|34"}) EXPECT_EQ(Partition::parse(k).key(), k);
  EXPECT_EQ(Partition::parse("3|12").key(), "12|3");
  EXPECT_EQ(Partition({5, 5, 2}).key(), "12|3");
  const Partition big(std::vector<int>{0, 1, 0, 1, 2, 2, 2, 3, 3, 4, 0});
  EXPECT_EQ(big.n(), 11);
  EXPECT_EQ(big.block_count(), 5);
  EXPECT_EQ(big.key(), "1,3,11|2,4|5,6,7|8,9|10");
  EXPECT_EQ(Partition::parse(big.key()), big);
}

TEST(Partitions, PatternKeysRoundTrip) {
  for (int n = 1; n <= 6; ++n)
    for (std::uint32_t r = 0; r < (1u << n); ++r) EXPECT_EQ(parse_pattern(pattern_key(r, n)), r);
  EXPECT_EQ(parse_pattern("100"), 1u);
  EXPECT_EQ(parse_pattern("110"), 3u);
}

TEST(Partitions, RestrictTo) {
  const auto s = Partition::parse("13|24");
  EXPECT_EQ(s.restrict_to({0, 1, 2}).key(), "13|2");
  EXPECT_EQ(s.restrict_to({1, 3}).key(), "12");
}

TEST(Partitions, RejectsBadInput) {
  EXPECT_THROW(Partition(std::vector<int>(13, 0)), SizeError);
  EXPECT_THROW(Partition::from_blocks(3, {{0, 1}}), DomainError);
  EXPECT_THROW(Partition::from_blocks(3, {{0, 1}, {1, 2}}), DomainError);
  EXPECT_THROW(Partition::parse("12a"), DomainError);
  EXPECT_THROW(PartitionDistribution(3, {0.5, 0.5}), SizeError);
  EXPECT_THROW(PartitionDistribution(3, {1.2, -0.2, 0, 0, 0}), DomainError);
  EXPECT_THROW(PartitionDistribution(3, {0.5, 0.2, 0, 0, 0}), DomainError);
  EXPECT_NO_THROW(PartitionDistribution(3, {1.2, -0.2, 0, 0, 0}, true));
}

TEST(ColorMap, ColumnsMatchBruteForce) {
  for (int n = 1; n <= 5; ++n)
    for (double p : {0.2, 0.5, 0.7}) {
      const auto A = color_map(n, p);
      const auto& parts = partitions_of(n);
      for (std::size_t j = 0; j < parts.size(); ++j) {
        std::vector<int> labels(n);
        for (int i = 0; i < n; ++i) labels[i] = parts[j].label(i);
        const auto ref = oracle::brute_color_column(labels, p);
        for (std::size_t r = 0; r < ref.size(); ++r)
          EXPECT_NEAR(A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)), ref[r], 1e-15);
      }
    }
}

TEST(ColorMap, PushForwardIsALawWithMarginalP) {
  Rng rng(7);
  for (int n = 2; n <= 6; ++n) {
    const auto q = PartitionDistribution::random(n, rng);
    const auto nu = push_forward(q, 0.35);
    double total = 0.0;
    for (double v : nu.probs()) total += v;
    EXPECT_NEAR(total, 1.0, 1e-13);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(nu.marginal(i), 0.35, 1e-13);
  }
}

TEST(ColorMap, SymmetricAtOneHalf) {
  Rng rng(8);
  const auto nu = push_forward(PartitionDistribution::random(4, rng), 0.5);
  EXPECT_LT(nu.symmetry_defect(), 1e-15);
}

TEST(ColorMap, MarginalizationCommutes) {
  Rng rng(9);
  const auto q = PartitionDistribution::random(5, rng);
  const std::vector<int> S{0, 2, 4};
  const auto lhs = push_forward(marginalize_partition(q, S), 0.3);
  const auto rhs = push_forward(q, 0.3).marginalize(S);
  for (std::uint32_t r = 0; r < 8; ++r) EXPECT_NEAR(lhs[r], rhs[r], 1e-14);
}

TEST(ColorMap, PointMasses) {
  const auto single = push_forward(PartitionDistribution::point_mass(Partition::parse("123")), 0.3);
  EXPECT_NEAR(single.prob("111"), 0.3, 1e-15);
  EXPECT_NEAR(single.prob("000"), 0.7, 1e-15);
  const auto indep = push_forward(PartitionDistribution::point_mass(Partition::parse("1|2|3")), 0.3);
  const auto prod = BinaryLaw::product(3, 0.3);
  for (std::uint32_t r = 0; r < 8; ++r) EXPECT_NEAR(indep[r], prod[r], 1e-15);
}

TEST(ColorSimulation, MatchesPushForward) {
  Rng rng(10);
  const auto q = PartitionDistribution::random(3, rng);
  const auto sim = simulate_color_process(q, 0.4, 200000, 11);
  const auto nu = push_forward(q, 0.4);
  for (std::uint32_t r = 0; r < 8; ++r) EXPECT_LT(std::abs(sim.law[r] - nu[r]), 5 * sim.law.stderr_at(r) + 1e-5);
  const auto again = simulate_color_process(q, 0.4, 1000, 11);
  const auto again2 = simulate_color_process(q, 0.4, 1000, 11);
  EXPECT_EQ(again.samples, again2.samples);
}

TEST(BinaryLaw, ValidatesAndMarginalizes) {
  EXPECT_THROW(BinaryLaw(2, {0.5, 0.5, 0.5, 0.5}), DomainError);
  EXPECT_THROW(BinaryLaw(2, {1.0}), SizeError);
  const auto nu = BinaryLaw::product(3, 0.25);
  EXPECT_NEAR(nu.marginal_p(), 0.25, 1e-15);
  const auto m = nu.marginalize({1});
  EXPECT_NEAR(m[1], 0.25, 1e-15);
}

TEST(BinaryLaw, EmpiricalStandardErrors) {
  const auto nu = empirical_law(1, {300.0, 700.0});
  EXPECT_NEAR(nu[1], 0.7, 1e-15);
  EXPECT_NEAR(nu.stderr_at(1), std::sqrt(0.21 / 1000), 1e-15);
  EXPECT_NEAR(nu.sample_count(), 1000.0, 1e-9);
}
