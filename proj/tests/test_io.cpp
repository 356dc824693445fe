#include <gtest/gtest.h>

#include <sstream>

#include "dcrep/io.hpp"

using namespace dcrep;

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3, -2.5e-300, 123456789.125, 0.0}) EXPECT_EQ(std::stod(io::format_double(v)), v);
  EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::format_double(std::nan("")), "nan");
}

TEST(Io, NonFiniteNumbersReadBack) {
  EXPECT_TRUE(std::isinf(io::get_number(io::json("inf"))));
  EXPECT_THROW(io::get_number(io::json("seven")), DomainError);
}

TEST(Io, BinaryLawRoundTrip) {
  const auto nu = empirical_law(2, {10, 20, 30, 40});
  const auto back = io::binary_law_from_json(io::json::parse(io::to_json(nu).dump()));
  EXPECT_EQ(back.probs(), nu.probs());
  EXPECT_EQ(back.stderr_vec(), nu.stderr_vec());
  EXPECT_EQ(io::to_json(nu)["probs"].begin().key(), "00");
}

TEST(Io, CovarianceForms) {
  const auto a = io::covariance_from_json(io::json::parse(R"({"n":3,"a":[0.1,0.5,0.5]})"));
  EXPECT_DOUBLE_EQ(a(0, 1), 0.1);
  EXPECT_DOUBLE_EQ(a(1, 2), 0.5);
  const auto b = io::covariance_from_json(io::json::parse(R"({"a":[[1,0.2],[0.2,1]]})"));
  EXPECT_EQ(b.n(), 2);
  const auto c = io::covariance_from_json(io::json::parse(R"({"family":"markov","n":4,"a":0.5})"));
  EXPECT_DOUBLE_EQ(c(0, 3), 0.125);
  EXPECT_THROW(io::covariance_from_json(io::json::parse(R"({"family":"nope"})")), DomainError);
  EXPECT_THROW(io::covariance_from_json(io::json::parse(R"({"n":3,"a":[0.1]})")), DomainError);
}

TEST(Io, StableModelForms) {
  const auto m = io::stable_model_from_json(io::json::parse(R"({"family":"common_factor","a":0.5,"alpha":0.7})"));
  EXPECT_EQ(m.d(), 3);
  const auto e = io::stable_model_from_json(io::json::parse(R"({"alpha":1.5,"loadings":[[1,0],[0.5,0.5]]})"));
  EXPECT_EQ(e.m(), 2);
}

TEST(Io, FeasibilityJson) {
  const auto r = lp_feasibility(BinaryLaw::product(3, 0.3));
  const auto j = io::to_json(r);
  EXPECT_EQ(j["status"], "Feasible");
  EXPECT_TRUE(j.contains("representation"));
}

TEST(Io, CsvQuoting) {
  std::ostringstream os;
  io::CsvWriter w(os, {"a", "b,c"});
  w.row(1.5, std::string("x\"y"));
  w.row(2, true);
  EXPECT_EQ(os.str(), "a,\"b,c\"\n1.5,\"x\"\"y\"\n2,1\n");
  EXPECT_THROW(w.row(1), SizeError);
}
