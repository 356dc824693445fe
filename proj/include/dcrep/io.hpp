#pragma once

// JSON and CSV forms of the library's value types. Non-finite numbers are
// written as the strings "inf", "-inf", "nan"; JSON has no literal for them.

#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcrep/asymptotics.hpp"
#include "dcrep/conditions.hpp"
#include "dcrep/dc_solver.hpp"
#include "dcrep/error.hpp"
#include "dcrep/gaussian_law.hpp"
#include "dcrep/partitions.hpp"
#include "dcrep/stable_law.hpp"

namespace dcrep::io {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

/// 17 significant digits, "." decimal, independent of the C locale.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline ojson num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

inline double get_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw DomainError("expected a number, got " + j.dump());
}

// ---------------------------------------------------------------------------
// Laws and partition distributions

inline ojson to_json(const BinaryLaw& nu) {
  ojson probs = ojson::object(), se = ojson::object();
  for (std::uint32_t r = 0; r < (1u << nu.n()); ++r) {
    probs[pattern_key(r, nu.n())] = num(nu[r]);
    if (nu.has_stderr()) se[pattern_key(r, nu.n())] = num(nu.stderr_at(r));
  }
  ojson j{{"n", nu.n()}, {"probs", probs}};
  if (nu.has_stderr()) j["stderr"] = se;
  return j;
}

inline BinaryLaw binary_law_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  if (n < 1 || n > kMaxPartitionN) throw SizeError("law: n out of range");
  std::vector<double> probs(std::size_t{1} << n, 0.0);
  for (const auto& [k, v] : j.at("probs").items()) {
    detail::require(static_cast<int>(k.size()) == n, "law: pattern '" + k + "' has wrong length");
    probs[parse_pattern(k)] = get_number(v);
  }
  if (!j.contains("stderr")) return BinaryLaw(n, std::move(probs));
  std::vector<double> se(probs.size(), 0.0);
  for (const auto& [k, v] : j.at("stderr").items()) se[parse_pattern(k)] = get_number(v);
  return BinaryLaw(n, std::move(probs), std::move(se));
}

inline ojson to_json(const PartitionDistribution& q) {
  ojson w = ojson::object();
  for (std::size_t j = 0; j < q.support().size(); ++j) w[q.support()[j].key()] = num(q.weights()[j]);
  return ojson{{"n", q.n()}, {"signed", q.is_signed()}, {"weights", w}};
}

// ---------------------------------------------------------------------------
// Models

inline ojson matrix_json(const Eigen::MatrixXd& M) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    ojson r = ojson::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) r.push_back(num(M(i, k)));
    rows.push_back(r);
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
  detail::require(j.is_array() && !j.empty() && j[0].is_array(), "expected a matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size()), cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    detail::require(static_cast<Eigen::Index>(j[i].size()) == cols, "matrix rows have different lengths");
    for (Eigen::Index k = 0; k < cols; ++k) M(i, k) = get_number(j[i][k]);
  }
  return M;
}

inline ojson to_json(const CovarianceSpec& cov) { return ojson{{"n", cov.n()}, {"a", matrix_json(cov.matrix())}}; }

/// {"n", "a"} with "a" a full matrix or the upper-triangle correlations in
/// row order (a12, a13, ..., a23, ...); or {"family", ...} for the named models.
inline CovarianceSpec covariance_from_json(const json& j) {
  if (j.contains("family")) {
    const auto f = j.at("family").get<std::string>();
    if (f == "fully_symmetric") return CovarianceSpec::fully_symmetric(j.at("n").get<int>(), j.at("a").get<double>());
    if (f == "markov") return CovarianceSpec::markov_chain(j.at("n").get<int>(), j.at("a").get<double>());
    if (f == "symmetric_plus_mean")
      return CovarianceSpec::symmetric_plus_mean(j.at("n").get<int>(), j.value("a", 0.0));
    if (f == "sphere_square") return CovarianceSpec::sphere_square(j.at("theta").get<double>());
    if (f == "ab") return CovarianceSpec::ab_matrix(j.at("a").get<double>(), j.at("b").get<double>());
    throw DomainError("unknown covariance family '" + f + "'");
  }
  const auto& a = j.at("a");
  if (a.is_array() && !a.empty() && a[0].is_array()) {
    const auto M = matrix_from_json(a);
    if (j.contains("n")) detail::require(j.at("n").get<int>() == M.rows(), "covariance: n does not match matrix");
    return CovarianceSpec(M);
  }
  const int n = j.at("n").get<int>();
  detail::require(n >= 2 && a.is_array() && static_cast<int>(a.size()) == n * (n - 1) / 2,
                  "covariance: expected n(n-1)/2 correlations");
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
  std::size_t t = 0;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) M(i, k) = M(k, i) = get_number(a[t++]);
  return CovarianceSpec(M);
}

inline ojson to_json(const StableLinearModel& m) {
  return ojson{{"alpha", num(m.alpha())}, {"loadings", matrix_json(m.loadings())}};
}

/// {"alpha", "loadings"} or {"family", "alpha", ...} for the named models.
inline StableLinearModel stable_model_from_json(const json& j) {
  const double alpha = j.at("alpha").get<double>();
  if (j.contains("family")) {
    const auto f = j.at("family").get<std::string>();
    if (f == "independent") return StableLinearModel::independent(j.at("n").get<int>(), alpha);
    if (f == "corr2d") return StableLinearModel::corr2d(j.at("a").get<double>(), alpha);
    if (f == "common_factor") return StableLinearModel::common_factor(j.value("n", 3), j.at("a").get<double>(), alpha);
    if (f == "markov") return StableLinearModel::markov_chain(j.value("n", 3), j.at("a").get<double>(), alpha);
    if (f == "alt") return StableLinearModel::alt_example(j.at("a").get<double>(), j.at("b").get<double>(), alpha);
    throw DomainError("unknown stable family '" + f + "'");
  }
  return StableLinearModel(alpha, matrix_from_json(j.at("loadings")));
}

// ---------------------------------------------------------------------------
// Results

inline ojson to_json(const FeasibilityResult& r) {
  ojson j{{"status", to_string(r.status)}, {"margin", num(r.margin)}, {"residual", num(r.residual)}};
  if (r.q) j["representation"] = to_json(*r.q);
  if (!r.certificate.empty()) {
    ojson c = ojson::array();
    for (double v : r.certificate) c.push_back(num(v));
    j["certificate"] = c;
  }
  return j;
}

inline ojson formula_value(const std::string& id, double v) { return ojson{{"formula", id}, {"value", num(v)}}; }

inline ojson to_json(const SmallHLimits3& s) {
  return ojson{{"kappa", formula_value("small-h/kappa", s.kappa)},
               {"q123", formula_value("small-h/q123", s.q123)},
               {"q12|3", formula_value("small-h/q12,3", s.q12_3)},
               {"q13|2", formula_value("small-h/q13,2", s.q13_2)},
               {"q1|23", formula_value("small-h/q1,23", s.q1_23)},
               {"q1|2|3", formula_value("small-h/q1,2,3", s.q1_2_3)},
               {"feasible", s.feasible},
               {"verdict", to_string(s.verdict)}};
}

inline ojson to_json(const StableLimitReport& r) {
  ojson o1 = ojson::object();
  for (const auto& [k, v] : r.order1) o1[k] = formula_value("stable/order1/" + k, v);
  static const char* names[5] = {"q123", "q12|3", "q13|2", "q1|23", "q1|2|3"};
  ojson q = ojson::object();
  for (int i = 0; i < 5; ++i) q[names[i]] = formula_value(std::string("stable/q-limit/") + names[i], r.q[i]);
  return ojson{{"order1", o1},
               {"order2_101", formula_value("stable/order2/101", r.order2_101)},
               {"q_limits", q},
               {"q_sum", num(r.q_sum)}};
}

inline ojson to_json(const AltExampleConstants& k) {
  return ojson{{"c1", formula_value("alt/c1", k.c1)}, {"c2", formula_value("alt/c2", k.c2)}, {"regime", to_string(k.regime)}};
}

inline ojson to_json(const ClassificationReport& r) {
  ojson w = ojson::object();
  for (const auto& [k, v] : r.witness) w[k] = num(v);
  return ojson{{"verdict", to_string(r.verdict)}, {"regime", to_string(r.regime)}, {"source", r.source}, {"witness", w}};
}

// ---------------------------------------------------------------------------
// CSV

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, std::vector<std::string> header) : os_(os), cols_(header.size()) { row_strings(header); }

  template <class... Ts>
  void row(const Ts&... cells) {
    write({cell(cells)...});
  }

  void write(const std::vector<std::string>& v) {
    if (v.size() != cols_) throw SizeError("CsvWriter: wrong number of cells");
    row_strings(v);
  }

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

 private:
  void row_strings(const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) os_ << ',';
      const bool quote = v[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        os_ << v[i];
        continue;
      }
      os_ << '"';
      for (char c : v[i]) os_ << (c == '"' ? "\"\"" : std::string(1, c));
      os_ << '"';
    }
    os_ << '\n';
  }

  std::ostream& os_;
  std::size_t cols_;
};

}  // namespace dcrep::io
