// dcrep: command-line front end for the divide-and-color representation library.
//
//   dcrep analyze  --model M [--h H]           conditions, limits, verdicts
//   dcrep solve    --model M [--h H]           LP feasibility / representation
//   dcrep scan     --grid ab|theta|alpha       one row per grid point
//   dcrep simulate --model M --samples N       samplers + verification
//   dcrep asymptotics --model M                closed-form limit objects
//
// Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/math/policies/error_handling.hpp>

#include "dcrep/dcrep.hpp"
#include "dcrep/io.hpp"

namespace {

using namespace dcrep;
using io::num;
using io::ojson;
using json = nlohmann::json;

constexpr const char* kSchema = "dcrep/1";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::optional<std::string> config, model, format, out, regime, grid;
  std::optional<double> h, p, tol, sigmas, step, a, lo, hi;
  std::optional<std::size_t> samples, points;
  std::optional<std::uint64_t> seed;
  bool tamper = false, exact = false;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("'" + path + "': " + e.what());
  }
}

json model_arg(const std::string& s) {
  if (!s.empty() && s.front() == '{') {
    try {
      return json::parse(s);
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("--model: ") + e.what());
    }
  }
  return read_json_file(s);
}

/// Defaults, then the config file, then explicit flags.
ojson resolve_config(const std::string& command, const Flags& f) {
  ojson cfg{{"schema", kSchema},   {"command", command}, {"model", nullptr}, {"h", nullptr},
            {"p", nullptr},        {"samples", 100000},  {"seed", 1},        {"tol", 1e-12},
            {"sigmas", 3.0},       {"regime", "all"},    {"grid", "ab"},     {"step", 0.005},
            {"points", 64},        {"a", 0.5},           {"lo", nullptr},    {"hi", nullptr},
            {"tamper", false},    {"exact", false},   {"format", "json"},
            {"out", nullptr}};
  if (f.config) {
    const json file = read_json_file(*f.config);
    if (file.value("schema", "") != kSchema) throw UsageError("config: schema must be \"dcrep/1\"");
    for (const auto& [k, v] : file.items()) {
      if (!cfg.contains(k)) throw UsageError("config: unknown key '" + k + "'");
      if (k == "command" && v != command) throw UsageError("config: command '" + v.dump() + "' does not match");
      cfg[k] = v;
    }
    if (cfg["model"].is_string()) cfg["model"] = read_json_file(cfg["model"].get<std::string>());
  }
  if (f.model) cfg["model"] = model_arg(*f.model);
  if (f.h) cfg["h"] = *f.h;
  if (f.p) cfg["p"] = *f.p;
  if (f.samples) cfg["samples"] = *f.samples;
  if (f.seed) cfg["seed"] = *f.seed;
  if (f.tol) cfg["tol"] = *f.tol;
  if (f.sigmas) cfg["sigmas"] = *f.sigmas;
  if (f.regime) cfg["regime"] = *f.regime;
  if (f.grid) cfg["grid"] = *f.grid;
  if (f.step) cfg["step"] = *f.step;
  if (f.points) cfg["points"] = *f.points;
  if (f.a) cfg["a"] = *f.a;
  if (f.lo) cfg["lo"] = *f.lo;
  if (f.hi) cfg["hi"] = *f.hi;
  if (f.tamper) cfg["tamper"] = true;
  if (f.exact) cfg["exact"] = true;
  if (f.format) cfg["format"] = *f.format;
  if (f.out) cfg["out"] = *f.out;
  if (cfg["format"] != "json" && cfg["format"] != "csv") throw UsageError("--format must be json or csv");
  return cfg;
}

std::string model_type(const ojson& cfg) {
  const auto& m = cfg.at("model");
  if (!m.is_object()) throw UsageError("a model is required (--model FILE or inline JSON)");
  if (!m.contains("type")) throw UsageError("model: missing \"type\"");
  return m.at("type").get<std::string>();
}

json model_of(const ojson& cfg) { return json::parse(cfg.at("model").dump()); }

std::optional<double> opt_double(const ojson& cfg, const char* key) {
  if (cfg.at(key).is_null()) return std::nullopt;
  return cfg.at(key).get<double>();
}

TolPolicy policy_for(const BinaryLaw& nu, const ojson& cfg) {
  TolPolicy pol = TolPolicy::for_law(nu);
  pol.sigmas = cfg.at("sigmas").get<double>();
  pol.feasible_tol = cfg.at("tol").get<double>();
  pol.borderline_tol = std::max(pol.borderline_tol, pol.feasible_tol);
  return pol;
}

Verdict verdict_of(FeasibilityStatus s) {
  if (s == FeasibilityStatus::Feasible) return Verdict::ColorRep;
  if (s == FeasibilityStatus::Infeasible) return Verdict::NoColorRep;
  return Verdict::Undetermined;
}

bool is_sphere_square(const json& m) { return m.value("family", "") == "sphere_square"; }

struct LawAtH {
  BinaryLaw law;
  std::string source;
};

/// Threshold law of a Gaussian or stable model at h: exact where a closed
/// form exists, Monte Carlo otherwise.
LawAtH law_at_h(const ojson& cfg, double h) {
  const auto type = model_type(cfg);
  const json m = model_of(cfg);
  const auto samples = cfg.at("samples").get<std::size_t>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  if (type == "law") return {io::binary_law_from_json(m), "given"};
  if (type == "gaussian") {
    const auto cov = io::covariance_from_json(m);
    if (h == 0.0 && cov.n() == 3 && cov.is_standard()) return {zero_threshold_law_3(cov), "exact-h0"};
    if (h == 0.0 && is_sphere_square(m)) return {square_law_zero(m.at("theta").get<double>()), "exact-h0"};
    return {threshold_law_mc(cov, h, samples, seed), "monte-carlo"};
  }
  if (type == "stable") return {stable_threshold_law_mc(io::stable_model_from_json(m), h, samples, seed), "monte-carlo"};
  throw UsageError("model type '" + type + "' has no threshold law");
}

ojson solve_law(const BinaryLaw& nu, const ojson& cfg, bool square) {
  const double p = opt_double(cfg, "p").value_or(nu.marginal_p());
  FeasibilityResult r = square ? square_circle_solver(nu) : lp_feasibility(nu, p, policy_for(nu, cfg));
  ojson out = io::to_json(r);
  out["method"] = square ? "square-circle" : (nu.has_stderr() ? "lp-monte-carlo" : "lp-exact");
  out["p"] = num(p);
  if (nu.n() == 3 && std::abs(p - 0.5) > 1e-9 && !nu.has_stderr()) {
    const auto q = signed_rep_3(nu);
    out["signed_representation"] = io::to_json(q.distribution());
  }
  return out;
}

ClassificationReport report(Verdict v, Regime r, std::string source,
                            std::vector<std::pair<std::string, double>> witness) {
  return ClassificationReport{v, r, std::move(source), std::move(witness)};
}

// ---------------------------------------------------------------------------
// Stable large-h verdict from the order-1 and order-2 limits.
//
// For small p = nu_1(h): q12,3 ~ p (lim nu110/p^2 - lim nu001/p) when the
// order-1 limit of q12,3 vanishes, and likewise for the other pairs.

ojson stable_large_h(const StableLinearModel& model, std::vector<ClassificationReport>& reports) {
  const auto mu = spectral_from_matrix(model);
  const auto lim = stable_limit_report(mu);
  ojson out = io::to_json(lim);
  const double tol = 1e-12;
  bool negative = false, all_positive = true;
  for (double v : lim.q) {
    negative = negative || v < -tol;
    all_positive = all_positive && v > tol;
  }
  std::vector<std::pair<std::string, double>> witness{{"q_min", *std::min_element(lim.q.begin(), lim.q.end())}};
  if (!negative && !all_positive) {
    // Second order for vanishing pair limits; q123 and q1,2,3 zero limits stay undetermined.
    const std::array<std::array<const char*, 3>, 3> pairs{{{"110", "001", "q12|3"}, {"101", "010", "q13|2"},
                                                           {"011", "100", "q1|23"}}};
    const std::array<int, 3> slot{1, 2, 3};
    bool undecided = lim.q[0] <= tol || lim.q[4] <= tol;
    ojson second = ojson::object();
    for (int k = 0; k < 3; ++k) {
      if (lim.q[slot[k]] > tol) continue;
      const auto o2 = stable_order2_limit_estimate(mu, parse_pattern(pairs[k][0]));
      const double gap = o2.value - lim.order1.at(pairs[k][1]);
      // A gap inside the quadrature's accuracy decides nothing.
      const double band =
          std::max({1e-9, 10 * o2.error, stable_order2_relative_accuracy(mu.alpha()) * std::abs(o2.value)});
      second[pairs[k][2]] = ojson{{"order2", num(o2.value)}, {"order2_error", num(std::max(o2.error, stable_order2_relative_accuracy(mu.alpha()) * std::abs(o2.value)))},
                                  {"order1_single", num(lim.order1.at(pairs[k][1]))}, {"gap", num(gap)}};
      witness.emplace_back(std::string("gap_") + pairs[k][2], gap);
      if (gap < -band) negative = true;
      if (!(gap > band)) undecided = true;
    }
    out["second_order"] = second;
    all_positive = !negative && !undecided;
  }
  const Verdict v = negative ? Verdict::NoColorRep : (all_positive ? Verdict::ColorRep : Verdict::Undetermined);
  reports.push_back(report(v, Regime::LargeH, "stable tail limits", witness));
  out["verdict"] = negative ? "NotColorForLargeH" : (all_positive ? "ColorForLargeH" : "Undetermined");
  return out;
}

// ---------------------------------------------------------------------------

ojson cmd_analyze(const ojson& cfg) {
  const auto type = model_type(cfg);
  const json m = model_of(cfg);
  const auto regime = cfg.at("regime").get<std::string>();
  if (regime != "all" && regime != "small-h" && regime != "large-h" && regime != "at-h")
    throw UsageError("--regime must be all, small-h, large-h or at-h");
  const bool want_small = regime == "all" || regime == "small-h";
  const bool want_large = regime == "all" || regime == "large-h";
  const auto h = opt_double(cfg, "h");
  std::vector<ClassificationReport> reports;
  ojson out = ojson::object();

  if (type == "gaussian") {
    const auto cov = io::covariance_from_json(m);
    out["covariance"] = io::to_json(cov);
    out["rank"] = cov.rank();
    if (cov.is_pd()) {
      const auto c = savage_report(cov);
      ojson sv = ojson::array();
      for (Eigen::Index i = 0; i < c.savage_vector.size(); ++i) sv.push_back(num(c.savage_vector(i)));
      out["conditions"] = ojson{{"savage_vector", sv},
                                {"savage", to_string(c.savage)},
                                {"inverse_stieltjes", c.stieltjes_inverse},
                                {"dgff", c.dgff},
                                {"dgff_failing", c.dgff_failing},
                                {"quadratic", num(c.quadratic)}};
      if (c.stieltjes_inverse)
        reports.push_back(report(Verdict::ColorRep, Regime::ZeroH, "inverse Stieltjes", {}));
    }
    const bool three = cov.n() == 3 && cov.is_standard() && cov.is_pd();
    if (three && want_small) {
      const auto s = small_h_limits_3(cov);
      out["small_h"] = io::to_json(s);
      reports.push_back(report(s.verdict, Regime::SmallH, "small-h limits",
                               {{"q_min", std::min({s.q123, s.q12_3, s.q13_2, s.q1_23, s.q1_2_3})}}));
    }
    if (three && want_large && cov(0, 1) >= 0 && cov(0, 2) >= 0 && cov(1, 2) >= 0) {
      const auto v = classify_large_h_3(cov);
      out["large_h"] = ojson{{"verdict", to_string(v.verdict)}, {"case", v.case_tag},
                             {"savage_min", num(v.savage_min)}, {"quadratic", num(v.quadratic)}};
      reports.push_back(report(v.verdict == LargeH::ColorForLargeH ? Verdict::ColorRep : Verdict::NoColorRep,
                               Regime::LargeH, "three-point large-h classifier",
                               {{"savage_min", v.savage_min}, {"quadratic", v.quadratic}}));
    }
    if (!cov.is_pd()) {
      ojson deg = ojson::array();
      for (const auto& d : classify_degenerate(cov)) {
        deg.push_back(ojson{{"kind", to_string(d.kind)},
                            {"forbidden", d.kind == DegenerateKind::NotColorAnyPositiveH ? pattern_key(d.forbidden, cov.n()) : ""}});
        const Regime r = d.kind == DegenerateKind::NotColorAnyPositiveH ? Regime::AnyPositiveH : Regime::LargeH;
        if (r == Regime::AnyPositiveH || want_large)
          reports.push_back(report(Verdict::NoColorRep, r, "degenerate covariance", {}));
      }
      out["degenerate"] = deg;
    }
  } else if (type == "stable") {
    const auto model = io::stable_model_from_json(m);
    out["stable_model"] = io::to_json(model);
    if (model.d() == 3 && want_large) out["large_h"] = stable_large_h(model, reports);
  } else if (type != "law") {
    throw UsageError("analyze: unsupported model type '" + type + "'");
  }

  if (h || type == "law") {
    const double hv = h.value_or(0.0);
    const auto law = law_at_h(cfg, hv);
    out["law"] = io::to_json(law.law);
    out["law_source"] = law.source;
    const bool square = type == "gaussian" && is_sphere_square(m) && hv == 0.0;
    out["feasibility"] = solve_law(law.law, cfg, square);
    const auto st = out["feasibility"]["status"].get<std::string>();
    const FeasibilityStatus fs = st == "Feasible" ? FeasibilityStatus::Feasible
                                 : st == "Infeasible" ? FeasibilityStatus::Infeasible
                                                      : FeasibilityStatus::Borderline;
    reports.push_back(report(verdict_of(fs), hv == 0.0 ? Regime::ZeroH : Regime::AtH, "lp feasibility",
                             {{"h", hv}, {"margin", out["feasibility"]["margin"].is_number()
                                                        ? out["feasibility"]["margin"].get<double>() : 0.0}}));
  }
  ojson reps = ojson::array();
  for (const auto& r : reports) reps.push_back(io::to_json(r));
  out["reports"] = reps;
  return out;
}

ojson cmd_solve(const ojson& cfg) {
  const auto type = model_type(cfg);
  const json m = model_of(cfg);
  if (cfg.at("exact").get<bool>()) {
    if (type != "law") throw UsageError("solve --exact needs a law model");
    const int n = m.at("n").get<int>();
    std::vector<Rational> nu(std::size_t{1} << n, Rational(0));
    for (const auto& [k, v] : m.at("probs").items()) {
      if (static_cast<int>(k.size()) != n) throw UsageError("law: pattern '" + k + "' has wrong length");
      nu[parse_pattern(k)] = v.is_string() ? Rational(v.get<std::string>()) : Rational(v.get<double>());
    }
    Rational p = Rational(0);
    for (std::uint32_t r = 0; r < nu.size(); ++r)
      if (r & 1u) p += nu[r];
    if (!cfg.at("p").is_null()) p = Rational(cfg.at("p").get<double>());
    const auto r = lp_feasibility_exact(n, nu, p);
    ojson out{{"status", r.feasible ? "Feasible" : "Infeasible"}, {"method", "lp-rational"}, {"p", p.str()}};
    ojson vec = ojson::object();
    if (r.feasible) {
      for (std::size_t j = 0; j < r.q.size(); ++j) vec[partitions_of(n)[j].key()] = r.q[j].str();
      out["representation"] = vec;
    } else {
      ojson c = ojson::array();
      for (const auto& y : r.farkas) c.push_back(y.str());
      out["certificate"] = c;
    }
    return out;
  }
  const double h = opt_double(cfg, "h").value_or(0.0);
  const auto law = law_at_h(cfg, h);
  ojson out = solve_law(law.law, cfg, type == "gaussian" && is_sphere_square(m) && h == 0.0);
  out["law"] = io::to_json(law.law);
  out["law_source"] = law.source;
  return out;
}

// ---------------------------------------------------------------------------

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

template <class... Ts>
void add_row(Table& t, const Ts&... cells) {
  t.rows.push_back({io::CsvWriter::cell(cells)...});
}

std::vector<double> grid_points(double lo, double hi, double step) {
  if (!(step > 0) || !(hi > lo)) throw UsageError("scan: empty grid");
  std::vector<double> g;
  for (long k = 1;; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    if (v >= hi - 1e-12) break;
    g.push_back(v);
  }
  if (g.empty()) throw UsageError("scan: empty grid");
  return g;
}

Table cmd_scan(const ojson& cfg) {
  const auto grid = cfg.at("grid").get<std::string>();
  const double step = cfg.at("step").get<double>();
  Table t;
  if (grid == "ab") {
    t.header = {"a", "b", "pd", "large_h_color", "large_h_case", "savage_min", "dgff", "formula_color"};
    const auto g = grid_points(opt_double(cfg, "lo").value_or(0.0), opt_double(cfg, "hi").value_or(1.0), step);
    for (double a : g)
      for (double b : g) {
        const auto r = ab_region_classify(a, b);
        add_row(t, a, b, r.pd, r.pd && r.large_h_color, r.large_h_case, r.savage_min, r.pd && r.dgff,
                ab_large_h_color_formula(a, b));
      }
  } else if (grid == "theta") {
    t.header = {"theta", "h", "status", "margin", "inequality_lhs", "inequality_rhs", "large_h"};
    const auto points = cfg.at("points").get<std::size_t>();
    if (points < 1) throw UsageError("scan: empty grid");
    const double lo = opt_double(cfg, "lo").value_or(0.05), hi = opt_double(cfg, "hi").value_or(std::numbers::pi / 2 - 0.05);
    for (std::size_t k = 0; k < points; ++k) {
      const double th = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
      const auto r = square_circle_solver(square_law_zero(th));
      const auto deg = classify_degenerate(CovarianceSpec::sphere_square(th));
      std::string lh = "none";
      for (const auto& d : deg) lh = to_string(d.kind);
      add_row(t, th, 0.0, to_string(r.status), r.margin, std::acos(std::cos(th) * std::cos(th)) - th,
              std::numbers::pi / 8, lh);
    }
  } else if (grid == "alpha") {
    t.header = {"alpha", "a", "g", "order2_101", "threshold", "verdict"};
    const double a = cfg.at("a").get<double>();
    const auto g = grid_points(opt_double(cfg, "lo").value_or(0.0), opt_double(cfg, "hi").value_or(1.0), step);
    for (double al : g) {
      const double aa = std::pow(a, al);
      const double o2 = stable_order2_limit_101_symmetric(a, al);
      const double thr = (1 - aa) * (1 - aa) + aa * (1 - aa);
      const double gv = ptalpha_factor(al);
      const std::string v = o2 > thr ? "ColorForLargeH" : (o2 < thr ? "NotColorForLargeH" : "Undetermined");
      add_row(t, al, a, gv, o2, thr, v);
    }
  } else {
    throw UsageError("--grid must be ab, theta or alpha");
  }
  return t;
}

// ---------------------------------------------------------------------------

ojson color_report_json(const ColorPropertyReport& r) {
  ojson bins = ojson::array();
  for (const auto& b : r.bins)
    bins.push_back(ojson{{"partition", b.partition}, {"count", b.count}, {"tested", b.tested},
                         {"chi2", num(b.chi2)}, {"p_value", num(b.p_value)}});
  return ojson{{"passed", r.passed},
               {"signs_constant_on_blocks", r.signs_constant_on_blocks},
               {"significance", num(r.significance)},
               {"aggregate_max_z", num(r.aggregate_max_z)},
               {"aggregate_limit", num(r.aggregate_limit)},
               {"bins", bins},
               {"warnings", r.warnings}};
}

/// Sets block 2 to block 1's color in every sample with two or more blocks.
void tamper(std::vector<EmbeddingSample>& samples) {
  for (auto& s : samples) {
    if (s.partition.block_count() < 2) continue;
    int c0 = 0;
    for (int i = 0; i < s.partition.n(); ++i)
      if (s.partition.label(i) == 0) c0 = s.signs[i];
    for (int i = 0; i < s.partition.n(); ++i)
      if (s.partition.label(i) == 1) s.signs[i] = c0;
  }
}

struct SimOutput {
  ojson summary;
  std::vector<EmbeddingSample> samples;
};

SimOutput cmd_simulate(const ojson& cfg) {
  const auto type = model_type(cfg);
  const json m = model_of(cfg);
  const auto samples = cfg.at("samples").get<std::size_t>();
  const auto seed = cfg.at("seed").get<std::uint64_t>();
  SimOutput out;
  if (type == "ou" || type == "stable_chain" || type == "stable_star") {
    const double a = m.at("a").get<double>();
    if (type == "ou") {
      out.samples = ou_partition_batch(a, m.value("n", 3), samples, seed);
    } else if (type == "stable_chain") {
      out.samples = stable_chain_batch(m.at("alpha").get<double>(), a, m.value("n", 3), samples, seed);
    } else {
      Rng rng(seed);
      for (std::size_t t = 0; t < samples; ++t)
        out.samples.push_back(stable_star_partition_sample(m.at("alpha").get<double>(), a, m.value("leaves", 2), rng));
    }
    if (cfg.at("tamper").get<bool>()) tamper(out.samples);
    const auto rep = verify_color_property(out.samples);
    std::vector<double> counts(std::size_t{1} << out.samples.front().partition.n(), 0.0);
    for (const auto& s : out.samples) counts[s.pattern()] += 1.0;
    out.summary = ojson{{"verification", color_report_json(rep)},
                        {"sign_law", io::to_json(empirical_law(out.samples.front().partition.n(), counts))}};
    return out;
  }
  if (type == "color") {
    const int n = m.at("n").get<int>();
    std::map<std::string, double> w;
    for (const auto& [k, v] : m.at("weights").items()) w[k] = v.get<double>();
    const auto q = PartitionDistribution::from_map(n, w);
    const double p = opt_double(cfg, "p").value_or(m.value("p", 0.5));
    const auto sim = simulate_color_process(q, p, samples, seed);
    const auto target = push_forward(q, p);
    double zmax = 0.0;
    for (std::uint32_t r = 0; r < (1u << n); ++r) {
      const double se = std::max(sim.law.stderr_at(r), 1.0 / static_cast<double>(samples));
      zmax = std::max(zmax, std::abs(sim.law[r] - target[r]) / se);
    }
    out.summary = ojson{{"law", io::to_json(sim.law)},
                        {"target", io::to_json(target)},
                        {"max_z", num(zmax)},
                        {"passed", zmax <= 4.0}};
    return out;
  }
  const double h = opt_double(cfg, "h").value_or(0.0);
  const auto law = law_at_h(cfg, h);
  out.summary = ojson{{"law", io::to_json(law.law)}, {"law_source", law.source}};
  return out;
}

// ---------------------------------------------------------------------------

ojson cmd_asymptotics(const ojson& cfg) {
  const auto type = model_type(cfg);
  const json m = model_of(cfg);
  if (type == "gaussian") {
    const auto cov = io::covariance_from_json(m);
    return ojson{{"small_h", io::to_json(small_h_limits_3(cov))}};
  }
  if (type == "stable") {
    const auto model = io::stable_model_from_json(m);
    if (model.d() != 3) throw UsageError("asymptotics: stable model must have 3 coordinates");
    ojson out = io::to_json(stable_limit_report(spectral_from_matrix(model)));
    const auto fam = m.value("family", "");
    const double al = model.alpha(), a = m.value("a", 0.0);
    if (fam == "common_factor")
      out["order2_101_closed_form"] = io::formula_value("stable/order2/101/common-factor", stable_order2_limit_101_symmetric(a, al));
    if (fam == "markov")
      out["order2_101_closed_form"] = io::formula_value("stable/order2/101/markov", stable_order2_limit_101_markov(a, al));
    return out;
  }
  if (type == "alt") {
    const double a = m.at("a").get<double>(), b = m.at("b").get<double>();
    ojson out = io::to_json(alt_example_constants(a, b));
    if (m.contains("alpha")) {
      const double al = m.at("alpha").get<double>();
      const auto q = alt_example_q_limits(a, b, al);
      out["alpha"] = num(al);
      out["g"] = io::formula_value("alt/g", alt_example_g(a, b, al));
      out["q_limits"] = ojson{{"q123", num(q[0])}, {"q12|3", num(q[1])}, {"q13|2", num(q[2])},
                              {"q1|23", num(q[3])}, {"q1|2|3", num(q[4])}};
    }
    return out;
  }
  if (type == "phase_transition") {
    const auto pt = phase_transition_alpha();
    return ojson{{"root", io::formula_value("ptalpha/root", pt.root)}, {"increasing_on_grid", pt.increasing_on_grid}};
  }
  throw UsageError("asymptotics: unsupported model type '" + type + "'");
}

// ---------------------------------------------------------------------------

void emit(const ojson& cfg, const std::string& body) {
  if (cfg.at("out").is_null()) {
    std::cout << body;
    return;
  }
  std::ofstream os(cfg.at("out").get<std::string>(), std::ios::binary);
  if (!os) throw UsageError("cannot write '" + cfg.at("out").get<std::string>() + "'");
  os << body;
}

std::string render_json(const ojson& cfg, const ojson& result) {
  ojson doc{{"config", cfg}, {"result", result}};
  return doc.dump(2) + "\n";
}

std::string render_table(const ojson& cfg, const Table& t) {
  std::ostringstream os;
  if (cfg.at("format") == "csv") {
    os << "# " << cfg.dump() << "\n";
    io::CsvWriter w(os, t.header);
    for (const auto& r : t.rows) w.write(r);
    return os.str();
  }
  ojson rows = ojson::array();
  for (const auto& r : t.rows) {
    ojson o = ojson::object();
    for (std::size_t i = 0; i < r.size(); ++i) o[t.header[i]] = r[i];
    rows.push_back(o);
  }
  return render_json(cfg, ojson{{"rows", rows}});
}

std::string render_samples(const ojson& cfg, const SimOutput& s) {
  if (cfg.at("format") != "csv" || s.samples.empty()) return render_json(cfg, s.summary);
  std::ostringstream os;
  os << "# " << cfg.dump() << "\n";
  io::CsvWriter w(os, {"signs", "partition", "crossing_probabilities"});
  for (const auto& e : s.samples) {
    std::string signs, pc;
    for (int v : e.signs) signs += v > 0 ? '+' : '-';
    for (std::size_t i = 0; i < e.path_meta.size(); ++i) pc += (i ? ";" : "") + io::format_double(e.path_meta[i]);
    w.row(signs, e.partition.key(), pc);
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divide-and-color representations of threshold Gaussian and stable vectors"};
  app.set_help_flag("--help", "print help");  // frees --h for the threshold
  app.require_subcommand(1);
  Flags f;
  std::string out;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", f.config, "JSON config file (schema dcrep/1)");
    sub->add_option("--model", f.model, "model JSON file or inline JSON");
    sub->add_option("--h", f.h, "threshold");
    sub->add_option("--p", f.p, "coin bias (default: the law's marginal)");
    sub->add_option("--samples", f.samples, "Monte Carlo sample count");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--tol", f.tol, "LP feasibility tolerance");
    sub->add_option("--sigmas", f.sigmas, "Monte Carlo relaxation in standard errors");
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--format", f.format, "json or csv");
  };
  auto* analyze = app.add_subcommand("analyze", "conditions, limits and verdicts for a model");
  common(analyze);
  analyze->add_option("--regime", f.regime, "all, small-h, large-h or at-h");
  auto* solve = app.add_subcommand("solve", "decide and construct a color representation");
  common(solve);
  solve->add_flag("--exact", f.exact, "rational arithmetic (law models; probabilities may be \"a/b\" strings)");
  auto* scan = app.add_subcommand("scan", "parameter grid of classifier outputs");
  common(scan);
  scan->add_option("--grid", f.grid, "ab, theta or alpha");
  scan->add_option("--step", f.step, "grid step (ab, alpha)");
  scan->add_option("--points", f.points, "grid points (theta)");
  scan->add_option("--a", f.a, "fixed a for the alpha grid");
  scan->add_option("--lo", f.lo, "grid lower end");
  scan->add_option("--hi", f.hi, "grid upper end");
  auto* simulate = app.add_subcommand("simulate", "samplers with verification");
  common(simulate);
  simulate->add_flag("--tamper", f.tamper, "negative control: copy block 1's color onto block 2");
  auto* asym = app.add_subcommand("asymptotics", "closed-form limit objects");
  common(asym);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    ojson cfg = resolve_config(cmd, f);
    std::string body;
    if (cmd == "analyze") body = render_json(cfg, cmd_analyze(cfg));
    else if (cmd == "solve") body = render_json(cfg, cmd_solve(cfg));
    else if (cmd == "scan") body = render_table(cfg, cmd_scan(cfg));
    else if (cmd == "simulate") body = render_samples(cfg, cmd_simulate(cfg));
    else body = render_json(cfg, cmd_asymptotics(cfg));
    emit(cfg, body);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "dcrep: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "dcrep: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const boost::math::evaluation_error& e) {
    std::cerr << "dcrep: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "dcrep: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "dcrep: config: " << e.what() << "\n";
    return 2;
  }
}
