#pragma once

// Reports and verification campaigns. Every report is a JSON object with
// sorted keys; rationals are "p/q" strings and reals carry 15 significant
// digits, so identical inputs give byte-identical output.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "occucert/core.hpp"
#include "occucert/demand.hpp"
#include "occucert/generators.hpp"
#include "occucert/graph.hpp"
#include "occucert/hardcore.hpp"
#include "occucert/occupancy.hpp"
#include "occucert/special_functions.hpp"

namespace occucert {

using Json = nlohmann::json;

// ------------------------------------------------------------- formatting

inline Json real_json(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? Json("nan") : Json(x > 0 ? "inf" : "-inf");
  return round15(x);
}

inline Json rational_array(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline Json real_array(const RealVector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(real_json(x));
  return a;
}

template <typename T>
Json scalar_json(const T& x) {
  if constexpr (std::is_same_v<T, Rational>) return to_string(x);
  else return real_json(x);
}

template <typename T>
Json vector_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_json(x));
  return a;
}

inline Json graph_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

// ------------------------------------------------------------- fugacity specs

/// Fugacity spec:
///   "p/q" | "0.05"     uniform exact value
///   "delta:r"          uniform r/Delta (r when Delta = 0)
///   "random"           per-vertex k/(1000 Delta), k uniform in 1..999
///   "c:r"              uniform r c(b)/Delta (Lambert-W campaigns only)
///   "{...}" | "@file"  JSON {"uniform": ...} or {"values": [...]}
struct LambdaSpec {
  enum class Kind { uniform, per_delta, random, c_fraction, json } kind = Kind::uniform;
  Rational value;
  std::string text;  // original spec, used as the label
};

inline LambdaSpec parse_lambda_spec(const std::string& spec) {
  LambdaSpec s;
  s.text = spec;
  if (spec == "random") {
    s.kind = LambdaSpec::Kind::random;
  } else if (spec.rfind("delta:", 0) == 0) {
    s.kind = LambdaSpec::Kind::per_delta;
    s.value = parse_rational(spec.substr(6));
  } else if (spec.rfind("c:", 0) == 0) {
    s.kind = LambdaSpec::Kind::c_fraction;
    s.value = parse_rational(spec.substr(2));
  } else if (!spec.empty() && (spec[0] == '{' || spec[0] == '@')) {
    s.kind = LambdaSpec::Kind::json;
    if (spec[0] == '@') {
      std::ifstream in(spec.substr(1));
      if (!in) throw InputError("cannot read fugacity file " + spec.substr(1));
      std::stringstream buf;
      buf << in.rdbuf();
      s.text = buf.str();
    }
  } else {
    s.kind = LambdaSpec::Kind::uniform;
    s.value = parse_rational(spec);
  }
  if (s.kind != LambdaSpec::Kind::random && s.kind != LambdaSpec::Kind::json && sgn(s.value) < 0)
    throw InputError("fugacity spec must be nonnegative: " + spec);
  return s;
}

inline Rational delta_or_one(const Graph& g) {
  return Rational(static_cast<long>(std::max<std::size_t>(g.max_degree(), 1)));
}

/// Exact fugacities for `g`; `rng` is consumed only by "random".
inline Fugacity realize(const LambdaSpec& s, const Graph& g, Rng& rng, double b = 0) {
  const auto n = g.vertex_count();
  switch (s.kind) {
    case LambdaSpec::Kind::uniform: return Fugacity::uniform(n, s.value);
    case LambdaSpec::Kind::per_delta: return Fugacity::uniform(n, s.value / delta_or_one(g));
    case LambdaSpec::Kind::random: {
      RationalVector v;
      for (std::size_t u = 0; u < n; ++u)
        v.push_back(Rational(static_cast<long>(rng.between(1, 999))) / (1000 * delta_or_one(g)));
      return Fugacity(std::move(v));
    }
    case LambdaSpec::Kind::c_fraction: {
      const double l = to_double(s.value) * c_of_b(b) / to_double(delta_or_one(g));
      return Fugacity::uniform(n, Rational(l));
    }
    case LambdaSpec::Kind::json: return parse_fugacity_json(s.text, n);
  }
  return {};
}

/// Uniform real fugacity for the Lambert-W pipeline.
inline double realize_uniform_real(const LambdaSpec& s, const Graph& g, double b) {
  switch (s.kind) {
    case LambdaSpec::Kind::uniform: return to_double(s.value);
    case LambdaSpec::Kind::per_delta: return to_double(s.value / delta_or_one(g));
    case LambdaSpec::Kind::c_fraction: return to_double(s.value) * c_of_b(b) / to_double(delta_or_one(g));
    default: throw InputError("the Lambert-W pipeline needs a uniform fugacity spec");
  }
}

// ------------------------------------------------------------- single-graph reports

inline Json hard_core_json(const Graph& g, const Fugacity& lambda, std::size_t cap, bool with_sets) {
  const auto hc = hard_core_summary(g, lambda, cap);
  Json j = {{"partition_function", to_string(hc.partition_function)},
            {"log_partition", real_json(log_rational(hc.partition_function))},
            {"marginals", rational_array(hc.marginals)},
            {"expected_size", to_string(hc.expected_size)}};
  if (with_sets) {
    Json sets = Json::array();
    for (const auto& [s, p] : set_probabilities(g, lambda, cap))
      sets.push_back({{"set", set_members(s)}, {"probability", to_string(p)}});
    j["sets"] = sets;
  }
  return j;
}

template <typename T>
Json certificate_json(const DualCertificate<T>& c) {
  return {{"y_prime", vector_json(c.y_prime)},
          {"objective", scalar_json(c.objective)},
          {"baseline", scalar_json(c.baseline)},
          {"identity_holds", c.identity_holds},
          {"nonnegative", c.nonnegative},
          {"dominates_baseline", c.dominates_baseline},
          {"residual_max", real_json(c.residual_max)},
          {"rho_bagamma", real_json(c.rho_bagamma)},
          {"rho_lgh", real_json(c.rho_lgh)},
          {"conditions",
           {{"positivity", c.conditions.positivity},
            {"degree_ratio", c.conditions.degree_ratio},
            {"neighbor_sum", c.conditions.neighbor_sum},
            {"degree_ratio_slack", scalar_json(c.conditions.degree_ratio_slack)},
            {"neighbor_sum_slack", scalar_json(c.conditions.neighbor_sum_slack)},
            {"margin", real_json(c.conditions.margin)}}}};
}

inline Json series_json(const SeriesDiagnostics& s) {
  Json j = {{"S", real_array(s.s_terms)},
            {"terms", s.terms},
            {"truncation_bound", real_json(s.truncation_bound)},
            {"m_norm", real_json(s.m_norm)},
            {"s1_edge_form", real_json(s.s1_edge_form)},
            {"series_sum", real_json(s.series_sum)},
            {"certificate_gap", real_json(s.certificate_gap)},
            {"disparity_energy", s.disparity},
            {"h", real_array(s.h_vec)},
            {"tau", real_array(s.tau_vec)}};
  if (s.big_c) {
    j["C"] = real_json(*s.big_c);
    j["s1_lower_est"] = real_json(*s.s1_lower_est);
    j["tail_upper_est"] = real_json(*s.tail_upper_est);
    j["tail_sum"] = real_json(s.tail_sum);
  }
  return j;
}

struct AnalyzeOptions {
  std::size_t cap = default_enumeration_cap();
  std::optional<double> b;  // also evaluate the Lambert-W bound
  bool verbose = false;
};

/// Degree and mad profiles, exact hard-core summary, general bound and gap.
inline Json analyze_report(const Graph& g, const Fugacity& lambda, const AnalyzeOptions& opt = {}) {
  const auto prof = degree_profile(g);
  Json graph = graph_json(g);
  graph["degrees"] = prof.degrees;
  graph["max_degree"] = prof.max_degree;
  graph["disparity_energy"] = prof.disparity_energy;
  graph["triangle_free"] = is_triangle_free(g);
  if (g.vertex_count() > 0 && g.vertex_count() <= kMadVertexLimit) graph["mad"] = to_string(mad(g));
  if (g.vertex_count() > 0 && !g.has_isolated_vertex() && g.max_degree() <= kMadVertexLimit)
    graph["neighborhood_mad"] = rational_array(neighborhood_mad_profile(g));

  Json hc = hard_core_json(g, lambda, opt.cap, opt.verbose);
  const Rational ex = parse_rational(hc["expected_size"].get<std::string>());
  const Rational bound = thm1_bound(g, lambda);
  Json rep = {{"mode", "analyze"},
              {"graph", graph},
              {"lambda", fugacity_to_json(lambda)},
              {"hard_core", hc},
              {"expected_size", to_string(ex)},
              {"thm1",
               {{"admissible", thm1_lambda_admissible(g, lambda)},
                {"bound", to_string(bound)},
                {"gap", to_string(ex - bound)},
                {"logz_bound", real_json(logz_bound_thm1(g, lambda))}}}};
  if (opt.b && lambda.size() > 0 && lambda.is_uniform()) {
    Json t2;
    try {
      const auto ev = thm2_evaluate(g, to_double(lambda[0]), *opt.b);
      t2 = {{"bound", real_json(ev.bound)},
            {"gap", real_json(to_double(ex) - ev.bound)},
            {"isolated_stripped", ev.isolated_stripped}};
    } catch (const PreconditionError& e) {
      t2 = {{"not_applicable", e.what()}};
    }
    t2["b"] = real_json(*opt.b);
    rep["thm2"] = t2;
  }
  return rep;
}

/// Dual certificate and series diagnostics: general parameters from an exact
/// fugacity, or Lambert-W parameters when b is given.
inline Json certify_report(const Graph& g, const Fugacity& lambda, std::optional<double> b,
                           std::size_t series_terms_min = 20) {
  Json rep = {{"mode", "certify"}, {"graph", graph_json(g)}, {"lambda", fugacity_to_json(lambda)}};
  auto fill = [&](const auto& params) {
    const auto cert = dual_certificate(g, params);
    rep["flavor"] = flavor_name(params.flavor);
    rep["certificate"] = certificate_json(cert);
    rep["bound"] = scalar_json(cert.baseline);
    if (!(cert.rho_lgh < 1)) return;
    rep["series"] = series_json(series_terms(g, params, series_terms_min));
  };
  if (b) {
    if (!lambda.is_uniform() || lambda.size() == 0) throw InputError("certify with --b needs a uniform fugacity");
    rep["b"] = real_json(*b);
    fill(mad_params(g, to_double(lambda[0]), *b));
  } else {
    fill(general_params(lambda));
    if (g.vertex_count() <= kLpVertexLimit) {
      const auto lp = lp_optimum_bruteforce(g, general_params(lambda));
      rep["lp"] = {{"optimum", to_string(lp.optimum)}, {"witness", rational_array(lp.witness)}};
    }
  }
  return rep;
}

/// The K_{1,2} example: x = (1,0,0) is optimal for the occupancy LP at
/// lambda = 7/5, so the LP value 1 falls short of the general bound 497/494.
inline Json counterexample_report() {
  const auto g = Graph::from_edge_list(3, {{0, 1}, {0, 2}});
  const auto lambda = Fugacity::uniform(3, Rational(7, 5));
  const auto p = general_params(lambda);
  const RationalVector x{Rational(1), Rational(0), Rational(0)};
  const auto lhs = primal_constraint_matrix(g, p) * x;
  const bool feasible = std::all_of(lhs.begin(), lhs.end(), [](const Rational& v) { return v >= 1; });
  const auto lp = lp_optimum_bruteforce(g, p);
  const auto bound = thm1_bound(g, lambda);
  const auto ex = expected_size(g, lambda);
  return {{"mode", "counterexample"},
          {"graph", graph_json(g)},
          {"lambda", fugacity_to_json(lambda)},
          {"beta", rational_array(p.beta)},
          {"gamma", rational_array(p.gamma)},
          {"x", rational_array(x)},
          {"x_feasible", feasible},
          {"constraint_values", rational_array(lhs)},
          {"optimum", to_string(lp.optimum)},
          {"witness", rational_array(lp.witness)},
          {"bound", to_string(bound)},
          {"expected_size", to_string(ex)},
          {"lp_below_bound", lp.optimum < bound},
          {"conclusion", "LP optimum " + to_string(lp.optimum) + " < bound " + to_string(bound) +
                             " <= E|X| = " + to_string(ex) +
                             ": local occupancy alone cannot give the bound at this fugacity"}};
}

inline Json constants_report(const std::vector<double>& bs) {
  const double c0 = solve_c0(), eta = solve_eta();
  Json cb = Json::array();
  for (double b : bs) cb.push_back({{"b", real_json(b)}, {"c", real_json(c_of_b(b))}, {"c_exact", to_string(c_of_b_exact(Rational(b)))}});
  return {{"mode", "constants"},
          {"c0_root", real_json(c0)},
          {"c0_residual", real_json(c0_objective(c0))},
          {"c0_truncated", to_string(truncated_c0())},
          {"eta_root", real_json(eta)},
          {"eta_residual", real_json(eta_objective(eta))},
          {"eta_truncated", to_string(truncated_eta())},
          {"u_at_eta", real_json(eta * std::exp(eta))},
          {"c_of_b", cb},
          {"note", "c(b) uses the truncations c(0) = 0.109597 and eta = 0.0896883; the roots are shown for comparison"}};
}

// ------------------------------------------------------------- demand process

enum class DemandKind { certificate, uniform, explicit_values };

struct DemandSpec {
  DemandKind kind = DemandKind::certificate;
  Rational scale{1};       // sigma for the certificate demand
  RationalVector values;   // explicit values (one entry means constant)
};

/// "certificate[:sigma]" | "uniform" | "p/q" | JSON array of rationals.
inline DemandSpec parse_demand_spec(const std::string& spec) {
  DemandSpec d;
  if (spec.rfind("certificate", 0) == 0) {
    d.kind = DemandKind::certificate;
    if (spec.size() > 11) {
      if (spec[11] != ':') throw InputError("demand spec: certificate[:sigma]");
      d.scale = parse_rational(spec.substr(12));
    }
  } else if (spec == "uniform") {
    d.kind = DemandKind::uniform;
  } else if (!spec.empty() && spec[0] == '[') {
    d.kind = DemandKind::explicit_values;
    Json j;
    try {
      j = Json::parse(spec);
    } catch (const Json::exception& e) {
      throw InputError(std::string("demand JSON: ") + e.what());
    }
    for (const auto& x : j) {
      if (!x.is_string() && !x.is_number_integer()) throw InputError("demand JSON: use \"p/q\" strings");
      d.values.push_back(x.is_string() ? parse_rational(x.get<std::string>()) : Rational(x.get<long>()));
    }
  } else {
    d.kind = DemandKind::explicit_values;
    d.values = {parse_rational(spec)};
  }
  return d;
}

/// q = sigma (B + Gamma A)^{-1} 1, q = 1/max_u(beta_u + d_u gamma_u), or explicit.
inline RationalVector realize_demand(const DemandSpec& d, const Graph& g, const ExactParams& p) {
  const auto n = g.vertex_count();
  switch (d.kind) {
    case DemandKind::certificate: {
      auto q = solve_exact(primal_constraint_matrix(g, p), RationalVector(n, Rational(1)));
      for (auto& x : q) x *= d.scale;
      return q;
    }
    case DemandKind::uniform: {
      Rational worst(0);
      for (std::size_t u = 0; u < n; ++u)
        worst = std::max(worst, Rational(p.beta[u] + Rational(static_cast<long>(g.degree(u))) * p.gamma[u]));
      return RationalVector(n, sgn(worst) > 0 ? Rational(1 / worst) : Rational(0));
    }
    case DemandKind::explicit_values:
      if (d.values.size() == 1) return RationalVector(n, d.values[0]);
      if (d.values.size() != n) throw InputError("demand vector has the wrong length");
      return d.values;
  }
  return {};
}

inline Json frac_color_report(const Graph& g, const Fugacity& lambda, const RationalVector& q,
                              const DemandOptions& opt) {
  const auto p = general_params(lambda);
  const auto check = check_demand(g, p, q);
  Json rep = {{"mode", "frac-color"},
              {"graph", graph_json(g)},
              {"lambda", fugacity_to_json(lambda)},
              {"demand", rational_array(q)},
              {"demand_slack", rational_array(check.slack)},
              {"demand_feasible", check.feasible}};
  if (!check.feasible) return rep;
  const auto fc = run_demand_process(g, p, q, opt);
  const auto verdict = verify_membership(g, p, fc, q);
  rep["coloring"] = to_json(fc, verdict);
  rep["phases"] = fc.active_sets.size();
  if (fc.occupancy_checked) rep["strict_local_occupancy"] = fc.occupancy_held;
  return rep;
}

// ------------------------------------------------------------- campaigns

/// Aggregated outcome of a campaign. `checks` counts failures per named
/// check; records hold every instance when verbose, else only failures.
struct CampaignResult {
  std::string mode;
  std::size_t instances = 0, passes = 0, failures = 0, skipped = 0;
  std::map<std::string, std::size_t> check_failures, check_evaluations;
  std::optional<Rational> worst_gap_exact;
  std::optional<double> worst_gap_real;
  std::string worst_key;
  std::map<std::string, Json> records;
  std::map<std::string, std::string> skip_reasons;

  void tally(const std::string& check, bool ok) {
    ++check_evaluations[check];
    if (!ok) ++check_failures[check];
    else check_failures.try_emplace(check, 0);
  }
  std::size_t failures_of(const std::string& check) const {
    const auto it = check_failures.find(check);
    return it == check_failures.end() ? 0 : it->second;
  }
  std::size_t evaluations_of(const std::string& check) const {
    const auto it = check_evaluations.find(check);
    return it == check_evaluations.end() ? 0 : it->second;
  }
  void note_gap(const std::string& key, const Rational& gap) {
    if (!worst_gap_exact || gap < *worst_gap_exact) {
      worst_gap_exact = gap;
      worst_key = key;
    }
  }
  void note_gap(const std::string& key, double gap) {
    if (!worst_gap_real || gap < *worst_gap_real) {
      worst_gap_real = gap;
      worst_key = key;
    }
  }
  int exit_code() const { return failures == 0 ? 0 : 1; }

  Json to_json() const {
    Json checks = Json::object();
    for (const auto& [name, count] : check_evaluations)
      checks[name] = {{"evaluated", count}, {"failures", failures_of(name)}};
    Json recs = Json::array();
    for (const auto& [key, rec] : records) recs.push_back(rec);
    Json skips = Json::object();
    for (const auto& [key, why] : skip_reasons) skips[key] = why;
    Json j = {{"mode", mode},
              {"instances", instances},
              {"passes", passes},
              {"failures", failures},
              {"skipped", skipped},
              {"checks", checks},
              {"records", recs},
              {"skip_reasons", skips},
              {"worst_key", worst_key}};
    if (worst_gap_exact) j["worst_gap"] = to_string(*worst_gap_exact);
    else if (worst_gap_real) j["worst_gap"] = real_json(*worst_gap_real);
    else j["worst_gap"] = nullptr;
    return j;
  }
};

struct Thm1Options {
  std::vector<std::string> lambda_specs{"delta:1/2", "delta:9/10", "random", "random", "random"};
  std::uint64_t seed = 1;
  std::size_t cap = default_enumeration_cap();
  bool certificate = true;  // dual certificate, spectral radii
  bool lp = true;           // weak duality against the LP optimum (n <= 12)
  bool series = true;       // S_k >= -1e-10 for k <= 20
  bool logz = true;         // integrated bound
  bool verbose = false;
};

/// General-bound suite: exact E|X| >= bound for each instance and fugacity, plus
/// the certificate, LP, series and log Z checks selected in `opt`.
inline CampaignResult verify_thm1(const std::vector<NamedGraph>& graphs, const Thm1Options& opt) {
  CampaignResult res;
  res.mode = "verify-thm1";
  std::vector<LambdaSpec> specs;
  for (const auto& s : opt.lambda_specs) specs.push_back(parse_lambda_spec(s));
  Rng rng(opt.seed);
  for (const auto& ng : graphs) {
    const auto& g = ng.graph;
    for (std::size_t li = 0; li < specs.size(); ++li) {
      const std::string key = ng.key + "#" + detail::zero_pad(li, 2) + ":" + specs[li].text;
      const auto lambda = realize(specs[li], g, rng);
      ++res.instances;
      Json rec = {{"key", key}, {"graph", graph_json(g)}, {"lambda", fugacity_to_json(lambda)}, {"flavor", "general"}};
      bool ok = true;
      auto check = [&](const std::string& name, bool pass) {
        res.tally(name, pass);
        ok = ok && pass;
      };
      try {
        const auto hc = hard_core_summary(g, lambda, opt.cap);
        const auto bound = thm1_bound(g, lambda);
        const Rational gap = hc.expected_size - bound;
        rec["expected_size"] = to_string(hc.expected_size);
        rec["bound"] = to_string(bound);
        rec["gap"] = to_string(gap);
        rec["admissible"] = thm1_lambda_admissible(g, lambda);
        res.note_gap(key, gap);
        check("thm1_bound", sgn(gap) >= 0);

        if (opt.logz) {
          const double lz = log_rational(hc.partition_function);
          const double lb = logz_bound_thm1(g, lambda);
          rec["logz"] = {{"log_partition", real_json(lz)}, {"bound", real_json(lb)}};
          check("logz_thm1", lb <= lz + 1e-9);
        }
        const bool cert_ok = lambda.all_positive() && !g.has_isolated_vertex() && g.vertex_count() > 0;
        if (opt.certificate && cert_ok) {
          const auto p = general_params(lambda);
          const auto cert = dual_certificate(g, p);
          rec["certificate"] = certificate_json(cert);
          check("cert_identity", cert.identity_holds);
          check("cert_nonnegative", cert.nonnegative);
          check("cert_baseline", cert.dominates_baseline);
          check("rho_bagamma", cert.rho_bagamma <= 1 - 1e-9);
          check("rho_lgh", cert.rho_lgh <= 1 - 1e-9);
          if (opt.lp && g.vertex_count() <= kLpVertexLimit) {
            const auto lp = lp_optimum_bruteforce(g, p);
            rec["lp_optimum"] = to_string(lp.optimum);
            check("lp_weak_duality", lp.optimum >= cert.objective);
          }
          if (opt.series && cert.rho_lgh < 1) {
            const auto s = series_terms(g, p, 20);
            double worst = 0;
            for (std::size_t k = 0; k < 20 && k < s.s_terms.size(); ++k) worst = std::min(worst, s.s_terms[k]);
            rec["series_min_s"] = real_json(worst);
            check("series_positive", worst >= -1e-10);
          }
        }
      } catch (const CapExceeded& e) {
        --res.instances;
        ++res.skipped;
        res.skip_reasons[key] = e.what();
        continue;
      }
      rec["pass"] = ok;
      if (ok) ++res.passes;
      else ++res.failures;
      if (!ok || opt.verbose) res.records[key] = rec;
    }
  }
  return res;
}

struct Thm2Options {
  std::vector<std::string> lambda_specs{"c:1/2", "c:9/10"};
  double b = 0;
  std::size_t cap = default_enumeration_cap();
  bool verbose = false;
};

/// Local-mad (Lambert-W) bound suite on graphs whose neighbourhoods have mad <= b: bound,
/// certificate, series estimates, h/tau profiles and (b = 0) the log Z bound.
inline CampaignResult verify_thm2(const std::vector<NamedGraph>& graphs, const Thm2Options& opt) {
  check_b(opt.b);
  CampaignResult res;
  res.mode = "verify-thm2";
  std::vector<LambdaSpec> specs;
  for (const auto& s : opt.lambda_specs) specs.push_back(parse_lambda_spec(s));
  for (const auto& ng : graphs) {
    const auto& g = ng.graph;
    for (std::size_t li = 0; li < specs.size(); ++li) {
      const std::string key = ng.key + "#" + detail::zero_pad(li, 2) + ":" + specs[li].text;
      ++res.instances;
      Json rec = {{"key", key}, {"graph", graph_json(g)}, {"flavor", "mad"}, {"b", real_json(opt.b)}};
      bool ok = true;
      auto check = [&](const std::string& name, bool pass) {
        res.tally(name, pass);
        ok = ok && pass;
      };
      try {
        const double lambda = realize_uniform_real(specs[li], g, opt.b);
        rec["lambda"] = real_json(lambda);
        const auto ev = thm2_evaluate(g, lambda, opt.b);
        const auto hc = hard_core_summary(g, Fugacity::uniform(g.vertex_count(), Rational(lambda)), opt.cap);
        const double ex = to_double(hc.expected_size);
        const double gap = ex - ev.bound;
        rec["expected_size"] = to_string(hc.expected_size);
        rec["bound"] = real_json(ev.bound);
        rec["gap"] = real_json(gap);
        res.note_gap(key, gap);
        check("thm2_bound", gap >= -1e-9);

        if (ev.isolated_stripped == 0) {
          const auto& p = ev.params;
          const auto cert = dual_certificate(g, p);
          rec["certificate"] = certificate_json(cert);
          check("cert_nonnegative", cert.nonnegative);
          check("cert_baseline", cert.dominates_baseline);
          check("rho_lgh", cert.rho_lgh <= 1 - 1e-9);
          const auto s = series_terms(g, p, 20);
          rec["series"] = {{"S1", real_json(s.s_terms.front())},
                           {"tail_sum", real_json(s.tail_sum)},
                           {"m_norm", real_json(s.m_norm)},
                           {"C", real_json(*s.big_c)},
                           {"s1_lower_est", real_json(*s.s1_lower_est)},
                           {"tail_upper_est", real_json(*s.tail_upper_est)},
                           {"terms", s.terms}};
          check("series_s1", s.s_terms.front() >= *s.s1_lower_est - 1e-10);
          check("series_tail", std::abs(s.tail_sum) <= *s.tail_upper_est + 1e-10);
          check("m_norm", s.m_norm <= 2 * *s.big_c);
          const auto prof = h_tau_profiles(lambda, opt.b, g.max_degree());
          check("profile_decreasing", prof.strictly_decreasing);
          check("profile_bounds", prof.bounds_hold);
          if (opt.b == 0) {
            const double lz = log_rational(hc.partition_function);
            const double lb = logz_bound_trianglefree(g, lambda);
            rec["logz"] = {{"log_partition", real_json(lz)}, {"bound", real_json(lb)}};
            check("logz_trianglefree", lb <= lz + 1e-9);
          }
        }
      } catch (const PreconditionError& e) {
        --res.instances;
        ++res.skipped;
        res.skip_reasons[key] = e.what();
        continue;
      } catch (const CapExceeded& e) {
        --res.instances;
        ++res.skipped;
        res.skip_reasons[key] = e.what();
        continue;
      }
      rec["pass"] = ok;
      if (ok) ++res.passes;
      else ++res.failures;
      if (!ok || opt.verbose) res.records[key] = rec;
    }
  }
  return res;
}

struct ScanOptions {
  std::vector<std::string> lambda_specs{"delta:9/10"};
  std::uint64_t seed = 1;
  std::size_t cap = default_enumeration_cap();
  bool verbose = false;
};

/// Evaluates E|X| - thm1_bound for arbitrary fugacities (no admissibility
/// restriction) and records every negative gap exactly.
inline CampaignResult conjecture_scan(const std::vector<NamedGraph>& graphs, const ScanOptions& opt) {
  CampaignResult res;
  res.mode = "scan";
  std::vector<LambdaSpec> specs;
  for (const auto& s : opt.lambda_specs) specs.push_back(parse_lambda_spec(s));
  Rng rng(opt.seed);
  for (const auto& ng : graphs) {
    for (std::size_t li = 0; li < specs.size(); ++li) {
      const std::string key = ng.key + "#" + detail::zero_pad(li, 2) + ":" + specs[li].text;
      const auto lambda = realize(specs[li], ng.graph, rng);
      try {
        const Rational gap = expected_size(ng.graph, lambda, opt.cap) - thm1_bound(ng.graph, lambda);
        ++res.instances;
        res.note_gap(key, gap);
        const bool ok = sgn(gap) >= 0;
        res.tally("nonnegative_gap", ok);
        if (ok) ++res.passes;
        else ++res.failures;
        if (!ok || opt.verbose)
          res.records[key] = {{"key", key},
                              {"graph", graph_json(ng.graph)},
                              {"lambda", fugacity_to_json(lambda)},
                              {"gap", to_string(gap)},
                              {"violation", !ok}};
      } catch (const CapExceeded& e) {
        ++res.skipped;
        res.skip_reasons[key] = e.what();
      }
    }
  }
  return res;
}

struct DemandCampaignOptions {
  std::vector<std::string> lambda_specs{"delta:1/2"};
  std::string demand = "certificate";
  std::size_t cap = default_enumeration_cap();
  bool strict = false;
  bool verbose = false;
};

/// Demand process over a family: membership certificate checks, including
/// the per-vertex degree form of the hit-time bound.
inline CampaignResult demand_campaign(const std::vector<NamedGraph>& graphs, const DemandCampaignOptions& opt) {
  CampaignResult res;
  res.mode = "frac-color";
  std::vector<LambdaSpec> specs;
  for (const auto& s : opt.lambda_specs) specs.push_back(parse_lambda_spec(s));
  const auto dspec = parse_demand_spec(opt.demand);
  Rng rng(1);
  for (const auto& ng : graphs) {
    const auto& g = ng.graph;
    for (std::size_t li = 0; li < specs.size(); ++li) {
      const std::string key = ng.key + "#" + detail::zero_pad(li, 2) + ":" + specs[li].text;
      try {
        const auto lambda = realize(specs[li], g, rng);
        const auto p = general_params(lambda);
        const auto q = realize_demand(dspec, g, p);
        const auto dc = check_demand(g, p, q);
        if (!dc.feasible) throw PreconditionError("demand infeasible");
        ++res.instances;
        const auto fc = run_demand_process(g, p, q, {.strict = opt.strict, .cap = opt.cap});
        const auto v = verify_membership(g, p, fc, q);
        bool ok = true;
        auto check = [&](const std::string& name, bool pass) {
          res.tally(name, pass);
          ok = ok && pass;
        };
        check("total_mass", fc.total_mass <= 1);
        check("hit_times", v.hit_times_at_most_one);
        check("support_independent", v.support_independent);
        check("marginals_cover", v.marginals_cover);
        check("sums_to_one", v.sums_to_one);
        check("load_bound", v.load_bound);
        check("degree_bound", v.degree_bound);
        check("phases", fc.active_sets.size() <= g.vertex_count());
        if (fc.occupancy_checked) check("strict_local_occupancy", fc.occupancy_held);
        Rational slack(1);
        for (const auto& t : fc.hit_times) slack = std::min(slack, Rational(1 - t));
        res.note_gap(key, slack);
        if (ok) ++res.passes;
        else ++res.failures;
        if (!ok || opt.verbose) {
          Json rec = to_json(fc, v);
          rec["key"] = key;
          rec["graph"] = graph_json(g);
          rec["demand"] = rational_array(q);
          rec["pass"] = ok;
          res.records[key] = rec;
        }
      } catch (const PreconditionError& e) {
        ++res.skipped;
        res.skip_reasons[key] = e.what();
      } catch (const SingularMatrix& e) {
        ++res.skipped;
        res.skip_reasons[key] = e.what();
      } catch (const CapExceeded& e) {
        ++res.skipped;
        res.skip_reasons[key] = e.what();
      }
    }
  }
  return res;
}

}  // namespace occucert
