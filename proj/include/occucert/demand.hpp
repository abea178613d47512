#pragma once

// Fractional colouring with demands: the event-driven weight process over
// independent sets. While a vertex is active (accumulated weight below its
// demand) every independent set I of the active subgraph gains weight at
// rate mu_{G[U]}(I); the process is piecewise linear, so it is simulated
// exactly from breakpoint to breakpoint.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "occucert/core.hpp"
#include "occucert/graph.hpp"
#include "occucert/hardcore.hpp"
#include "occucert/occupancy.hpp"

namespace occucert {

struct DemandCheck {
  RationalVector load;   // beta_u q_u + gamma_u sum_{v in N(u)} q_v
  RationalVector slack;  // 1 - load
  bool feasible = true;
  bool nonnegative = true;
};

/// Per-vertex slack of (B + Gamma A) q <= 1.
inline DemandCheck check_demand(const Graph& g, const ExactParams& p, const RationalVector& q) {
  detail::check_params(g, p);
  if (q.size() != g.vertex_count()) throw InputError("demand vector has the wrong length");
  DemandCheck out;
  for (std::size_t u = 0; u < q.size(); ++u) {
    Rational nsum(0);
    for (auto v : g.neighbors(u)) nsum += q[v];
    out.load.push_back(p.beta[u] * q[u] + p.gamma[u] * nsum);
    out.slack.push_back(1 - out.load.back());
    out.feasible = out.feasible && sgn(out.slack.back()) >= 0;
    out.nonnegative = out.nonnegative && sgn(q[u]) >= 0;
  }
  out.feasible = out.feasible && out.nonnegative;
  return out;
}

struct FractionalColoring {
  std::map<VertexSet, Rational> weights;  // w^I at the stopping time, positive only
  RationalVector breakpoints;             // t_0 = 0 < t_1 < ...
  RationalVector hit_times;               // T_u
  Rational total_mass;                    // w(G) at the stopping time
  std::vector<std::vector<std::size_t>> active_sets;  // U during phase j
  bool certifying = true;                 // all T_u <= 1
  bool occupancy_checked = false;         // strict mode ran
  bool occupancy_held = true;             // local occupancy on every visited G[U]

  /// The distribution nu: weights plus 1 - total_mass on the empty set.
  std::map<VertexSet, Rational> distribution() const {
    auto nu = weights;
    if (total_mass <= 1) {
      const Rational pad = 1 - total_mass;
      if (sgn(pad) > 0) nu[0] += pad;
    }
    return nu;
  }
};

struct DemandOptions {
  bool strict = false;  // verify local occupancy on every visited subgraph
  std::size_t cap = default_enumeration_cap();
};

/// Runs the process to completion. Vertices with q_v = 0 start inactive;
/// vertices reaching their demand at the same breakpoint leave together.
inline FractionalColoring run_demand_process(const Graph& g, const ExactParams& p,
                                             const RationalVector& q, DemandOptions opt = {}) {
  const auto check = check_demand(g, p, q);
  if (!check.feasible) throw PreconditionError("demand vector violates (B + Gamma A) q <= 1");
  for (const auto& l : p.lambda)
    if (sgn(l) <= 0) throw PreconditionError("demand process needs every fugacity > 0");
  const auto n = g.vertex_count();
  if (n > 63) throw CapExceeded(n, 63);
  const Fugacity lambda(p.lambda);

  FractionalColoring fc;
  fc.hit_times.assign(n, Rational(0));
  fc.breakpoints.push_back(Rational(0));
  RationalVector acc(n, Rational(0));
  std::vector<std::size_t> active;
  for (std::size_t v = 0; v < n; ++v)
    if (sgn(q[v]) > 0) active.push_back(v);
  Rational t(0);

  while (!active.empty()) {
    fc.active_sets.push_back(active);
    const auto model = induced_model(g, lambda, active);
    if (opt.strict) {
      fc.occupancy_checked = true;
      ExactParams sub;
      for (auto v : model.vertex_map) {
        sub.beta.push_back(p.beta[v]);
        sub.gamma.push_back(p.gamma[v]);
        sub.lambda.push_back(p.lambda[v]);
      }
      fc.occupancy_held = fc.occupancy_held && verify_local_occupancy(model.graph, sub, opt.cap).all_pass;
    }
    const auto probs = set_probabilities(model.graph, model.lambda, opt.cap);
    RationalVector rate(active.size(), Rational(0));
    for (const auto& [s, pr] : probs)
      for (VertexSet r = s; r; r &= r - 1) rate[static_cast<std::size_t>(__builtin_ctzll(r))] += pr;

    std::optional<Rational> dt;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const Rational need = (q[active[i]] - acc[active[i]]) / rate[i];
      if (!dt || need < *dt) dt = need;
    }
    for (const auto& [s, pr] : probs) {
      VertexSet lifted = 0;
      for (VertexSet r = s; r; r &= r - 1)
        lifted |= VertexSet{1} << model.vertex_map[static_cast<std::size_t>(__builtin_ctzll(r))];
      fc.weights[lifted] += *dt * pr;
    }
    t += *dt;
    fc.breakpoints.push_back(t);
    std::vector<std::size_t> still;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const auto v = active[i];
      acc[v] += *dt * rate[i];
      if (acc[v] == q[v]) fc.hit_times[v] = t;
      else still.push_back(v);
    }
    active = std::move(still);
  }
  for (const auto& [s, w] : fc.weights) fc.total_mass += w;
  fc.certifying = std::all_of(fc.hit_times.begin(), fc.hit_times.end(),
                              [](const Rational& x) { return x <= 1; });
  return fc;
}

struct MembershipVerdict {
  bool support_independent = true;
  bool weights_nonnegative = true;
  bool sums_to_one = true;
  bool marginals_cover = true;        // nu(v) >= q_v
  bool hit_times_at_most_one = true;  // T_u <= 1
  bool load_bound = true;             // T_u <= beta_u q_u + gamma_u sum_{N(u)} q_v
  bool degree_bound = true;           // T_u <= (beta_u + d_u gamma_u) q_u
  RationalVector marginals;
  std::vector<std::string> witnesses;

  /// Membership q in ind(G) is certified by the first five checks.
  bool certifies() const {
    return support_independent && weights_nonnegative && sums_to_one && marginals_cover &&
           hit_times_at_most_one;
  }
};

/// Exact checks of a produced colouring against the demand vector.
inline MembershipVerdict verify_membership(const Graph& g, const ExactParams& p,
                                           const FractionalColoring& fc, const RationalVector& q) {
  detail::check_params(g, p);
  const auto n = g.vertex_count();
  if (q.size() != n || fc.hit_times.size() != n) throw InputError("membership: length mismatch");
  MembershipVerdict v;
  v.marginals.assign(n, Rational(0));
  Rational total(0);
  const auto nu = fc.distribution();
  for (const auto& [s, mass] : nu) {
    if (s >> n) {
      v.support_independent = false;
      v.witnesses.push_back("set has a vertex outside the graph");
      continue;
    }
    const auto members = set_members(s);
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        if (g.adjacent(members[i], members[j])) {
          v.support_independent = false;
          v.witnesses.push_back("set contains edge " + std::to_string(members[i]) + "-" +
                                std::to_string(members[j]));
        }
    if (sgn(mass) < 0) {
      v.weights_nonnegative = false;
      v.witnesses.push_back("negative mass " + to_string(mass));
    }
    total += mass;
    for (auto m : members) v.marginals[m] += mass;
  }
  if (total != 1) {
    v.sums_to_one = false;
    v.witnesses.push_back("total mass " + to_string(total));
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (v.marginals[u] < q[u]) {
      v.marginals_cover = false;
      v.witnesses.push_back("vertex " + std::to_string(u) + " marginal " + to_string(v.marginals[u]) +
                            " < demand " + to_string(q[u]));
    }
    if (fc.hit_times[u] > 1) {
      v.hit_times_at_most_one = false;
      v.witnesses.push_back("vertex " + std::to_string(u) + " hit time " + to_string(fc.hit_times[u]));
    }
    Rational nsum(0);
    for (auto w : g.neighbors(u)) nsum += q[w];
    if (fc.hit_times[u] > p.beta[u] * q[u] + p.gamma[u] * nsum) {
      v.load_bound = false;
      v.witnesses.push_back("vertex " + std::to_string(u) + " exceeds its load bound");
    }
    const Rational degree_cap = (p.beta[u] + Rational(static_cast<long>(g.degree(u))) * p.gamma[u]) * q[u];
    if (fc.hit_times[u] > degree_cap) {
      v.degree_bound = false;
      v.witnesses.push_back("vertex " + std::to_string(u) + " hit time " + to_string(fc.hit_times[u]) +
                            " > (beta + d gamma) q = " + to_string(degree_cap));
    }
  }
  return v;
}

inline nlohmann::json to_json(const FractionalColoring& fc, const MembershipVerdict& v) {
  nlohmann::json bp = nlohmann::json::array(), ht = nlohmann::json::array(),
                 dist = nlohmann::json::array(), marg = nlohmann::json::array();
  for (const auto& t : fc.breakpoints) bp.push_back(to_string(t));
  for (const auto& t : fc.hit_times) ht.push_back(to_string(t));
  for (const auto& [s, mass] : fc.distribution())
    dist.push_back({{"set", set_members(s)}, {"mass", to_string(mass)}});
  for (const auto& m : v.marginals) marg.push_back(to_string(m));
  return {{"breakpoints", bp},
          {"hit_times", ht},
          {"distribution", dist},
          {"marginals", marg},
          {"total_mass", to_string(fc.total_mass)},
          {"verdict",
           {{"certifies", v.certifies()},
            {"support_independent", v.support_independent},
            {"weights_nonnegative", v.weights_nonnegative},
            {"sums_to_one", v.sums_to_one},
            {"marginals_cover", v.marginals_cover},
            {"hit_times_at_most_one", v.hit_times_at_most_one},
            {"load_bound", v.load_bound},
            {"degree_bound", v.degree_bound},
            {"witnesses", v.witnesses}}}};
}

}  // namespace occucert
