#pragma once

// Local occupancy: parameter families, the occupancy LP and its dual, the
// certificate y' = (B + A Gamma)^{-1} 1 with its spectral diagnostics, the
// series S_k = 1^T H^{-1} (L Gamma H^{-1})^k 1, and the degree-sequence
// lower bounds on E|X| and log Z.
//
// Scalars: the general (Gamma = I) pipeline is instantiated with Rational and
// is exact end to end. The bounded-local-mad pipeline involves Lambert W and
// runs in double; its verdicts carry explicit tolerances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "occucert/core.hpp"
#include "occucert/graph.hpp"
#include "occucert/hardcore.hpp"
#include "occucert/linalg.hpp"
#include "occucert/matrix.hpp"
#include "occucert/special_functions.hpp"

namespace occucert {

inline double as_double(double x) { return x; }
inline double as_double(const Rational& x) { return x.get_d(); }

enum class Flavor { general, mad };

inline const char* flavor_name(Flavor f) { return f == Flavor::general ? "general" : "mad"; }

/// Per-vertex local occupancy parameters (beta, gamma) together with the
/// fugacities they were derived for.
template <typename T>
struct OccupancyParams {
  std::vector<T> beta, gamma, lambda;
  Flavor flavor = Flavor::general;
  double b = 0;  // local mad bound, mad flavor only

  std::size_t size() const noexcept { return beta.size(); }
};

using ExactParams = OccupancyParams<Rational>;
using RealParams = OccupancyParams<double>;

namespace detail {

template <typename T>
void check_params(const Graph& g, const OccupancyParams<T>& p) {
  const auto n = g.vertex_count();
  if (p.beta.size() != n || p.gamma.size() != n || p.lambda.size() != n)
    throw InputError("occupancy parameters do not match the graph size");
}

template <typename T>
T degree_t(const Graph& g, std::size_t u) {
  return T(static_cast<long>(g.degree(u)));
}

}  // namespace detail

/// beta_u = 1 + 1/lambda_u, gamma = 1.
inline ExactParams general_params(const Fugacity& lambda) {
  if (!lambda.all_positive())
    throw PreconditionError("general occupancy parameters need every fugacity > 0");
  ExactParams p;
  p.flavor = Flavor::general;
  p.lambda = lambda.values();
  for (const auto& l : lambda.values()) {
    p.beta.push_back(1 + 1 / l);
    p.gamma.push_back(Rational(1));
  }
  return p;
}

/// True when 0 < lambda < c(b)/Delta with the truncated constants.
inline bool thm2_lambda_admissible(double lambda, double b, std::size_t max_degree) {
  if (max_degree == 0) return false;
  return lambda > 0 && lambda < c_of_b(b) / static_cast<double>(max_degree);
}

inline void check_b(double b) {
  if (!(b == 0 || b >= 1) || !std::isfinite(b))
    throw PreconditionError("local mad bound b must be 0 or at least 1");
}

/// Lambert-W parameters for graphs with local mad at most b:
///   D_u = d_u (1+l)^b log(1+l),
///   beta_u = ((1+l)/l) D_u / (W(D_u)(1+W(D_u))),
///   gamma_u = ((1+l)/l) D_u / (d_u (1+W(D_u))).
inline RealParams mad_params(const Graph& g, double lambda, double b) {
  check_b(b);
  if (g.has_isolated_vertex())
    throw PreconditionError("mad parameters need a graph without isolated vertices");
  if (!thm2_lambda_admissible(lambda, b, g.max_degree()))
    throw PreconditionError("lambda outside (0, c(b)/Delta)");
  RealParams p;
  p.flavor = Flavor::mad;
  p.b = b;
  const double scale = (1 + lambda) / lambda;
  const double s = std::pow(1 + lambda, b) * std::log1p(lambda);
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const double d = static_cast<double>(g.degree(u));
    const double big_d = d * s;
    const double w = lambert_w(big_d);
    p.beta.push_back(scale * big_d / (w * (1 + w)));
    p.gamma.push_back(scale * big_d / (d * (1 + w)));
    p.lambda.push_back(lambda);
  }
  return p;
}

// ------------------------------------------------------- local occupancy

template <typename T>
struct LocalOccupancyReport {
  std::vector<T> lhs;  // beta_u Pr(u in X) + gamma_u sum_{v in N(u)} Pr(v in X)
  std::vector<bool> pass;
  bool all_pass = true;
};

/// Evaluates the local occupancy inequality at every vertex from exact
/// marginals; a vertex passes when lhs >= 1 - 1e-12.
template <typename T>
LocalOccupancyReport<T> verify_local_occupancy(const Graph& g, const OccupancyParams<T>& p,
                                               std::size_t cap = default_enumeration_cap()) {
  detail::check_params(g, p);
  RationalVector lam;
  for (const auto& l : p.lambda) lam.push_back(Rational(l));  // exact for doubles
  const auto marg = hard_core_summary(g, Fugacity(lam), cap).marginals;
  std::vector<T> m;
  for (const auto& x : marg) {
    if constexpr (std::is_same_v<T, Rational>) m.push_back(x);
    else m.push_back(x.get_d());
  }
  LocalOccupancyReport<T> r;
  const T threshold = T(1) - T(1e-12);
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    T nsum = T(0);
    for (auto v : g.neighbors(u)) nsum += m[v];
    r.lhs.push_back(p.beta[u] * m[u] + p.gamma[u] * nsum);
    r.pass.push_back(r.lhs.back() >= threshold);
    r.all_pass = r.all_pass && r.pass.back();
  }
  return r;
}

// ------------------------------------------------------ dual conditions

/// The hypotheses under which the dual certificate is valid, each with its worst slack.
/// Slacks are 1 - max_u d_u gamma_u / beta_u and 1 - max_u sum_{N(u)} gamma_v / beta_v.
template <typename T>
struct DualConditions {
  bool positivity = true;
  bool degree_ratio = true;   // d_u gamma_u / beta_u < 1
  bool neighbor_sum = true;   // sum_{v in N(u)} gamma_v / beta_v <= 1
  bool no_isolated = true;
  T degree_ratio_slack = T(1);
  T neighbor_sum_slack = T(1);
  std::size_t worst_degree_vertex = 0, worst_neighbor_vertex = 0;
  double margin = 0;

  bool all() const { return positivity && degree_ratio && neighbor_sum && no_isolated; }
};

/// Strict inequalities on doubles need at least `margin` of slack; exact
/// scalars are compared exactly.
template <typename T>
DualConditions<T> check_dual_conditions(const Graph& g, const OccupancyParams<T>& p,
                                        const Tolerances& tol = {}) {
  detail::check_params(g, p);
  constexpr bool exact = std::is_same_v<T, Rational>;
  DualConditions<T> c;
  c.margin = exact ? 0.0 : tol.strict_margin;
  c.no_isolated = !g.has_isolated_vertex();
  const auto n = g.vertex_count();
  for (std::size_t u = 0; u < n; ++u)
    if (!(p.beta[u] > 0 && p.gamma[u] > 0 && p.lambda[u] > 0)) c.positivity = false;
  if (!c.positivity) {
    c.degree_ratio = c.neighbor_sum = false;
    return c;
  }
  std::vector<T> ratio(n);
  for (std::size_t u = 0; u < n; ++u) ratio[u] = p.gamma[u] / p.beta[u];
  for (std::size_t u = 0; u < n; ++u) {
    const T dslack = T(1) - detail::degree_t<T>(g, u) * ratio[u];
    if (dslack < c.degree_ratio_slack) {
      c.degree_ratio_slack = dslack;
      c.worst_degree_vertex = u;
    }
    T nsum = T(0);
    for (auto v : g.neighbors(u)) nsum += ratio[v];
    const T nslack = T(1) - nsum;
    if (nslack < c.neighbor_sum_slack) {
      c.neighbor_sum_slack = nslack;
      c.worst_neighbor_vertex = u;
    }
  }
  if constexpr (exact) {
    c.degree_ratio = sgn(c.degree_ratio_slack) > 0;
    c.neighbor_sum = sgn(c.neighbor_sum_slack) >= 0;
  } else {
    c.degree_ratio = c.degree_ratio_slack >= tol.strict_margin;
    c.neighbor_sum = c.neighbor_sum_slack >= -1e-12;
  }
  return c;
}

// ------------------------------------------------------ matrices

/// B + A Gamma (the dual constraint matrix).
template <typename T>
Matrix<T> dual_constraint_matrix(const Graph& g, const OccupancyParams<T>& p) {
  const auto n = g.vertex_count();
  Matrix<T> m(n, n);
  for (std::size_t u = 0; u < n; ++u) m(u, u) = p.beta[u];
  for (const auto& e : g.edges()) {
    m(e.u, e.v) = p.gamma[e.v];
    m(e.v, e.u) = p.gamma[e.u];
  }
  return m;
}

/// B + Gamma A (the primal constraint matrix).
template <typename T>
Matrix<T> primal_constraint_matrix(const Graph& g, const OccupancyParams<T>& p) {
  const auto n = g.vertex_count();
  Matrix<T> m(n, n);
  for (std::size_t u = 0; u < n; ++u) m(u, u) = p.beta[u];
  for (const auto& e : g.edges()) {
    m(e.u, e.v) = p.gamma[e.u];
    m(e.v, e.u) = p.gamma[e.v];
  }
  return m;
}

/// h_u = 1/(beta_u + d_u gamma_u), the diagonal of H^{-1}.
template <typename T>
std::vector<T> baseline_weights(const Graph& g, const OccupancyParams<T>& p) {
  std::vector<T> h(g.vertex_count());
  for (std::size_t u = 0; u < h.size(); ++u)
    h[u] = T(1) / (p.beta[u] + detail::degree_t<T>(g, u) * p.gamma[u]);
  return h;
}

/// B^{-1} A Gamma in double with its symmetrizer B Gamma.
template <typename T>
std::pair<RealMatrix, RealVector> b_inv_a_gamma(const Graph& g, const OccupancyParams<T>& p) {
  const auto n = g.vertex_count();
  RealMatrix t(n, n);
  RealVector sym(n);
  for (std::size_t u = 0; u < n; ++u) sym[u] = as_double(p.beta[u]) * as_double(p.gamma[u]);
  for (const auto& e : g.edges()) {
    t(e.u, e.v) = as_double(p.gamma[e.v]) / as_double(p.beta[e.u]);
    t(e.v, e.u) = as_double(p.gamma[e.u]) / as_double(p.beta[e.v]);
  }
  return {t, sym};
}

/// L Gamma H^{-1} in double with its symmetrizer K = Gamma H^{-1}.
template <typename T>
std::pair<RealMatrix, RealVector> l_gamma_h_inv(const Graph& g, const OccupancyParams<T>& p) {
  const auto n = g.vertex_count();
  const auto h = baseline_weights(g, p);
  RealVector k(n);
  for (std::size_t u = 0; u < n; ++u) k[u] = as_double(p.gamma[u] * h[u]);
  const auto lap = laplacian<double>(g);
  RealMatrix t(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) t(u, v) = lap(u, v) * k[v];
  return {t, k};
}

// ------------------------------------------------------ certificate

template <typename T>
struct DualCertificate {
  std::vector<T> y_prime;  // (B + A Gamma)^{-1} 1
  T objective = T(0);      // 1^T y'
  T baseline = T(0);       // 1^T H^{-1} 1
  bool identity_holds = false;   // (B + A Gamma) y' = 1 (exactly for Rational)
  bool nonnegative = false;      // y' >= 0 (exactly for Rational)
  bool dominates_baseline = false;
  double residual_max = 0;       // ||(B + A Gamma) y' - 1||_inf in double
  DualConditions<T> conditions;
  double rho_bagamma = 0;  // rho(B^{-1} A Gamma)
  double rho_lgh = 0;      // rho(L Gamma H^{-1})
};

/// Builds y' = (B + A Gamma)^{-1} 1 and its spectral diagnostics. Throws
/// PreconditionError when the certificate conditions fail.
template <typename T>
DualCertificate<T> dual_certificate(const Graph& g, const OccupancyParams<T>& p,
                                    const Tolerances& tol = {}) {
  DualCertificate<T> cert;
  cert.conditions = check_dual_conditions(g, p, tol);
  if (!cert.conditions.all()) {
    std::string why = !cert.conditions.no_isolated ? "graph has an isolated vertex"
                      : !cert.conditions.positivity ? "parameters are not all positive"
                      : !cert.conditions.degree_ratio
                          ? "d_u gamma_u / beta_u < 1 fails at vertex " +
                                std::to_string(cert.conditions.worst_degree_vertex)
                          : "neighbor sum of gamma_v / beta_v exceeds 1 at vertex " +
                                std::to_string(cert.conditions.worst_neighbor_vertex);
    throw PreconditionError("dual certificate conditions fail: " + why);
  }
  const auto n = g.vertex_count();
  const auto m = dual_constraint_matrix(g, p);
  const std::vector<T> ones(n, T(1));
  cert.y_prime = solve<T>(m, std::span<const T>(ones));

  const auto back = m * cert.y_prime;
  cert.identity_holds = true;
  cert.nonnegative = true;
  for (std::size_t u = 0; u < n; ++u) {
    if constexpr (std::is_same_v<T, Rational>) {
      cert.identity_holds = cert.identity_holds && back[u] == 1;
      cert.nonnegative = cert.nonnegative && sgn(cert.y_prime[u]) >= 0;
    } else {
      cert.identity_holds = cert.identity_holds && std::abs(back[u] - 1) <= 1e-9;
      cert.nonnegative = cert.nonnegative && cert.y_prime[u] >= -tol.abs;
    }
  }
  const auto md = to_real_matrix(m);
  for (std::size_t u = 0; u < n; ++u) {
    double acc = 0;
    for (std::size_t v = 0; v < n; ++v) acc += md(u, v) * as_double(cert.y_prime[v]);
    cert.residual_max = std::max(cert.residual_max, std::abs(acc - 1.0));
  }
  for (const auto& y : cert.y_prime) cert.objective += y;
  for (const auto& h : baseline_weights(g, p)) cert.baseline += h;
  if constexpr (std::is_same_v<T, Rational>) cert.dominates_baseline = cert.objective >= cert.baseline;
  else cert.dominates_baseline = cert.objective >= cert.baseline - tol.rel * std::abs(cert.baseline);

  {
    const auto [t, sym] = b_inv_a_gamma(g, p);
    cert.rho_bagamma = spectral_radius_similar(t, sym);
  }
  {
    const auto [t, sym] = l_gamma_h_inv(g, p);
    cert.rho_lgh = spectral_radius_similar(t, sym);
  }
  return cert;
}

// ------------------------------------------------------ series

struct SeriesDiagnostics {
  RealVector s_terms;           // S_1..S_K via iterated products
  RealVector s_terms_matrix;    // S_1..S_K via explicit matrix powers
  std::size_t terms = 0;        // K
  double truncation_bound = 0;  // bound on sum_{k>K} |S_k|
  double m_norm = 0;            // ||T^{1/2} L T^{1/2}||
  double s1_edge_form = 0;      // sum_{uv in E} (h_u - h_v)(tau_u - tau_v)
  double h_l_h = 0, tau_l_tau = 0;
  double series_sum = 0;        // sum_{k=1..K} S_k
  double tail_sum = 0;          // sum_{k=2..K} S_k
  double certificate_gap = 0;   // 1^T y' - 1^T H^{-1} 1, from a direct solve
  std::uint64_t disparity = 0;
  RealVector h_vec, tau_vec;
  // Bounded-local-mad estimates (mad flavor only).
  std::optional<double> big_c, s1_lower_est, tail_upper_est;
};

/// S_k = h^T (L T)^k 1 with h = H^{-1} 1 and T = Gamma H^{-1}, for k = 1..K.
/// K is raised, if needed, until the geometric tail bound
/// ||M||^{K+1}/(1 - ||M||) ||T^{-1/2} h|| ||T^{1/2} 1|| is below 1e-12.
template <typename T>
SeriesDiagnostics series_terms(const Graph& g, const OccupancyParams<T>& p, std::size_t min_terms) {
  detail::check_params(g, p);
  if (g.has_isolated_vertex()) throw PreconditionError("series needs a graph without isolated vertices");
  const auto n = g.vertex_count();
  SeriesDiagnostics out;
  out.disparity = disparity_energy(g);
  const auto hw = baseline_weights(g, p);
  for (std::size_t u = 0; u < n; ++u) {
    out.h_vec.push_back(as_double(hw[u]));
    out.tau_vec.push_back(as_double(p.gamma[u] * hw[u]));
  }
  const auto& h = out.h_vec;
  const auto& tau = out.tau_vec;
  const auto lap = laplacian<double>(g);

  RealMatrix m(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) m(u, v) = std::sqrt(tau[u]) * lap(u, v) * std::sqrt(tau[v]);
  out.m_norm = spectral_radius_symmetric(m);
  if (!(out.m_norm < 1.0))
    throw PreconditionError("series needs rho(L Gamma H^{-1}) < 1, got " + std::to_string(out.m_norm));

  double u_norm = 0, v_norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    u_norm += h[i] * h[i] / tau[i];
    v_norm += tau[i];
  }
  const double scale = std::sqrt(u_norm * v_norm);
  std::size_t k_terms = std::max<std::size_t>(min_terms, 1);
  auto tail = [&](std::size_t k) { return std::pow(out.m_norm, static_cast<double>(k + 1)) / (1 - out.m_norm) * scale; };
  while (tail(k_terms) >= 1e-12 && k_terms < 100000) ++k_terms;
  out.terms = k_terms;
  out.truncation_bound = tail(k_terms);

  // Route 1: v_k = L (tau o v_{k-1}), S_k = h . v_k.
  RealVector vec(n, 1.0);
  for (std::size_t k = 1; k <= k_terms; ++k) {
    RealVector scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = tau[i] * vec[i];
    vec = lap * scaled;
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += h[i] * vec[i];
    out.s_terms.push_back(s);
  }
  // Route 2: explicit powers of the matrix L T (first min(K, 64) terms).
  RealMatrix lt(n, n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) lt(u, v) = lap(u, v) * tau[v];
  RealMatrix power = RealMatrix::identity(n);
  for (std::size_t k = 1; k <= std::min<std::size_t>(k_terms, 64); ++k) {
    power = power * lt;
    double s = 0;
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) s += h[u] * power(u, v);
    out.s_terms_matrix.push_back(s);
  }

  for (const auto& e : g.edges()) {
    out.s1_edge_form += (h[e.u] - h[e.v]) * (tau[e.u] - tau[e.v]);
    out.h_l_h += (h[e.u] - h[e.v]) * (h[e.u] - h[e.v]);
    out.tau_l_tau += (tau[e.u] - tau[e.v]) * (tau[e.u] - tau[e.v]);
  }
  for (std::size_t k = 0; k < out.s_terms.size(); ++k) {
    out.series_sum += out.s_terms[k];
    if (k >= 1) out.tail_sum += out.s_terms[k];
  }

  {
    const auto md = [&] {
      RealMatrix r(n, n);
      for (std::size_t u = 0; u < n; ++u) r(u, u) = as_double(p.beta[u]);
      for (const auto& e : g.edges()) {
        r(e.u, e.v) = as_double(p.gamma[e.v]);
        r(e.v, e.u) = as_double(p.gamma[e.u]);
      }
      return r;
    }();
    const RealVector ones(n, 1.0);
    const auto y = solve<double>(md, std::span<const double>(ones));
    double obj = 0, base = 0;
    for (std::size_t u = 0; u < n; ++u) {
      obj += y[u];
      base += h[u];
    }
    out.certificate_gap = obj - base;
  }

  if (p.flavor == Flavor::mad) {
    const double lambda = as_double(p.lambda.front());
    const double c = c_of_b(p.b);
    const double big_c = c * std::pow(1 + c, p.b);
    const double l4 = std::pow(lambda, 4);
    const double ed = static_cast<double>(out.disparity);
    out.big_c = big_c;
    out.s1_lower_est = 2 * l4 * series_head_factor(big_c) * ed;
    out.tail_upper_est = 2 * l4 * std::pow(1 + c, std::max(3 * p.b - 1, 0.0)) * series_tail_factor(big_c) * ed;
  }
  return out;
}

// ------------------------------------------------------ h and tau profiles

struct ProfilePoint {
  double x, h, tau, dh, dtau;
};

struct HTauProfile {
  std::vector<ProfilePoint> points;
  double big_c = 0;
  double dh_lower = 0, dh_upper = 0;      // bounds on -h'
  double dtau_lower = 0, dtau_upper = 0;  // bounds on -tau'
  bool strictly_decreasing = true;        // on integer x in [1, Delta]
  bool bounds_hold = true;
};

/// h(x) = (l/((1+l)s)) w(x)/x and tau(x) = w(x)/(x(1+w(x))) with
/// s = (1+l)^b log(1+l), w(x) = W(sx), tabulated on [1, Delta] with
/// `subdivisions` points per unit step, together with analytic derivatives.
inline HTauProfile h_tau_profiles(double lambda, double b, std::size_t max_degree,
                                  std::size_t subdivisions = 8) {
  check_b(b);
  if (!thm2_lambda_admissible(lambda, b, max_degree))
    throw PreconditionError("lambda outside (0, c(b)/Delta)");
  HTauProfile out;
  const double s = std::pow(1 + lambda, b) * std::log1p(lambda);
  const double pref = lambda / ((1 + lambda) * s);
  const double c = c_of_b(b);
  out.big_c = c * std::pow(1 + c, b);
  const double cc = out.big_c, l2 = lambda * lambda;
  out.dh_lower = l2 * std::exp(-2 * cc) / std::pow(1 + cc, 3);
  out.dh_upper = l2 * std::pow(1 + lambda, b - 1);
  out.dtau_lower = 2 * l2 * std::exp(-2 * cc) / std::pow(1 + cc, 5);
  out.dtau_upper = 2 * l2 * std::pow(1 + lambda, 2 * b);

  const std::size_t steps = std::max<std::size_t>(subdivisions, 1);
  const std::size_t count = (max_degree - 1) * steps + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = 1.0 + static_cast<double>(i) / static_cast<double>(steps);
    const double w = lambert_w(s * x);
    ProfilePoint pt{x, pref * w / x, w / (x * (1 + w)),
                    -pref * w * w / (x * x * (1 + w)),
                    -w * w * (2 + w) / (x * x * std::pow(1 + w, 3))};
    out.bounds_hold = out.bounds_hold && out.dh_lower < -pt.dh && -pt.dh < out.dh_upper &&
                      out.dtau_lower < -pt.dtau && -pt.dtau < out.dtau_upper;
    out.points.push_back(pt);
  }
  for (std::size_t i = steps; i < out.points.size(); i += steps) {
    const auto& prev = out.points[i - steps];
    const auto& cur = out.points[i];
    out.strictly_decreasing = out.strictly_decreasing && cur.h < prev.h && cur.tau < prev.tau;
  }
  return out;
}

// ------------------------------------------------------ bounds

/// True when lambda_u < 1/Delta for every u (any lambda when Delta = 0).
inline bool thm1_lambda_admissible(const Graph& g, const Fugacity& lambda) {
  const auto delta = g.max_degree();
  if (delta == 0) return true;
  const Rational limit(1, static_cast<unsigned long>(delta));
  return std::all_of(lambda.values().begin(), lambda.values().end(),
                     [&](const Rational& l) { return l < limit; });
}

/// sum_u lambda_u / (1 + (d_u + 1) lambda_u), exactly.
inline Rational thm1_bound(const Graph& g, const Fugacity& lambda) {
  detail::check_model(g, lambda);
  Rational total(0);
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const Rational d1(static_cast<long>(g.degree(u) + 1));
    total += lambda[u] / (1 + d1 * lambda[u]);
  }
  return total;
}

/// Graph with isolated vertices removed (and the labels kept, in order).
inline InducedModel strip_isolated(const Graph& g, const Fugacity& lambda) {
  std::vector<std::size_t> keep;
  for (std::size_t u = 0; u < g.vertex_count(); ++u)
    if (g.degree(u) > 0) keep.push_back(u);
  return induced_model(g, lambda, keep);
}

struct Thm2Evaluation {
  double bound = 0;
  std::size_t isolated_stripped = 0;
  RealParams params;  // on the stripped graph
};

/// sum_u 1/(beta_u + d_u gamma_u) with the Lambert-W parameters. Isolated
/// vertices are stripped first (their contribution to E|X| is nonnegative).
inline Thm2Evaluation thm2_evaluate(const Graph& g, double lambda, double b) {
  check_b(b);
  const auto stripped = strip_isolated(g, Fugacity::uniform(g.vertex_count(), Rational(0)));
  const Graph& core = stripped.graph;
  if (core.vertex_count() == 0) throw PreconditionError("graph has no edges");
  const Rational bq(b);
  for (const auto& m : neighborhood_mad_profile(core))
    if (m > bq) throw PreconditionError("a neighborhood has mad " + to_string(m) + " > b");
  Thm2Evaluation out;
  out.isolated_stripped = g.vertex_count() - core.vertex_count();
  out.params = mad_params(core, lambda, b);
  for (const auto& h : baseline_weights(core, out.params)) out.bound += h;
  return out;
}

inline double thm2_bound(const Graph& g, double lambda, double b) {
  return thm2_evaluate(g, lambda, b).bound;
}

/// sum_u log(1 + (d_u+1) lambda_u) / (d_u + 1): the bound on log Z obtained
/// by integrating thm1_bound(g, t lambda)/t over t in [0, 1].
inline double logz_bound_thm1(const Graph& g, const Fugacity& lambda) {
  detail::check_model(g, lambda);
  double total = 0;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    const Rational d1(static_cast<long>(g.degree(u) + 1));
    total += log_rational(1 + d1 * lambda[u]) / d1.get_d();
  }
  return total;
}

/// Per-vertex term (W^2 + 2W)/(2d) with W = W(d log(1+lambda)).
inline double logz_trianglefree_term(std::size_t degree, double lambda) {
  const double d = static_cast<double>(degree);
  const double w = lambert_w(d * std::log1p(lambda));
  return (w * w + 2 * w) / (2 * d);
}

/// sum_u (W(d_u log(1+l))^2 + 2 W(d_u log(1+l))) / (2 d_u) for triangle-free
/// graphs without isolated vertices and 0 < l < c(0)/Delta.
inline double logz_bound_trianglefree(const Graph& g, double lambda) {
  if (!is_triangle_free(g)) throw PreconditionError("graph is not triangle-free");
  if (g.has_isolated_vertex()) throw PreconditionError("graph has an isolated vertex");
  if (!thm2_lambda_admissible(lambda, 0, g.max_degree()))
    throw PreconditionError("lambda outside (0, c(0)/Delta)");
  double total = 0;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) total += logz_trianglefree_term(g.degree(u), lambda);
  return total;
}

// ------------------------------------------------------ LP by basis enumeration

struct LpOptimum {
  Rational optimum;
  RationalVector witness;
  std::uint64_t bases_examined = 0;
  std::uint64_t feasible_bases = 0;
};

inline constexpr std::size_t kLpVertexLimit = 12;

/// Exact optimum of min 1^T x s.t. (B + Gamma A) x >= 1, x >= 0 by
/// enumerating every basis: a set Z of variables fixed at zero and an equally
/// sized complement of tight rows. Each basis is screened in double and the
/// candidates that can attain the minimum are re-solved and re-checked
/// exactly. Ties go to the first basis in enumeration order.
inline LpOptimum lp_optimum_bruteforce(const Graph& g, const ExactParams& p) {
  detail::check_params(g, p);
  const auto n = g.vertex_count();
  if (n == 0) return {Rational(0), {}, 0, 0};
  if (n > kLpVertexLimit) throw CapExceeded(n, kLpVertexLimit);
  const auto cm = primal_constraint_matrix(g, p);
  const auto cd = to_real_matrix(cm);
  const ModularSingularity modular(cm);

  struct Candidate {
    double objective;
    std::uint32_t free_mask, row_mask;
    std::uint64_t order;
  };
  std::vector<Candidate> candidates;
  LpOptimum out;
  const std::uint32_t full = (1u << n) - 1;

  auto cols_of = [](std::uint32_t mask) {
    std::vector<std::size_t> v;
    for (; mask; mask &= mask - 1) v.push_back(static_cast<std::size_t>(__builtin_ctz(mask)));
    return v;
  };

  // Exact solve and feasibility check of one basis.
  auto exact_point = [&](std::uint32_t free_mask, std::uint32_t row_mask) -> std::optional<RationalVector> {
    const auto cols = cols_of(free_mask), rows = cols_of(row_mask);
    RationalMatrix sub(cols.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) sub(i, j) = cm(rows[i], cols[j]);
    RationalVector xs;
    try {
      const RationalVector ones(cols.size(), Rational(1));
      xs = solve_exact(sub, ones);
    } catch (const SingularMatrix&) {
      return std::nullopt;
    }
    RationalVector x(n, Rational(0));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (sgn(xs[j]) < 0) return std::nullopt;
      x[cols[j]] = xs[j];
    }
    const auto lhs = cm * x;
    for (const auto& v : lhs)
      if (v < 1) return std::nullopt;
    return x;
  };

  // Nonzero pattern of each row (the matrix is pattern-symmetric).
  std::vector<std::uint32_t> support(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(cm(i, j)) != 0) support[i] |= 1u << j;
  auto structurally_singular = [&](std::uint32_t free_mask, std::uint32_t row_mask) {
    for (std::uint32_t r = row_mask; r; r &= r - 1)
      if ((support[__builtin_ctz(r)] & free_mask) == 0) return true;
    for (std::uint32_t c = free_mask; c; c &= c - 1)
      if ((support[__builtin_ctz(c)] & row_mask) == 0) return true;
    return false;
  };

  std::uint64_t order = 0;
  for (std::uint32_t free_mask = 0; free_mask <= full; ++free_mask) {
    const auto cols = cols_of(free_mask);
    const auto k = cols.size();
    // Row sets of size k in increasing order (Gosper's hack).
    auto next_rows = [&](std::uint32_t m) -> std::uint32_t {
      if (m == 0) return full + 1;
      const std::uint32_t low = m & -m, ripple = m + low;
      return (((ripple ^ m) >> 2) / low) | ripple;
    };
    for (std::uint32_t row_mask = k == 0 ? 0 : (1u << k) - 1; row_mask <= full; row_mask = next_rows(row_mask)) {
      ++out.bases_examined;
      ++order;
      if (structurally_singular(free_mask, row_mask)) continue;
      const auto rows = cols_of(row_mask);
      RealVector x(n, 0.0);
      bool feasible = true;
      if (k > 0) {
        RealMatrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub(i, j) = cd(rows[i], cols[j]);
        const RealVector ones(k, 1.0);
        try {
          const auto xs = solve<double>(sub, std::span<const double>(ones));
          for (std::size_t j = 0; j < k; ++j) x[cols[j]] = xs[j];
        } catch (const SingularMatrix&) {
          // Numerically singular: decide exactly, modular test first.
          if (modular.singular(rows, cols).value_or(false)) continue;
          const auto exact = exact_point(free_mask, row_mask);
          if (!exact) continue;
          x = to_doubles(*exact);
        }
      }
      double xmax = 1.0;
      for (double v : x) xmax = std::max(xmax, std::abs(v));
      const double slack = 1e-7 * xmax;
      for (double v : x) feasible = feasible && v >= -slack;
      if (!feasible) continue;
      const auto lhs = cd * x;
      for (double v : lhs) feasible = feasible && v >= 1.0 - slack;
      if (!feasible) continue;
      double obj = 0;
      for (double v : x) obj += v;
      candidates.push_back({obj, free_mask, row_mask, order});
    }
    if (free_mask == full) break;
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.objective < b.objective; });
  std::optional<Rational> best;
  std::uint64_t best_order = 0;
  for (const auto& cand : candidates) {
    if (best && cand.objective > best->get_d() + 1e-6 * std::max(1.0, best->get_d())) break;
    const auto x = exact_point(cand.free_mask, cand.row_mask);
    if (!x) continue;
    ++out.feasible_bases;
    Rational obj(0);
    for (const auto& v : *x) obj += v;
    if (!best || obj < *best || (obj == *best && cand.order < best_order)) {
      best = obj;
      best_order = cand.order;
      out.witness = *x;
    }
  }
  if (!best) throw Error("LP basis enumeration found no feasible basis");
  out.optimum = *best;
  return out;
}

}  // namespace occucert
