#pragma once

// Exact multivariate hard-core model by enumeration of independent sets over
// GMP rationals. Everything else in the library is checked against this.

#include <algorithm>
#include <functional>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "occucert/core.hpp"
#include "occucert/graph.hpp"

namespace occucert {

/// Nonnegative per-vertex fugacities.
class Fugacity {
 public:
  Fugacity() = default;
  explicit Fugacity(RationalVector values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (sgn(values_[i]) < 0)
        throw InputError("fugacity entry " + std::to_string(i) + " is negative");
  }
  static Fugacity uniform(std::size_t n, const Rational& value) {
    return Fugacity(RationalVector(n, value));
  }

  std::size_t size() const noexcept { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const RationalVector& values() const noexcept { return values_; }

  bool all_positive() const {
    return std::all_of(values_.begin(), values_.end(), [](const Rational& x) { return sgn(x) > 0; });
  }
  bool is_uniform() const {
    return std::adjacent_find(values_.begin(), values_.end(), std::not_equal_to<>()) ==
           values_.end();
  }
  Fugacity scaled(const Rational& t) const {
    RationalVector v(values_);
    for (auto& x : v) x *= t;
    return Fugacity(std::move(v));
  }

  friend bool operator==(const Fugacity&, const Fugacity&) = default;

 private:
  RationalVector values_;
};

/// Parses {"uniform": "p/q"} or {"values": ["p1/q1", ...]}. A uniform spec is
/// expanded to `n` entries; an explicit vector must have length n.
inline Fugacity parse_fugacity_json(const std::string& text, std::size_t n) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("fugacity JSON: ") + e.what());
  }
  auto as_rational = [](const nlohmann::json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw InputError("fugacity JSON: rationals must be strings \"p/q\"");
  };
  if (!j.is_object()) throw InputError("fugacity JSON: expected an object");
  if (j.contains("uniform")) return Fugacity::uniform(n, as_rational(j["uniform"]));
  if (j.contains("values") && j["values"].is_array()) {
    RationalVector v;
    for (const auto& x : j["values"]) v.push_back(as_rational(x));
    if (v.size() != n)
      throw InputError("fugacity JSON: " + std::to_string(v.size()) + " values for " +
                       std::to_string(n) + " vertices");
    return Fugacity(std::move(v));
  }
  throw InputError("fugacity JSON: expected key 'uniform' or 'values'");
}

inline nlohmann::json fugacity_to_json(const Fugacity& f) {
  if (f.size() > 0 && f.is_uniform()) return {{"uniform", to_string(f[0])}};
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : f.values()) arr.push_back(to_string(x));
  return {{"values", arr}};
}

using VertexSet = std::uint64_t;  // bit v <=> vertex v

inline std::vector<std::size_t> set_members(VertexSet s) {
  std::vector<std::size_t> out;
  for (; s; s &= s - 1) out.push_back(static_cast<std::size_t>(__builtin_ctzll(s)));
  return out;
}

struct HardCoreSummary {
  Rational partition_function;
  RationalVector marginals;
  Rational expected_size;
};

namespace detail {

inline void check_model(const Graph& g, const Fugacity& lambda) {
  if (lambda.size() != g.vertex_count())
    throw InputError("fugacity has " + std::to_string(lambda.size()) + " entries for " +
                     std::to_string(g.vertex_count()) + " vertices");
}

/// Calls visit(set, weight) for every independent set of G[order] with
/// positive weight. Bit i of `set` stands for vertex order[i]; weight is the
/// product of fugacities. |order| must be at most 63.
template <typename Visit>
void for_each_independent_set(const Graph& g, const std::vector<std::size_t>& order,
                              const Fugacity& lambda, Visit&& visit) {
  const auto k = order.size();
  std::vector<std::size_t> slot(g.vertex_count(), SIZE_MAX);
  for (std::size_t i = 0; i < k; ++i) slot[order[i]] = i;
  std::vector<VertexSet> nb(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (auto w : g.neighbors(order[i]))
      if (slot[w] != SIZE_MAX) nb[i] |= VertexSet{1} << slot[w];
  struct Frame {
    std::size_t next;
    VertexSet set, blocked;
    Rational weight;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, 0, Rational(1)});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    visit(f.set, f.weight);
    // Children only add positions after `next`, so each set appears once.
    for (std::size_t i = k; i-- > f.next;) {
      const VertexSet bit = VertexSet{1} << i;
      if (f.blocked & bit) continue;
      if (sgn(lambda[order[i]]) == 0) continue;  // zero-weight sets add nothing
      stack.push_back({i + 1, f.set | bit, f.blocked | nb[i], f.weight * lambda[order[i]]});
    }
  }
}

inline void check_cap(std::size_t size, std::size_t cap) {
  if (size > cap || size > 63) throw CapExceeded(size, std::min<std::size_t>(cap, 63));
}

}  // namespace detail

/// All independent sets of g including the empty set, ordered by increasing
/// bitmask (vertex v is bit v).
inline std::vector<VertexSet> enumerate_independent_sets(const Graph& g,
                                                         std::size_t cap = default_enumeration_cap()) {
  detail::check_cap(g.vertex_count(), cap);
  std::vector<std::size_t> order(g.vertex_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<VertexSet> sets;
  // Unit weights so every set is visited.
  const auto ones = Fugacity::uniform(g.vertex_count(), Rational(1));
  detail::for_each_independent_set(g, order, ones, [&](VertexSet s, const Rational&) { sets.push_back(s); });
  std::sort(sets.begin(), sets.end());
  return sets;
}

/// Exact partition function, marginals and expected size. Components are
/// enumerated separately; the cap applies per component.
inline HardCoreSummary hard_core_summary(const Graph& g, const Fugacity& lambda,
                                         std::size_t cap = default_enumeration_cap()) {
  detail::check_model(g, lambda);
  HardCoreSummary out{Rational(1), RationalVector(g.vertex_count(), Rational(0)), Rational(0)};
  for (const auto& comp : connected_components(g)) {
    detail::check_cap(comp.size(), cap);
    Rational z(0);
    RationalVector num(comp.size(), Rational(0));
    detail::for_each_independent_set(g, comp, lambda, [&](VertexSet s, const Rational& w) {
      z += w;
      for (; s; s &= s - 1) num[static_cast<std::size_t>(__builtin_ctzll(s))] += w;
    });
    out.partition_function *= z;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      out.marginals[comp[i]] = num[i] / z;
      out.expected_size += out.marginals[comp[i]];
    }
  }
  return out;
}

inline Rational partition_function(const Graph& g, const Fugacity& lambda,
                                   std::size_t cap = default_enumeration_cap()) {
  detail::check_model(g, lambda);
  Rational z(1);
  for (const auto& comp : connected_components(g)) {
    detail::check_cap(comp.size(), cap);
    Rational zc(0);
    detail::for_each_independent_set(g, comp, lambda, [&](VertexSet, const Rational& w) { zc += w; });
    z *= zc;
  }
  return z;
}

inline RationalVector marginals(const Graph& g, const Fugacity& lambda,
                                std::size_t cap = default_enumeration_cap()) {
  return hard_core_summary(g, lambda, cap).marginals;
}

inline Rational expected_size(const Graph& g, const Fugacity& lambda,
                              std::size_t cap = default_enumeration_cap()) {
  return hard_core_summary(g, lambda, cap).expected_size;
}

/// log Z evaluated from the exact rational.
inline double log_partition(const Graph& g, const Fugacity& lambda,
                            std::size_t cap = default_enumeration_cap()) {
  return log_rational(partition_function(g, lambda, cap));
}

/// Probability of every independent set with positive weight, ordered by
/// bitmask. Enumerates the whole graph, so the cap applies to n.
inline std::vector<std::pair<VertexSet, Rational>> set_probabilities(
    const Graph& g, const Fugacity& lambda, std::size_t cap = default_enumeration_cap()) {
  detail::check_model(g, lambda);
  detail::check_cap(g.vertex_count(), cap);
  std::vector<std::size_t> order(g.vertex_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::pair<VertexSet, Rational>> out;
  Rational z(0);
  detail::for_each_independent_set(g, order, lambda, [&](VertexSet s, const Rational& w) {
    out.emplace_back(s, w);
    z += w;
  });
  for (auto& [s, p] : out) p /= z;
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

/// Hard-core model restricted to the induced subgraph on `active`.
struct InducedModel {
  Graph graph;
  Fugacity lambda;
  std::vector<std::size_t> vertex_map;  // new label -> original vertex
};

inline InducedModel induced_model(const Graph& g, const Fugacity& lambda,
                                  std::vector<std::size_t> active) {
  detail::check_model(g, lambda);
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  RationalVector sub;
  sub.reserve(active.size());
  for (auto v : active) {
    if (v >= g.vertex_count()) throw InputError("active vertex out of range");
    sub.push_back(lambda[v]);
  }
  return {induced_subgraph(g, active), Fugacity(std::move(sub)), std::move(active)};
}

}  // namespace occucert
