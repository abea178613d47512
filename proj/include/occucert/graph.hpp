#pragma once

// Simple undirected graphs on vertices 0..n-1 and the matrix and density
// quantities the occupancy analysis consumes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "occucert/core.hpp"
#include "occucert/matrix.hpp"

namespace occucert {

struct Edge {
  std::size_t u = 0, v = 0;  // u < v
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple graph. Edges are stored canonically (u < v, sorted).
class Graph {
 public:
  Graph() = default;

  /// Builds a graph; duplicate edges are dropped, self-loops and
  /// out-of-range endpoints are rejected.
  static Graph from_edge_list(std::size_t n,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    Graph g;
    g.n_ = n;
    g.adj_.assign(n * n, 0);
    g.nbrs_.assign(n, {});
    for (const auto& [a, b] : pairs) {
      if (a >= n || b >= n)
        throw InputError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                         ") has an endpoint outside 0.." + std::to_string(n == 0 ? 0 : n - 1));
      if (a == b) throw InputError("self-loop at vertex " + std::to_string(a));
      g.edges_.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());
    for (const auto& e : g.edges_) {
      g.adj_[e.u * n + e.v] = g.adj_[e.v * n + e.u] = 1;
      g.nbrs_[e.u].push_back(e.v);
      g.nbrs_[e.v].push_back(e.u);
    }
    for (auto& nb : g.nbrs_) std::sort(nb.begin(), nb.end());
    return g;
  }

  static Graph empty(std::size_t n) { return from_edge_list(n, {}); }

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t u) const { return nbrs_.at(u); }
  std::size_t degree(std::size_t u) const { return nbrs_.at(u).size(); }
  bool adjacent(std::size_t u, std::size_t v) const { return adj_[u * n_ + v] != 0; }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> d(n_);
    for (std::size_t u = 0; u < n_; ++u) d[u] = nbrs_[u].size();
    return d;
  }
  std::size_t max_degree() const {
    std::size_t m = 0;
    for (const auto& nb : nbrs_) m = std::max(m, nb.size());
    return m;
  }
  bool has_isolated_vertex() const {
    return std::any_of(nbrs_.begin(), nbrs_.end(), [](const auto& nb) { return nb.empty(); });
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint8_t> adj_;
  std::vector<std::vector<std::size_t>> nbrs_;
};

struct DegreeProfile {
  std::vector<std::size_t> degrees;
  std::size_t max_degree = 0;
  std::uint64_t disparity_energy = 0;
};

/// Sum over edges of (d_u - d_v)^2.
inline std::uint64_t disparity_energy(const Graph& g) {
  std::uint64_t total = 0;
  for (const auto& e : g.edges()) {
    const auto du = static_cast<std::int64_t>(g.degree(e.u));
    const auto dv = static_cast<std::int64_t>(g.degree(e.v));
    total += static_cast<std::uint64_t>((du - dv) * (du - dv));
  }
  return total;
}

inline DegreeProfile degree_profile(const Graph& g) {
  return {g.degrees(), g.max_degree(), disparity_energy(g)};
}

template <typename T = double>
Matrix<T> adjacency_matrix(const Graph& g) {
  const auto n = g.vertex_count();
  Matrix<T> a(n, n);
  for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = T(1);
  return a;
}

template <typename T = double>
Matrix<T> degree_matrix(const Graph& g) {
  const auto n = g.vertex_count();
  Matrix<T> d(n, n);
  for (std::size_t u = 0; u < n; ++u) d(u, u) = T(static_cast<long>(g.degree(u)));
  return d;
}

/// Combinatorial Laplacian L = D - A.
template <typename T = double>
Matrix<T> laplacian(const Graph& g) {
  return degree_matrix<T>(g) - adjacency_matrix<T>(g);
}

/// Normalized Laplacian D^{-1/2} L D^{-1/2}; requires no isolated vertices.
inline RealMatrix normalized_laplacian(const Graph& g) {
  if (g.has_isolated_vertex())
    throw PreconditionError("normalized Laplacian needs a graph without isolated vertices");
  const auto n = g.vertex_count();
  RealMatrix m(n, n);
  for (std::size_t u = 0; u < n; ++u) m(u, u) = 1.0;
  for (const auto& e : g.edges()) {
    const double w = -1.0 / std::sqrt(static_cast<double>(g.degree(e.u) * g.degree(e.v)));
    m(e.u, e.v) = m(e.v, e.u) = w;
  }
  return m;
}

/// Induced subgraph on `vertices` (in the given order, which becomes the new
/// labelling 0..k-1).
inline Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& vertices) {
  std::vector<std::size_t> pos(g.vertex_count(), SIZE_MAX);
  for (std::size_t i = 0; i < vertices.size(); ++i) pos.at(vertices[i]) = i;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : g.edges())
    if (pos[e.u] != SIZE_MAX && pos[e.v] != SIZE_MAX) pairs.emplace_back(pos[e.u], pos[e.v]);
  return Graph::from_edge_list(vertices.size(), pairs);
}

/// Connected components, each sorted ascending, ordered by smallest vertex.
inline std::vector<std::vector<std::size_t>> connected_components(const Graph& g) {
  const auto n = g.vertex_count();
  std::vector<int> seen(n, 0);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto v : g.neighbors(u))
        if (!seen[v]) {
          seen[v] = 1;
          comp.push_back(v);
          stack.push_back(v);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline bool is_connected(const Graph& g) {
  return g.vertex_count() > 0 && connected_components(g).size() == 1;
}

inline bool is_triangle_free(const Graph& g) {
  for (const auto& e : g.edges())
    for (auto w : g.neighbors(e.u))
      if (w != e.v && g.adjacent(w, e.v)) return false;
  return true;
}

inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : a.edges()) pairs.emplace_back(e.u, e.v);
  const auto off = a.vertex_count();
  for (const auto& e : b.edges()) pairs.emplace_back(e.u + off, e.v + off);
  return Graph::from_edge_list(a.vertex_count() + b.vertex_count(), pairs);
}

inline constexpr std::size_t kMadVertexLimit = 24;

/// Maximum average degree, max over nonempty vertex subsets S of
/// 2|E(G[S])|/|S|. Exhaustive over all 2^n - 1 subsets, so O(2^n n).
inline Rational mad(const Graph& g) {
  const auto n = g.vertex_count();
  if (n == 0) throw PreconditionError("mad of the empty graph is undefined");
  if (n > kMadVertexLimit) throw CapExceeded(n, kMadVertexLimit);
  std::vector<std::uint32_t> nb(n, 0);
  for (const auto& e : g.edges()) {
    nb[e.u] |= 1u << e.v;
    nb[e.v] |= 1u << e.u;
  }
  // Best ratio as a fraction best_num/best_den, compared by cross-multiplying.
  std::uint64_t best_num = 0, best_den = 1;
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  for (std::uint32_t s = 1; s <= full && s != 0; ++s) {
    std::uint64_t twice_edges = 0;
    for (std::uint32_t rest = s; rest; rest &= rest - 1) {
      const auto u = static_cast<std::size_t>(__builtin_ctz(rest));
      twice_edges += static_cast<std::uint64_t>(__builtin_popcount(nb[u] & s));
    }
    const auto size = static_cast<std::uint64_t>(__builtin_popcount(s));
    if (twice_edges * best_den > best_num * size) {
      best_num = twice_edges;
      best_den = size;
    }
    if (s == full) break;
  }
  Rational r(static_cast<unsigned long>(best_num), static_cast<unsigned long>(best_den));
  r.canonicalize();
  return r;
}

/// Per-vertex mad of the subgraph induced on N(u); 0 for empty neighborhoods.
inline RationalVector neighborhood_mad_profile(const Graph& g) {
  if (g.has_isolated_vertex())
    throw PreconditionError("neighborhood mad profile needs a graph without isolated vertices");
  RationalVector out;
  out.reserve(g.vertex_count());
  for (std::size_t u = 0; u < g.vertex_count(); ++u)
    out.push_back(mad(induced_subgraph(g, g.neighbors(u))));
  return out;
}

// ------------------------------------------------------------ edge-list I/O

/// Reads "n m" followed by m lines "u v".
inline Graph read_edge_list(std::istream& in) {
  long long n = -1, m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw InputError("edge list: expected header 'n m'");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = -1, v = -1;
    if (!(in >> u >> v)) throw InputError("edge list: expected " + std::to_string(m) + " edges");
    if (u < 0 || v < 0) throw InputError("edge list: negative vertex label");
    pairs.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  std::string extra;
  if (in >> extra) throw InputError("edge list: trailing content '" + extra + "'");
  return Graph::from_edge_list(static_cast<std::size_t>(n), pairs);
}

inline Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return read_edge_list(in);
}

/// Canonical serialization: header, then sorted edges "u v" with u < v.
inline std::string write_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

/// Short deterministic key used to order campaign results.
inline std::string graph_key(const Graph& g) {
  std::string key = std::to_string(g.vertex_count()) + ":";
  for (const auto& e : g.edges()) key += std::to_string(e.u) + "-" + std::to_string(e.v) + ",";
  return key;
}

}  // namespace occucert
