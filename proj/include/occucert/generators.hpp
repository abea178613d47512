#pragma once

// Graph families, a reproducible RNG, and exhaustive generation of small
// graphs up to isomorphism.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "occucert/core.hpp"
#include "occucert/graph.hpp"

namespace occucert {

// ------------------------------------------------------------- RNG

/// mt19937_64 with hand-rolled bounded draws, so a seed yields the same
/// stream on every standard library (std distributions are unspecified).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw PreconditionError("Rng::below needs a positive bound");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

// ------------------------------------------------------------- families

inline Graph complete_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph::from_edge_list(n, e);
}

inline Graph path_graph(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return Graph::from_edge_list(n, e);
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InputError("cycle needs at least 3 vertices");
  auto e = path_graph(n).edges();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& x : e) pairs.emplace_back(x.u, x.v);
  pairs.emplace_back(n - 1, 0);
  return Graph::from_edge_list(n, pairs);
}

/// K_{1,k} with centre 0.
inline Graph star_graph(std::size_t leaves) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edge_list(leaves + 1, e);
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < a; ++u)
    for (std::size_t v = 0; v < b; ++v) e.emplace_back(u, a + v);
  return Graph::from_edge_list(a + b, e);
}

inline Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) e.emplace_back(u, v);
  return Graph::from_edge_list(n, e);
}

/// Connected G(n, p) by rejection.
inline Graph connected_erdos_renyi(std::size_t n, double p, Rng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    auto g = erdos_renyi(n, p, rng);
    if (is_connected(g)) return g;
  }
  throw PreconditionError("could not sample a connected G(n, p)");
}

// ------------------------------------------------------------- canonical form

namespace detail {

using Rows = std::vector<std::uint32_t>;

inline Rows adjacency_rows(const Graph& g) {
  if (g.vertex_count() > 32) throw CapExceeded(g.vertex_count(), 32);
  Rows rows(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    rows[e.u] |= 1u << e.v;
    rows[e.v] |= 1u << e.u;
  }
  return rows;
}

using Partition = std::vector<std::vector<std::size_t>>;

// Splits cells by neighbour counts into every cell until stable. The cell
// order depends only on the isomorphism class of (graph, partition).
inline void refine(const Rows& rows, Partition& cells) {
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::uint32_t> masks;
    for (const auto& c : cells) {
      std::uint32_t m = 0;
      for (auto v : c) m |= 1u << v;
      masks.push_back(m);
    }
    Partition next;
    for (const auto& c : cells) {
      if (c.size() == 1) {
        next.push_back(c);
        continue;
      }
      std::vector<std::pair<std::vector<int>, std::size_t>> keyed;
      for (auto v : c) {
        std::vector<int> sig;
        for (auto m : masks) sig.push_back(__builtin_popcount(rows[v] & m));
        keyed.emplace_back(std::move(sig), v);
      }
      std::sort(keyed.begin(), keyed.end());
      std::vector<std::size_t> cur{keyed[0].second};
      for (std::size_t i = 1; i < keyed.size(); ++i) {
        if (keyed[i].first != keyed[i - 1].first) {
          next.push_back(std::move(cur));
          cur.clear();
          changed = true;
        }
        cur.push_back(keyed[i].second);
      }
      next.push_back(std::move(cur));
    }
    cells = std::move(next);
  }
}

inline Rows relabel(const Rows& rows, const std::vector<std::size_t>& order) {
  const auto n = rows.size();
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;
  Rows out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint32_t r = rows[order[i]]; r; r &= r - 1) out[i] |= 1u << pos[__builtin_ctz(r)];
  return out;
}

inline void search(const Rows& rows, Partition cells, Rows& best, bool& have) {
  refine(rows, cells);
  std::size_t target = cells.size();
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].size() > 1 && (target == cells.size() || cells[i].size() < cells[target].size())) target = i;
  if (target == cells.size()) {
    std::vector<std::size_t> order;
    for (const auto& c : cells) order.push_back(c.front());
    auto code = relabel(rows, order);
    if (!have || code > best) {
      best = std::move(code);
      have = true;
    }
    return;
  }
  // Twins (equal open or closed neighbourhoods) in the target cell are
  // exchanged by an automorphism fixing the partition: branch on one each.
  std::vector<std::size_t> reps;
  for (auto v : cells[target]) {
    bool twin = false;
    for (auto r : reps) {
      const std::uint32_t open_v = rows[v] & ~(1u << r), open_r = rows[r] & ~(1u << v);
      if (open_v == open_r) twin = true;
    }
    if (!twin) reps.push_back(v);
  }
  for (auto v : reps) {
    Partition branch;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != target) {
        branch.push_back(cells[i]);
        continue;
      }
      branch.push_back({v});
      std::vector<std::size_t> rest;
      for (auto w : cells[i])
        if (w != v) rest.push_back(w);
      branch.push_back(std::move(rest));
    }
    search(rows, std::move(branch), best, have);
  }
}

inline Rows canonical_rows(const Rows& rows) {
  Partition start(1);
  for (std::size_t v = 0; v < rows.size(); ++v) start[0].push_back(v);
  if (rows.empty()) return {};
  Rows best;
  bool have = false;
  search(rows, std::move(start), best, have);
  return best;
}

inline Graph graph_from_rows(const Rows& rows) {
  std::vector<std::pair<std::size_t, std::size_t>> e;
  for (std::size_t u = 0; u < rows.size(); ++u)
    for (std::uint32_t r = rows[u]; r; r &= r - 1) {
      const auto v = static_cast<std::size_t>(__builtin_ctz(r));
      if (u < v) e.emplace_back(u, v);
    }
  return Graph::from_edge_list(rows.size(), e);
}

}  // namespace detail

/// Canonically relabelled copy: isomorphic graphs map to identical graphs.
inline Graph canonical_form(const Graph& g) {
  return detail::graph_from_rows(detail::canonical_rows(detail::adjacency_rows(g)));
}

inline bool isomorphic(const Graph& a, const Graph& b) {
  return a.vertex_count() == b.vertex_count() && a.edge_count() == b.edge_count() &&
         detail::canonical_rows(detail::adjacency_rows(a)) == detail::canonical_rows(detail::adjacency_rows(b));
}

// ------------------------------------------------------------- exhaustive generation

struct GenerationOptions {
  bool connected = false;
  bool triangle_free = false;
};

/// All graphs on exactly n vertices up to isomorphism, in canonical form,
/// sorted by canonical adjacency code. Built by adding a vertex to every
/// graph on n-1 vertices: connected graphs have a non-cut vertex and both
/// properties are hereditary, so restricting the seeds is complete.
inline std::vector<Graph> all_graphs(std::size_t n, GenerationOptions opt = {}) {
  if (n == 0) return {Graph::from_edge_list(0, {})};
  if (n > 12) throw CapExceeded(n, 12);
  std::set<detail::Rows> level{detail::Rows{0}};
  for (std::size_t k = 2; k <= n; ++k) {
    std::set<detail::Rows> next;
    for (const auto& rows : level) {
      const std::uint32_t count = 1u << (k - 1);
      for (std::uint32_t nb = opt.connected ? 1 : 0; nb < count; ++nb) {
        if (opt.triangle_free) {
          bool independent = true;
          for (std::uint32_t r = nb; r && independent; r &= r - 1)
            independent = (rows[__builtin_ctz(r)] & nb) == 0;
          if (!independent) continue;
        }
        auto grown = rows;
        grown.push_back(nb);
        for (std::uint32_t r = nb; r; r &= r - 1) grown[__builtin_ctz(r)] |= 1u << (k - 1);
        next.insert(detail::canonical_rows(grown));
      }
    }
    level = std::move(next);
  }
  std::vector<Graph> out;
  for (const auto& rows : level) out.push_back(detail::graph_from_rows(rows));
  return out;
}

inline std::vector<Graph> all_connected_graphs(std::size_t n) { return all_graphs(n, {.connected = true}); }

inline std::vector<Graph> all_connected_triangle_free(std::size_t n) {
  return all_graphs(n, {.connected = true, .triangle_free = true});
}

// ------------------------------------------------------------- family specs

/// A generated instance with a stable sort key.
struct NamedGraph {
  std::string key;
  Graph graph;
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

inline std::string zero_pad(std::size_t i, std::size_t width) {
  auto s = std::to_string(i);
  return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

inline std::size_t parse_count(std::string_view s) {
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw InputError("bad count '" + std::string(s) + "'");
  return v;
}

// "a-b" or "a".
inline std::pair<std::size_t, std::size_t> parse_range(std::string_view s) {
  const auto dash = s.find('-');
  if (dash == std::string_view::npos) {
    const auto v = parse_count(s);
    return {v, v};
  }
  const auto lo = parse_count(s.substr(0, dash)), hi = parse_count(s.substr(dash + 1));
  if (lo > hi) throw InputError("empty range '" + std::string(s) + "'");
  return {lo, hi};
}

inline double parse_probability(std::string_view s) {
  const double p = to_double(parse_rational(s));
  if (!(p >= 0 && p <= 1)) throw InputError("probability out of [0, 1]");
  return p;
}

inline Graph single_family(const std::string& term, Rng& rng) {
  const auto colon = term.find(':');
  const std::string name = term.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<std::string>{} : split(term.substr(colon + 1), ',');
  auto need = [&](std::size_t k) {
    if (args.size() != k) throw InputError("family '" + name + "' takes " + std::to_string(k) + " argument(s)");
  };
  if (name == "complete" || name == "K") { need(1); return complete_graph(parse_count(args[0])); }
  if (name == "path" || name == "P") { need(1); return path_graph(parse_count(args[0])); }
  if (name == "cycle" || name == "C") { need(1); return cycle_graph(parse_count(args[0])); }
  if (name == "star") { need(1); return star_graph(parse_count(args[0])); }
  if (name == "empty") { need(1); return Graph::from_edge_list(parse_count(args[0]), {}); }
  if (name == "bipartite" || name == "Kab") {
    need(2);
    return complete_bipartite(parse_count(args[0]), parse_count(args[1]));
  }
  if (name == "gnp") {
    need(2);
    return erdos_renyi(parse_count(args[0]), parse_probability(args[1]), rng);
  }
  throw InputError("unknown graph family '" + name + "'");
}

}  // namespace detail

/// Expands a family spec into instances. Single graphs:
///   complete:n  path:n  cycle:n  star:k  empty:n  bipartite:a,b  gnp:n,p
/// joined with '+' for disjoint unions (e.g. complete:2+complete:3).
/// Sweeps:
///   connected:a-b       all connected graphs with a..b vertices
///   trianglefree:a-b    all connected triangle-free graphs
///   cliques:a-b         K_a .. K_b and the union K_a + ... + K_b
///   random:count,a-b,p  connected G(n, p) with n uniform in a..b
inline std::vector<NamedGraph> family_instances(const std::string& spec, std::uint64_t seed) {
  Rng rng(seed);
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  std::vector<NamedGraph> out;
  auto keyed = [](const std::string& prefix, std::size_t i, const Graph& g) {
    return NamedGraph{prefix + detail::zero_pad(i, 5), g};
  };
  if (head == "connected" || head == "trianglefree") {
    const auto [lo, hi] = detail::parse_range(rest);
    for (std::size_t n = std::max<std::size_t>(lo, 1); n <= hi; ++n) {
      const auto graphs = head == "connected" ? all_connected_graphs(n) : all_connected_triangle_free(n);
      for (std::size_t i = 0; i < graphs.size(); ++i)
        out.push_back(keyed(head + "/n" + std::to_string(n) + "/", i, graphs[i]));
    }
    return out;
  }
  if (head == "cliques") {
    const auto [lo, hi] = detail::parse_range(rest);
    Graph all = Graph::from_edge_list(0, {});
    for (std::size_t k = std::max<std::size_t>(lo, 1); k <= hi; ++k) {
      out.push_back(keyed("cliques/K", k, complete_graph(k)));
      all = disjoint_union(all, complete_graph(k));
    }
    out.push_back({"cliques/union", all});
    return out;
  }
  if (head == "random") {
    const auto args = detail::split(rest, ',');
    if (args.size() != 3) throw InputError("random:count,a-b,p");
    const auto count = detail::parse_count(args[0]);
    const auto [lo, hi] = detail::parse_range(args[1]);
    const double p = detail::parse_probability(args[2]);
    for (std::size_t i = 0; i < count; ++i) {
      const auto n = static_cast<std::size_t>(rng.between(lo, hi));
      out.push_back(keyed("random/", i, connected_erdos_renyi(n, p, rng)));
    }
    return out;
  }
  Graph g = Graph::from_edge_list(0, {});
  for (const auto& term : detail::split(spec, '+')) g = disjoint_union(g, detail::single_family(term, rng));
  out.push_back({spec, g});
  return out;
}

}  // namespace occucert
