#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "occucert/generators.hpp"
#include "occucert/graph.hpp"
#include "occucert/hardcore.hpp"
#include "occucert/linalg.hpp"

using namespace occucert;

namespace {

Graph k12() { return Graph::from_edge_list(3, {{0, 1}, {0, 2}}); }
Rational q(long p, long d = 1) { return make_rational(p, d); }

}  // namespace

// ---------------------------------------------------------------- graph-core

TEST(Graph, FromEdgeListExamples) {
  const auto k2 = Graph::from_edge_list(2, {{0, 1}});
  EXPECT_EQ(k2.vertex_count(), 2u);
  EXPECT_EQ(k2.edge_count(), 1u);

  const auto g = k12();
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 1u);
  EXPECT_FALSE(g.adjacent(1, 2));

  const auto dedup = Graph::from_edge_list(3, {{0, 1}, {1, 0}});
  EXPECT_EQ(dedup.edge_count(), 1u);
  EXPECT_EQ(dedup.degree(2), 0u);
}

TEST(Graph, FromEdgeListErrors) {
  EXPECT_THROW(Graph::from_edge_list(2, {{0, 2}}), InputError);
  EXPECT_THROW(Graph::from_edge_list(2, {{1, 1}}), InputError);
}

TEST(Graph, AdjacencySymmetric) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto g = erdos_renyi(9, 0.4, rng);
    const auto a = adjacency_matrix<int>(g);
    EXPECT_EQ(a, a.transpose());
    std::size_t sum = 0;
    for (auto d : g.degrees()) sum += d;
    EXPECT_EQ(sum, 2 * g.edge_count());
  }
}

TEST(Graph, Laplacian) {
  const auto k2 = laplacian<double>(Graph::from_edge_list(2, {{0, 1}}));
  EXPECT_EQ(k2(0, 0), 1);
  EXPECT_EQ(k2(0, 1), -1);
  EXPECT_EQ(k2(1, 1), 1);
  const auto empty = laplacian<double>(Graph::empty(3));
  EXPECT_EQ(empty, RealMatrix(3, 3));

  Rng rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto g = erdos_renyi(8, 0.5, rng);
    const auto l = laplacian<double>(g);
    for (std::size_t u = 0; u < 8; ++u) {
      double row = 0;
      for (std::size_t v = 0; v < 8; ++v) row += l(u, v);
      EXPECT_EQ(row, 0);
    }
    EXPECT_TRUE(psd_check(l).psd);
  }
}

TEST(Graph, NormalizedLaplacian) {
  const auto k2 = normalized_laplacian(Graph::from_edge_list(2, {{0, 1}}));
  EXPECT_NEAR(k2(0, 1), -1, 1e-15);
  EXPECT_NEAR(k2(0, 0), 1, 1e-15);
  EXPECT_NEAR(operator_norm(normalized_laplacian(k12())), 2.0, 1e-12);
  EXPECT_THROW(normalized_laplacian(Graph::from_edge_list(3, {{0, 1}})), PreconditionError);

  Rng rng(11);
  for (int i = 0; i < 10; ++i) {
    const auto g = connected_erdos_renyi(7, 0.5, rng);
    const auto nl = normalized_laplacian(g);
    EXPECT_TRUE(psd_check(nl).psd);
    EXPECT_LE(operator_norm(nl), 2.0 + 1e-12);
  }
}

TEST(Graph, Mad) {
  EXPECT_EQ(mad(complete_graph(3)), 2);
  EXPECT_EQ(mad(Graph::empty(4)), 0);
  EXPECT_EQ(mad(path_graph(3)), q(4, 3));
  EXPECT_EQ(mad(complete_graph(4)), 3);
  // Densest part wins over the whole: K4 plus a pendant path.
  const auto g = Graph::from_edge_list(6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}});
  EXPECT_EQ(mad(g), 3);
  EXPECT_THROW(mad(Graph::empty(0)), PreconditionError);
}

TEST(Graph, NeighborhoodMadProfile) {
  for (const auto& m : neighborhood_mad_profile(complete_graph(4))) EXPECT_EQ(m, 2);
  // Vertex 0 sees the path 1-2-3.
  const auto g = Graph::from_edge_list(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}});
  EXPECT_EQ(neighborhood_mad_profile(g)[0], q(4, 3));
  for (const auto& m : neighborhood_mad_profile(cycle_graph(5))) EXPECT_EQ(m, 0);
  EXPECT_THROW(neighborhood_mad_profile(Graph::from_edge_list(3, {{0, 1}})), PreconditionError);
}

TEST(Graph, DisparityEnergy) {
  EXPECT_EQ(disparity_energy(cycle_graph(6)), 0u);
  EXPECT_EQ(disparity_energy(complete_graph(5)), 0u);
  EXPECT_EQ(disparity_energy(k12()), 2u);
  EXPECT_EQ(disparity_energy(star_graph(4)), 36u);
  // Zero exactly on graphs whose components are regular.
  EXPECT_EQ(disparity_energy(disjoint_union(cycle_graph(4), complete_graph(3))), 0u);
  EXPECT_GT(disparity_energy(path_graph(4)), 0u);
}

TEST(Graph, DegreeProfile) {
  const auto p = degree_profile(star_graph(4));
  EXPECT_EQ(p.max_degree, 4u);
  EXPECT_EQ(p.disparity_energy, 36u);
  EXPECT_EQ(p.degrees, (std::vector<std::size_t>{4, 1, 1, 1, 1}));
}

TEST(Graph, StructureHelpers) {
  EXPECT_TRUE(is_triangle_free(cycle_graph(5)));
  EXPECT_FALSE(is_triangle_free(complete_graph(3)));
  EXPECT_TRUE(is_connected(path_graph(5)));
  EXPECT_FALSE(is_connected(Graph::empty(2)));
  EXPECT_EQ(connected_components(disjoint_union(complete_graph(2), complete_graph(3))).size(), 2u);
  const auto sub = induced_subgraph(complete_graph(4), {3, 1});
  EXPECT_EQ(sub.vertex_count(), 2u);
  EXPECT_EQ(sub.edge_count(), 1u);
}

TEST(Graph, EdgeListRoundTrip) {
  const auto g = parse_edge_list("4 3\n0 1\n2 1\n3 0\n");
  EXPECT_EQ(write_edge_list(g), "4 3\n0 1\n0 3\n1 2\n");
  EXPECT_EQ(parse_edge_list(write_edge_list(g)), g);
  EXPECT_THROW(parse_edge_list("3 x"), InputError);
  EXPECT_THROW(parse_edge_list("3 2\n0 1\n"), InputError);
  EXPECT_THROW(parse_edge_list("3 1\n0 1\n5"), InputError);
  EXPECT_THROW(parse_edge_list("2 1\n0 0\n"), InputError);
}

// ---------------------------------------------------------------- exact-hardcore

TEST(HardCore, EnumerateIndependentSets) {
  const auto k2 = Graph::from_edge_list(2, {{0, 1}});
  EXPECT_EQ(enumerate_independent_sets(k2), (std::vector<VertexSet>{0, 1, 2}));
  EXPECT_EQ(enumerate_independent_sets(k12()), (std::vector<VertexSet>{0b000, 0b001, 0b010, 0b100, 0b110}));
  EXPECT_EQ(enumerate_independent_sets(Graph::empty(6)).size(), 64u);
}

TEST(HardCore, CapExceeded) {
  EXPECT_THROW(enumerate_independent_sets(path_graph(25)), CapExceeded);
  EXPECT_THROW(partition_function(path_graph(5), Fugacity::uniform(5, 1), 4), CapExceeded);
  // The cap is per connected component.
  const auto two = disjoint_union(path_graph(4), path_graph(4));
  EXPECT_NO_THROW(partition_function(two, Fugacity::uniform(8, 1), 4));
  try {
    enumerate_independent_sets(path_graph(25));
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.exit_code(), 3);
  }
}

TEST(HardCore, PartitionFunctionExamples) {
  EXPECT_EQ(partition_function(Graph::empty(1), Fugacity::uniform(1, 2)), 3);
  EXPECT_EQ(partition_function(k12(), Fugacity::uniform(3, q(7, 5))), q(179, 25));
  const auto two_k2 = disjoint_union(complete_graph(2), complete_graph(2));
  EXPECT_EQ(partition_function(two_k2, Fugacity::uniform(4, 1)), 9);
  EXPECT_THROW(partition_function(k12(), Fugacity::uniform(2, 1)), InputError);
}

TEST(HardCore, MarginalsAndExpectedSize) {
  const auto k2 = Graph::from_edge_list(2, {{0, 1}});
  EXPECT_EQ(marginals(k2, Fugacity::uniform(2, 1)), (RationalVector{q(1, 3), q(1, 3)}));
  EXPECT_EQ(marginals(k12(), Fugacity::uniform(3, 0)), RationalVector(3, q(0)));
  EXPECT_EQ(marginals(k12(), Fugacity::uniform(3, q(7, 5))), (RationalVector{q(35, 179), q(84, 179), q(84, 179)}));
  EXPECT_EQ(expected_size(k12(), Fugacity::uniform(3, q(7, 5))), q(203, 179));
  EXPECT_EQ(expected_size(complete_graph(3), Fugacity::uniform(3, 1)), q(3, 4));
  EXPECT_EQ(expected_size(cycle_graph(5), Fugacity::uniform(5, 0)), 0);
}

TEST(HardCore, LogPartition) {
  EXPECT_NEAR(log_partition(Graph::empty(1), Fugacity::uniform(1, Rational(std::exp(1.0) - 1))), 1.0, 1e-15);
  EXPECT_NEAR(log_partition(k12(), Fugacity::uniform(3, q(7, 5))), std::log(179.0 / 25.0), 1e-14);
  EXPECT_NEAR(log_partition(Graph::empty(2), Fugacity::uniform(2, 1)), 2 * std::log(2.0), 1e-15);
}

TEST(HardCore, SummaryInvariants) {
  Rng rng(7);
  for (int i = 0; i < 25; ++i) {
    const auto n = static_cast<std::size_t>(rng.between(1, 10));
    const auto g = erdos_renyi(n, 0.35, rng);
    RationalVector lam;
    for (std::size_t u = 0; u < n; ++u) lam.push_back(make_rational(static_cast<long>(rng.between(0, 30)), 10));
    const Fugacity f(lam);
    const auto s = hard_core_summary(g, f);
    EXPECT_GE(s.partition_function, 1);
    Rational total(0);
    for (std::size_t u = 0; u < n; ++u) {
      EXPECT_GE(s.marginals[u], 0);
      EXPECT_LE(s.marginals[u], lam[u] / (1 + lam[u]));
      total += s.marginals[u];
    }
    EXPECT_EQ(total, s.expected_size);

    // Component multiplicativity / additivity against whole-graph enumeration.
    const auto probs = set_probabilities(g, f);
    Rational mass(0), ex(0);
    for (const auto& [set, p] : probs) {
      mass += p;
      ex += p * static_cast<long>(set_members(set).size());
    }
    EXPECT_EQ(mass, 1);
    EXPECT_EQ(ex, s.expected_size);
  }
}

TEST(HardCore, InducedModel) {
  const auto g = k12();
  const auto f = Fugacity(RationalVector{q(1), q(2), q(3)});
  const auto all = induced_model(g, f, {2, 0, 1});
  EXPECT_EQ(all.graph, g);
  EXPECT_EQ(all.lambda, f);
  EXPECT_EQ(partition_function(all.graph, all.lambda), partition_function(g, f));
  const auto none = induced_model(g, f, {});
  EXPECT_EQ(none.graph.vertex_count(), 0u);
  EXPECT_EQ(partition_function(none.graph, none.lambda), 1);
  const auto leaves = induced_model(g, f, {1, 2});
  EXPECT_EQ(leaves.graph.edge_count(), 0u);
  EXPECT_EQ(partition_function(leaves.graph, leaves.lambda), 12);
}

TEST(HardCore, FugacityJson) {
  EXPECT_EQ(parse_fugacity_json(R"({"uniform": "7/5"})", 3), Fugacity::uniform(3, q(7, 5)));
  EXPECT_EQ(parse_fugacity_json(R"({"values": ["1/2", 3]})", 2), Fugacity(RationalVector{q(1, 2), q(3)}));
  EXPECT_THROW(parse_fugacity_json(R"({"values": ["1/2"]})", 2), InputError);
  EXPECT_THROW(parse_fugacity_json(R"({"uniform": "-1"})", 2), InputError);
  EXPECT_THROW(parse_fugacity_json("{", 2), InputError);
}

TEST(Core, ParseRational) {
  EXPECT_EQ(parse_rational("7/5"), q(7, 5));
  EXPECT_EQ(parse_rational("14/10"), q(7, 5));
  EXPECT_EQ(parse_rational("0.05"), q(1, 20));
  EXPECT_EQ(parse_rational("-1.5e-3"), q(-3, 2000));
  EXPECT_EQ(parse_rational(" 12 "), 12);
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_EQ(to_string(q(4, 2)), "2");
  EXPECT_NEAR(log_rational(q(179, 25)), std::log(179.0 / 25.0), 1e-15);
  EXPECT_EQ(round15(0.1 + 0.2), 0.3);
}
