#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pqg/bipartition.hpp"
#include "pqg/certifier.hpp"
#include "pqg/geometry.hpp"

namespace {

using pqg::CliqueCover;
using pqg::SignAssignment;
using pqg::SparseGraph;

SparseGraph graph(std::uint32_t n, std::vector<pqg::Edge> edges) { return SparseGraph::from_edges(n, edges); }

TEST(TriangleFree, K3HasWitness) {
  const auto cert = pqg::check_triangle_free(graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_FALSE(cert.pass);
  EXPECT_EQ(cert.witness, (std::vector<std::uint32_t>{0, 1, 2}));
}

TEST(TriangleFree, ReportsLexicographicallyLeastTriangle) {
  // Triangles {2,3,4} and {1,5,6}; the least is (1,5,6).
  const auto g = graph(7, {{2, 3}, {3, 4}, {2, 4}, {1, 5}, {5, 6}, {1, 6}, {0, 2}});
  const auto cert = pqg::check_triangle_free(g);
  EXPECT_FALSE(cert.pass);
  EXPECT_EQ(cert.witness, (std::vector<std::uint32_t>{1, 5, 6}));
  EXPECT_TRUE(pqg::triangle_witness_holds(g, cert));
}

TEST(TriangleFree, AgreesWithBruteForceOnRandomGraphs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t n = 4 + rng() % 20;
    std::vector<pqg::Edge> edges;
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = u + 1; v < n; ++v)
        if (rng() % 6 == 0) edges.emplace_back(u, v);
    const auto g = graph(n, edges);
    const auto cert = pqg::check_triangle_free(g);
    EXPECT_EQ(cert.pass, oracle::triangle_count(g) == 0);
    if (!cert.pass) {
      EXPECT_TRUE(pqg::triangle_witness_holds(g, cert));
    }
  }
}

TEST(TriangleFree, BipartitionedGraphsPass) {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(8));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto signs = SignAssignment::derive(cover, seed);
    const auto g = pqg::build_g(cover, signs);
    const auto cert = pqg::check_triangle_free(g);
    EXPECT_TRUE(cert.pass) << seed;
    const auto structural = pqg::check_structural(cover, signs, &g);
    EXPECT_TRUE(structural.pass) << structural.violation;
  }
}

TEST(TriangleFree, SmallOrdersMatchBruteForce) {
  for (std::uint64_t q : {2, 3, 4}) {
    const auto cover = pqg::line_cover(pqg::build_quadrangle(q));
    const auto g = pqg::build_g(cover, SignAssignment::derive(cover, q));
    EXPECT_EQ(oracle::triangle_count(g), 0U);
    EXPECT_TRUE(pqg::check_triangle_free(g).pass);
  }
}

TEST(TriangleFree, PlantedEdgeInsideSignClassIsCaught) {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(8));
  const auto signs = SignAssignment::derive(cover, 1);
  const auto g = pqg::build_g(cover, signs);
  // Join two same-sign points of a clique that also has an opposite-sign point.
  for (std::uint32_t c = 0; c < cover.size(); ++c) {
    const auto m = cover.clique(c);
    const auto z = signs.clique_signs(c);
    std::vector<std::uint32_t> plus, minus;
    for (std::size_t j = 0; j < m.size(); ++j) (z[j] > 0 ? plus : minus).push_back(m[j]);
    if (plus.size() < 2 || minus.empty()) continue;
    const auto bad = g.with_edge(plus[0], plus[1]);
    const auto cert = pqg::check_triangle_free(bad);
    ASSERT_FALSE(cert.pass);
    EXPECT_TRUE(pqg::triangle_witness_holds(bad, cert));
    const auto& w = cert.witness;
    EXPECT_TRUE(std::is_sorted(w.begin(), w.end()));
    const auto structural = pqg::check_structural(cover, signs, &bad);
    ASSERT_FALSE(structural.pass);
    EXPECT_EQ(structural.violation, "P3");
    EXPECT_TRUE(pqg::structural_witness_holds(cover, signs, &bad, structural));
    return;
  }
  FAIL() << "no suitable clique";
}

TEST(Structural, MissingEdgeIsP3) {
  const std::vector<std::vector<std::uint32_t>> cliques = {{0, 1, 2}};
  const auto cover = CliqueCover::from_cliques(3, cliques);
  const auto signs = SignAssignment::from_values(cover, {{1, -1, -1}});
  const auto g = graph(3, {{0, 1}});
  const auto cert = pqg::check_structural(cover, signs, &g);
  ASSERT_FALSE(cert.pass);
  EXPECT_EQ(cert.violation, "P3");
  EXPECT_EQ(cert.witness, (std::vector<std::uint32_t>{0, 0, 2}));
  EXPECT_TRUE(pqg::structural_witness_holds(cover, signs, &g, cert));
}

TEST(Structural, DuplicatedCliqueIsP1) {
  auto quad = pqg::build_quadrangle(2);
  std::vector<std::vector<std::uint32_t>> cliques;
  for (const auto& l : quad.lines) cliques.push_back(l.point_ids);
  cliques.push_back(cliques[3]);
  const auto cover = CliqueCover::from_cliques(15, cliques);
  const auto signs = SignAssignment::derive(cover, 1);
  const auto cert = pqg::check_structural(cover, signs);
  ASSERT_FALSE(cert.pass);
  EXPECT_EQ(cert.violation, "P1");
  ASSERT_EQ(cert.witness.size(), 4U);
  EXPECT_EQ(cert.witness[0], 3U);
  EXPECT_EQ(cert.witness[1], 15U);
  EXPECT_TRUE(pqg::structural_witness_holds(cover, signs, nullptr, cert));
}

TEST(Structural, CliqueTriangleIsP2) {
  const std::vector<std::vector<std::uint32_t>> cliques = {{0, 1, 3}, {1, 2, 4}, {0, 2, 5}};
  const auto cover = CliqueCover::from_cliques(6, cliques);
  const auto signs = SignAssignment::from_values(cover, {{1, -1, 1}, {1, -1, 1}, {-1, 1, 1}});
  const auto cert = pqg::check_structural(cover, signs);
  ASSERT_FALSE(cert.pass);
  EXPECT_EQ(cert.violation, "P2");
  EXPECT_TRUE(pqg::structural_witness_holds(cover, signs, nullptr, cert));
  // This sign pattern really does produce a triangle 0-1-2.
  const auto g = pqg::build_g(cover, signs);
  EXPECT_FALSE(pqg::check_triangle_free(g).pass);
}

TEST(Structural, PassesWithoutGraph) {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(4));
  const auto cert = pqg::check_structural(cover, SignAssignment::derive(cover, 2));
  EXPECT_TRUE(cert.pass);
  EXPECT_EQ(cert.stats.at("graph_checked"), 0U);
}

TEST(Girth, KnownGraphs) {
  EXPECT_EQ(pqg::girth(graph(3, {{0, 1}, {1, 2}, {0, 2}})), 3U);
  EXPECT_EQ(pqg::girth(graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}})), 4U);
  EXPECT_FALSE(pqg::girth(graph(4, {{0, 1}, {1, 2}, {2, 3}})).has_value());
  // Petersen graph: girth 5.
  std::vector<pqg::Edge> petersen;
  for (std::uint32_t i = 0; i < 5; ++i) {
    petersen.emplace_back(i, (i + 1) % 5);
    petersen.emplace_back(i, i + 5);
    petersen.emplace_back(5 + i, 5 + (i + 2) % 5);
  }
  const auto p = graph(10, petersen);
  EXPECT_EQ(pqg::girth(p), 5U);
  EXPECT_EQ(oracle::girth(p), 5U);
  // Long cycle beyond the cap.
  std::vector<pqg::Edge> cycle;
  for (std::uint32_t i = 0; i < 20; ++i) cycle.emplace_back(i, (i + 1) % 20);
  EXPECT_FALSE(pqg::girth(graph(20, cycle), 16).has_value());
  EXPECT_EQ(pqg::girth(graph(20, cycle), 20), 20U);
}

TEST(Girth, AgreesWithEdgeDeletionOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t n = 5 + rng() % 15;
    std::vector<pqg::Edge> edges;
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = u + 1; v < n; ++v)
        if (rng() % 5 == 0) edges.emplace_back(u, v);
    const auto g = graph(n, edges);
    const auto want = oracle::girth(g);
    const auto got = pqg::girth(g, 64);
    if (want == UINT32_MAX) EXPECT_FALSE(got.has_value());
    else EXPECT_EQ(got, want);
  }
}

TEST(Girth, IncidenceGraphAndG) {
  const auto quad = pqg::build_quadrangle(4);
  EXPECT_EQ(pqg::girth(pqg::build_incidence_graph(quad)), 8U);
  const auto cover = pqg::line_cover(quad);
  const auto g = pqg::build_g(cover, SignAssignment::derive(cover, 1));
  const auto gg = pqg::girth(g);
  ASSERT_TRUE(gg.has_value());
  EXPECT_GE(*gg, 4U);
  EXPECT_EQ(*gg, oracle::girth(g));
}

}  // namespace
