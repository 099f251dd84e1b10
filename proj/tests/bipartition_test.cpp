#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "pqg/audit.hpp"
#include "pqg/bipartition.hpp"
#include "pqg/geometry.hpp"

namespace {

using pqg::CliqueCover;
using pqg::SignAssignment;

// Independent SplitMix64 finalizer, written out from its published constants.
std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TEST(Signs, FollowTheHashContract) {
  for (std::uint64_t seed : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    for (std::uint64_t i = 0; i < 50; ++i) {
      for (std::uint64_t j = 0; j < 9; ++j) {
        const std::uint64_t h = splitmix_finalize(seed ^ (i * 0xA24BAED4963EE407ULL) ^ (j * 0x9FB21C651E98DF25ULL));
        ASSERT_EQ(pqg::sign_of(seed, i, j), (h & 1) == 0 ? 1 : -1);
      }
    }
  }
}

TEST(Signs, DeterministicAndSeedSensitive) {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(8));
  const auto a = SignAssignment::derive(cover, 0);
  EXPECT_EQ(a, SignAssignment::derive(cover, 0));
  EXPECT_EQ(a, SignAssignment::derive(cover, 0, 4));
  const auto b = SignAssignment::derive(cover, 1);
  std::uint64_t total = 0, differ = 0;
  for (std::uint32_t c = 0; c < cover.size(); ++c) {
    for (std::uint32_t j = 0; j < cover.clique(c).size(); ++j) {
      ++total;
      differ += a.sign(c, j) != b.sign(c, j);
    }
  }
  const double half = total / 2.0, sd = std::sqrt(total / 4.0);
  EXPECT_NEAR(static_cast<double>(differ), half, 5 * sd);
}

TEST(Signs, MeanIsNearZero) {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(8));
  const auto s = SignAssignment::derive(cover, 42);
  std::int64_t sum = 0;
  std::uint64_t total = 0;
  for (std::uint32_t c = 0; c < cover.size(); ++c) {
    for (auto z : s.clique_signs(c)) {
      sum += z;
      ++total;
    }
  }
  EXPECT_LE(std::abs(static_cast<double>(sum)), 5 * std::sqrt(static_cast<double>(total)));
}

TEST(Signs, FromValuesValidates) {
  const std::vector<std::vector<std::uint32_t>> cliques = {{0, 1, 2}};
  const auto cover = CliqueCover::from_cliques(3, cliques);
  EXPECT_THROW(SignAssignment::from_values(cover, {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(SignAssignment::from_values(cover, {{1, 0, 1}}), std::invalid_argument);
  EXPECT_THROW(SignAssignment::from_values(cover, {}), std::invalid_argument);
}

TEST(BuildG, SingleCliqueSignPatterns) {
  const std::vector<std::vector<std::uint32_t>> cliques = {{0, 1, 2}};
  const auto cover = CliqueCover::from_cliques(3, cliques);
  const auto all_plus = pqg::build_g(cover, SignAssignment::from_values(cover, {{1, 1, 1}}));
  EXPECT_EQ(all_plus.m(), 0U);
  const auto split = pqg::build_g(cover, SignAssignment::from_values(cover, {{1, 1, -1}}));
  EXPECT_EQ(split.m(), 2U);
  EXPECT_TRUE(split.has_edge(0, 2));
  EXPECT_TRUE(split.has_edge(1, 2));
  EXPECT_FALSE(split.has_edge(0, 1));
}

TEST(BuildG, EdgesAreOppositeSignPairsOfBaseEdges) {
  const auto quad = pqg::build_quadrangle(4);
  const auto base = pqg::build_g1(quad);
  const auto& cover = base.cover();
  const auto signs = SignAssignment::derive(cover, 9);
  const auto g = pqg::build_g(cover, signs);
  EXPECT_EQ(g.metadata().kind, pqg::GraphKind::bipartitioned);
  EXPECT_EQ(g.metadata().seed, 9U);
  // Brute force: scan every pair of every clique.
  std::set<pqg::Edge> expect;
  for (std::uint32_t c = 0; c < cover.size(); ++c) {
    const auto m = cover.clique(c);
    for (std::uint32_t i = 0; i < m.size(); ++i)
      for (std::uint32_t j = i + 1; j < m.size(); ++j)
        if (signs.sign(c, i) != signs.sign(c, j)) expect.insert({m[i], m[j]});
  }
  const auto edges = g.edges();
  EXPECT_EQ(std::set<pqg::Edge>(edges.begin(), edges.end()), expect);
  for (auto [u, v] : edges) EXPECT_TRUE(base.graph().has_edge(u, v));
}

TEST(BuildG, IndependentOfThreadCount) {
  const auto cover = pqg::line_cover(pqg::build_quadrangle(8));
  const auto signs = SignAssignment::derive(cover, 3);
  const auto one = pqg::build_g(cover, signs, 1);
  for (unsigned t : {2U, 3U, 8U}) {
    EXPECT_EQ(one, pqg::build_g(cover, SignAssignment::derive(cover, 3, t), t));
  }
}

TEST(SubsetStats, IdentitiesHoldOnRandomSubsets) {
  const auto quad = pqg::build_quadrangle(4);
  const auto base = pqg::build_g1(quad);
  const auto signs = SignAssignment::derive(base.cover(), 11);
  const auto g = pqg::build_g(base.cover(), signs);
  const auto a1 = oracle::adjacency_matrix(base.graph());
  const auto ag = oracle::adjacency_matrix(g);
  pqg::SubsetAnalyzer analyzer(base, signs, g);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint32_t> x;
    const auto keep = 1 + rng() % 8;
    for (std::uint32_t v = 0; v < base.graph().n(); ++v)
      if (rng() % keep == 0) x.push_back(v);
    const auto st = analyzer.analyze(x, true);
    std::uint64_t e1 = 0, eg = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = i + 1; j < x.size(); ++j) {
        e1 += a1[x[i]][x[j]];
        eg += ag[x[i]][x[j]];
      }
    // Q by its defining double sum over ordered pairs of distinct slots.
    std::int64_t qform = 0;
    std::uint64_t opnorm = 0;
    for (std::uint32_t c = 0; c < base.cover().size(); ++c) {
      const auto m = base.cover().clique(c);
      std::vector<int> z;
      for (std::uint32_t j = 0; j < m.size(); ++j)
        if (std::binary_search(x.begin(), x.end(), m[j])) z.push_back(signs.sign(c, j));
      for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t k = 0; k < z.size(); ++k)
          if (i != k) qform += z[i] * z[k];
      if (!z.empty()) opnorm = std::max<std::uint64_t>(opnorm, z.size() - 1);
    }
    EXPECT_EQ(st.size, x.size());
    EXPECT_EQ(st.e_g1, e1);
    EXPECT_EQ(st.e_g, eg);
    EXPECT_EQ(st.q_form, qform);
    EXPECT_EQ(st.operator_norm, opnorm);
    EXPECT_EQ(4 * static_cast<std::int64_t>(st.e_g), 2 * static_cast<std::int64_t>(st.e_g1) - st.q_form);
    EXPECT_EQ(st.frobenius_sq, 2 * st.e_g1);
    EXPECT_LE(st.operator_norm, 4U);
    EXPECT_NO_THROW(pqg::check_identities(st, 4));
    EXPECT_EQ(st.blocks.size(), st.s);
  }
}

TEST(SubsetStats, RejectsBadSubsets) {
  const auto base = pqg::build_g1(pqg::build_quadrangle(2));
  const auto signs = SignAssignment::derive(base.cover(), 1);
  const auto g = pqg::build_g(base.cover(), signs);
  pqg::SubsetAnalyzer analyzer(base, signs, g);
  const std::vector<std::uint32_t> dup = {1, 2, 1};
  EXPECT_THROW(analyzer.analyze(dup), std::invalid_argument);
  const std::vector<std::uint32_t> range = {1, 99};
  EXPECT_THROW(analyzer.analyze(range), std::invalid_argument);
  // Scratch state is clean after a rejected call.
  const std::vector<std::uint32_t> ok = {1, 2};
  EXPECT_EQ(analyzer.analyze(ok).size, 2U);
  EXPECT_EQ(analyzer.analyze(ok).s, pqg::subset_stats(ok, base, signs, g).s);
}

}  // namespace
