#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cheeger/errors.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/generators.hpp"
#include "oracles.hpp"

using namespace cheeger;

namespace {

VertexSet mask_set(std::size_t n, std::uint64_t mask) {
  std::vector<Vertex> m;
  for (Vertex v = 0; v < n; ++v) {
    if ((mask >> v) & 1) m.push_back(v);
  }
  return VertexSet(n, m);
}

std::vector<WeightedGraph> small_graphs() {
  return {gen_cycle(6),           gen_cycle(8),       gen_complete(4),
          gen_hypercube(3),       gen_dumbbell(4),    gen_planted_partition(2, 5, 0.8, 3).graph,
          gen_planted_partition(3, 4, 0.7, 5).graph};
}

}  // namespace

TEST(Expansion, BoundaryAndPhiExamples) {
  auto k4 = gen_complete(4);
  EXPECT_NEAR(boundary_weight(k4, VertexSet(4, {0})), 1.0, 1e-15);
  EXPECT_NEAR(edge_expansion(k4, VertexSet(4, {0})), 1.0, 1e-15);
  auto c8 = gen_cycle(8);
  EXPECT_DOUBLE_EQ(boundary_weight(c8, VertexSet::range(8, 0, 4)), 1.0);
  EXPECT_DOUBLE_EQ(edge_expansion(c8, VertexSet::range(8, 0, 4)), 0.25);
  auto q3 = gen_hypercube(3);
  EXPECT_NEAR(boundary_weight(q3, VertexSet::range(8, 0, 4)), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(edge_expansion(q3, VertexSet::range(8, 0, 4)), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(boundary_weight(c8, VertexSet::range(8, 0, 8)), PreconditionError);
}

TEST(Expansion, BoundaryIsSymmetric) {
  auto g = gen_planted_partition(2, 6, 0.8, 2).graph;
  for (std::uint64_t mask = 1; mask < (1u << 12) - 1; mask += 37) {
    auto s = mask_set(12, mask);
    EXPECT_NEAR(boundary_weight(g, s), boundary_weight(g, s.complement()), 1e-14);
  }
}

TEST(Expansion, RobustVertexExpansionExamples) {
  auto c8 = gen_cycle(8);
  auto r = robust_vertex_expansion(c8, VertexSet::range(8, 0, 4));
  EXPECT_EQ(r.n_half, 1u);
  EXPECT_DOUBLE_EQ(r.phi_v, 0.25);
  auto k4 = gen_complete(4);
  r = robust_vertex_expansion(k4, VertexSet(4, {0}));
  EXPECT_EQ(r.n_half, 2u);
  EXPECT_DOUBLE_EQ(r.phi_v, 2.0);
  // rho close to one needs all three outside neighbours.
  EXPECT_EQ(robust_vertex_expansion(k4, VertexSet(4, {0}), 0.99).n_half, 3u);
}

TEST(Expansion, GreedyMatchesExhaustiveCover) {
  for (const auto& g : small_graphs()) {
    const std::size_t n = g.num_vertices();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n) - 1; mask += 11) {
      auto s = mask_set(n, mask);
      auto stats = expansion_stats(g, s);
      EXPECT_EQ(static_cast<int>(stats.n_half), oracle::n_half(g, mask));
      EXPECT_NEAR(stats.phi, oracle::phi(g, mask), 1e-13);
      EXPECT_GE(stats.phi_v, stats.phi / 2 - 1e-15);
      EXPECT_DOUBLE_EQ(stats.psi, stats.phi * stats.phi_v);
      EXPECT_LE(stats.phi, 1.0 + 1e-12);
    }
  }
}

TEST(Expansion, GraphExpansionExamples) {
  auto c6 = graph_expansion_bruteforce(gen_cycle(6), ExpansionMode::kPhi);
  EXPECT_NEAR(c6.value, 1.0 / 3.0, 1e-14);
  EXPECT_EQ(c6.witness.members(), (std::vector<Vertex>{0, 1, 2}));
  EXPECT_NEAR(graph_expansion_bruteforce(gen_hypercube(3), ExpansionMode::kPhi).value, 1.0 / 3.0,
              1e-14);
  auto k4 = graph_expansion_bruteforce(gen_complete(4), ExpansionMode::kPhi);
  EXPECT_NEAR(k4.value, 2.0 / 3.0, 1e-14);
  EXPECT_EQ(k4.witness.size(), 2u);
  EXPECT_THROW(graph_expansion_bruteforce(gen_cycle(25), ExpansionMode::kPhi), InstanceTooLarge);
}

TEST(Expansion, BruteForceAgreesWithOracle) {
  for (const auto& g : small_graphs()) {
    const std::size_t n = g.num_vertices();
    double phi_best = 1e300, phiv_best = 1e300, psi_best = 1e300;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) > n / 2) continue;
      const double phi = oracle::phi(g, mask);
      const double phiv = static_cast<double>(oracle::n_half(g, mask)) / std::popcount(mask);
      phi_best = std::min(phi_best, phi);
      phiv_best = std::min(phiv_best, phiv);
      psi_best = std::min(psi_best, phi * phiv);
    }
    auto phi = graph_expansion_bruteforce(g, ExpansionMode::kPhi);
    auto phiv = graph_expansion_bruteforce(g, ExpansionMode::kPhiV);
    auto psi = graph_expansion_bruteforce(g, ExpansionMode::kPsi);
    EXPECT_NEAR(phi.value, phi_best, 1e-13);
    EXPECT_NEAR(phiv.value, phiv_best, 1e-13);
    EXPECT_NEAR(psi.value, psi_best, 1e-13);
    EXPECT_NEAR(edge_expansion(g, phi.witness), phi.value, 1e-13);
    EXPECT_NEAR(expansion_stats(g, psi.witness).psi, psi.value, 1e-13);
  }
}

TEST(Expansion, SmallSetExpansion) {
  auto c8 = gen_cycle(8);
  EXPECT_DOUBLE_EQ(small_set_expansion_bruteforce(c8, 0.125).value, 1.0);
  auto q3 = gen_hypercube(3);
  EXPECT_NEAR(small_set_expansion_bruteforce(q3, 0.25).value, 2.0 / 3.0, 1e-14);
  EXPECT_THROW(small_set_expansion_bruteforce(c8, 0.1), PreconditionError);
  for (const auto& g : small_graphs()) {
    EXPECT_DOUBLE_EQ(small_set_expansion_bruteforce(g, 0.5).value,
                     graph_expansion_bruteforce(g, ExpansionMode::kPhi).value);
    double prev = 1e300;
    for (double delta : {0.1, 0.2, 0.3, 0.4, 0.5}) {
      if (delta * g.num_vertices() < 1) continue;
      const double v = small_set_expansion_bruteforce(g, delta).value;
      EXPECT_LE(v, prev + 1e-15);
      prev = v;
    }
  }
}

TEST(Expansion, KWayExamples) {
  auto c6 = k_way_expansion_bruteforce(gen_cycle(6), 3);
  EXPECT_NEAR(c6.value, 0.5, 1e-14);
  ASSERT_EQ(c6.witnesses.size(), 3u);
  for (const auto& w : c6.witnesses) {
    EXPECT_EQ(w.size(), 2u);
    EXPECT_LE(edge_expansion(gen_cycle(6), w), 0.5 + 1e-14);
  }
  EXPECT_NEAR(k_way_expansion_bruteforce(gen_complete(4), 3).value, 1.0, 1e-14);
  EXPECT_THROW(k_way_expansion_bruteforce(gen_cycle(15), 3), InstanceTooLarge);
  EXPECT_THROW(k_way_expansion_bruteforce(gen_cycle(13), 4), InstanceTooLarge);
}

TEST(Expansion, KWayProperties) {
  for (const auto& g : small_graphs()) {
    if (g.num_vertices() > 12) continue;
    const double phi = graph_expansion_bruteforce(g, ExpansionMode::kPhi).value;
    const auto two = k_way_expansion_bruteforce(g, 2);
    EXPECT_NEAR(two.value, phi, 1e-13);
    auto lambdas = oracle::spectrum(g);
    double prev = 0.0;
    for (std::size_t k = 2; k <= 4; ++k) {
      auto kw = k_way_expansion_bruteforce(g, k);
      EXPECT_GE(kw.value, prev - 1e-14);
      EXPECT_GE(kw.value, lambdas[k - 1] / 2 - 1e-12) << "k=" << k;
      prev = kw.value;
      // Witnesses disjoint and each within the value.
      std::vector<int> seen(g.num_vertices(), 0);
      for (const auto& w : kw.witnesses) {
        for (Vertex v : w) EXPECT_EQ(seen[v]++, 0);
        EXPECT_LE(edge_expansion(g, w), kw.value + 1e-13);
      }
    }
  }
}

TEST(Expansion, MinSubsetExpansion) {
  auto g = gen_dumbbell(4);
  VertexSet clique = VertexSet::range(8, 0, 4);
  auto best = min_subset_expansion_bruteforce(g, clique);
  double oracle_best = 1e300;
  for (std::uint64_t m = 1; m < 16; ++m) oracle_best = std::min(oracle_best, oracle::phi(g, m));
  EXPECT_NEAR(best.value, oracle_best, 1e-14);
}

TEST(Expansion, SweepProfileExamples) {
  auto c8 = gen_cycle(8);
  std::vector<Vertex> order{0, 1, 2, 3, 4, 5, 6, 7};
  auto prof = sweep_profile(c8, order, 7, true);
  EXPECT_DOUBLE_EQ(prof.phi[3], 0.25);
  EXPECT_EQ(prof.n_half[3], 1u);
  auto k4 = sweep_profile(gen_complete(4), std::vector<Vertex>{2, 0, 1, 3}, 1);
  EXPECT_DOUBLE_EQ(k4.phi[0], 1.0);
  EXPECT_THROW(sweep_profile(c8, std::vector<Vertex>{0, 0, 1, 2, 3, 4, 5, 6}, 3),
               PreconditionError);
  EXPECT_THROW(sweep_profile(c8, order, 8), PreconditionError);
}

TEST(Expansion, IncrementalSweepMatchesDirect) {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 1000; ++seed) {
    auto g = gen_planted_partition(2 + seed % 3, 10 + seed % 7, 0.75, seed).graph;
    std::vector<Vertex> order(g.num_vertices());
    std::iota(order.begin(), order.end(), Vertex{0});
    std::shuffle(order.begin(), order.end(), rng);
    auto prof = sweep_profile(g, order, g.num_vertices() - 1);
    for (std::size_t a = 1; a < g.num_vertices() && checked < 1000; a += 3, ++checked) {
      EXPECT_NEAR(prof.boundary[a - 1], boundary_weight(g, prof.prefix_set(a)), 1e-12);
    }
  }
}

TEST(Expansion, OrderByValueBreaksTiesByIndex) {
  std::vector<double> x{0.5, 1.0, 0.5, -2.0, 1.0};
  EXPECT_EQ(order_by_value(x), (std::vector<Vertex>{1, 4, 0, 2, 3}));
}
