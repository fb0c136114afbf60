#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "cheeger/errors.hpp"
#include "cheeger/generators.hpp"
#include "cheeger/powering.hpp"
#include "cheeger/spectral.hpp"
#include "cheeger/walks.hpp"
#include "oracles.hpp"

using namespace cheeger;

namespace {

WeightedGraph two_vertex() {
  const std::vector<Edge> e{{0, 1, 1.0}};
  return WeightedGraph::from_edges(2, e);
}

Eigen::MatrixXd dense_power(const WeightedGraph& g, std::size_t t) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n) - oracle::laplacian(g) / 2.0;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < t; ++i) out = out * w;
  return out;
}

// min over 1 <= |S| <= n/2 of off-diagonal crossing mass / |S|, plain loops.
double oracle_phi_h(const Eigen::MatrixXd& h) {
  const int n = static_cast<int>(h.rows());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const int size = std::popcount(mask);
    if (2 * size > n) continue;
    double cut = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!((mask >> i) & 1)) continue;
      for (int j = 0; j < n; ++j) {
        if (!((mask >> j) & 1)) cut += h(i, j);
      }
    }
    best = std::min(best, cut / size);
  }
  return best;
}

double oracle_phi_g(const WeightedGraph& g) {
  const int n = static_cast<int>(g.num_vertices());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (2 * std::popcount(mask) > n) continue;
    best = std::min(best, oracle::phi(g, mask));
  }
  return best;
}

}  // namespace

TEST(GraphPower, MatchesRepeatedProduct) {
  const auto g = gen_dumbbell(5);
  for (std::size_t t : {1u, 2u, 3u, 8u, 13u}) {
    const auto h = graph_power(g, t);
    const auto ref = dense_power(g, t);
    for (std::size_t i = 0; i < h.n; ++i) {
      for (std::size_t j = 0; j < h.n; ++j) {
        EXPECT_NEAR(h.entry(i, j), ref(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                    1e-13);
        EXPECT_EQ(h.entry(i, j), h.entry(j, i));
      }
    }
    EXPECT_LE(h.row_sum_error(), 1e-12);
  }
  EXPECT_THROW(graph_power(g, 0), PreconditionError);
}

TEST(GraphPower, FirstPowerHalvesExpansion) {
  std::mt19937_64 rng(3);
  const auto g = gen_planted_partition(2, 7, 0.8, 1).graph;
  const auto h = graph_power(g, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vertex> members;
    for (Vertex v = 0; v < 14; ++v) {
      if (rng() & 1) members.push_back(v);
    }
    if (members.empty() || members.size() == 14) continue;
    const VertexSet s(14, members);
    EXPECT_NEAR(h.phi(s), edge_expansion(g, s) / 2.0, 1e-14);
  }
}

TEST(GraphPower, TwoVertexSquare) {
  const auto h = graph_power(two_vertex(), 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(h.entry(i, j), 0.5);
  }
  EXPECT_DOUBLE_EQ(h.phi(VertexSet(2, {0})), 0.5);
  EXPECT_DOUBLE_EQ(power_expansion_bruteforce(h).value, 0.5);
}

TEST(GraphPower, BruteForceMatchesOracle) {
  for (const auto& g : {gen_cycle(9), gen_hypercube(3), gen_dumbbell(5)}) {
    for (std::size_t t : {1u, 3u, 6u}) {
      const auto h = graph_power(g, t);
      EXPECT_NEAR(power_expansion_bruteforce(h).value, oracle_phi_h(dense_power(g, t)), 1e-12);
    }
  }
}

TEST(SqrtT, HoldsOnSmallGraphs) {
  std::vector<WeightedGraph> graphs{gen_cycle(8), gen_complete(4), gen_hypercube(3),
                                    gen_dumbbell(5), gen_cycle(13), two_vertex()};
  for (const auto& g : graphs) {
    const double phi_g = oracle_phi_g(g);
    for (std::size_t t : {1u, 2u, 4u, 9u, 16u}) {
      const auto rep = sqrt_t_power_check(g, t);
      EXPECT_TRUE(rep.pass) << rep.counterexample;
      EXPECT_NEAR(rep.lhs, oracle_phi_h(dense_power(g, t)), 1e-12);
      EXPECT_NEAR(rep.rhs,
                  (1 - std::pow(1 - phi_g / 2, std::sqrt(static_cast<double>(t)))) / 20, 1e-14);
      if (t == 1) EXPECT_NEAR(rep.lhs, phi_g / 2, 1e-14);
    }
  }
  EXPECT_THROW(sqrt_t_power_check(gen_cycle(15), 2), InstanceTooLarge);
}

TEST(SpectrumMapping, MatchesDirectComputation) {
  std::vector<WeightedGraph> graphs{gen_cycle(64), gen_hypercube(5), gen_dumbbell(12),
                                    gen_planted_partition(4, 16, 0.85, 2).graph};
  for (const auto& g : graphs) {
    for (std::size_t t : {1u, 2u, 5u, 17u}) {
      EXPECT_LE(spectrum_mapping_error(g, graph_power(g, t)), 1e-8);
    }
  }
  const auto spec = dense_spectrum(gen_hypercube(3));
  const std::vector<double> q3{0, 2. / 3, 2. / 3, 2. / 3, 4. / 3, 4. / 3, 4. / 3, 2};
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(spec[i], q3[i], 1e-12);
}

TEST(ImprovedSweep, IndicatorGivesSetExpansion) {
  const auto g = gen_cycle(12);
  const VertexSet s(12, {2, 3, 4, 5});
  const auto res = improved_cheeger_sweep(g, indicator(s), 2);
  EXPECT_EQ(res.best.set, s);
  EXPECT_NEAR(res.best.phi, edge_expansion(g, s), 1e-15);
  EXPECT_TRUE(res.report.pass);
  EXPECT_NEAR(res.report.scalars.at("phi_k"), 2.0 / 12, 1e-12);
}

TEST(ImprovedSweep, RoundingBoundOnRandomHalfSupportVectors) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<WeightedGraph> graphs{gen_cycle(14), gen_hypercube(4), gen_dumbbell(7),
                                    gen_planted_partition(2, 12, 0.9, 3).graph};
  for (const auto& g : graphs) {
    const std::size_t n = g.num_vertices();
    for (int trial = 0; trial < 25; ++trial) {
      RealVector x(n, 0.0);
      const std::size_t support = 1 + rng() % (n / 2);
      for (std::size_t i = 0; i < support; ++i) x[rng() % n] = u(rng) + 1e-3;
      const auto res = improved_cheeger_sweep(g, x, 2);
      // Oracle: phi_sw squared against 2 R(x) with a dense Rayleigh quotient.
      Eigen::VectorXd ex = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(n));
      const double r = ex.dot(oracle::laplacian(g) * ex) / ex.squaredNorm();
      EXPECT_NEAR(res.report.scalars.at("rayleigh"), r, 1e-12);
      EXPECT_LE(res.best.phi * res.best.phi, 2 * r + 1e-12);
      EXPECT_TRUE(res.report.pass);
      std::vector<char> seen(n, 0);
      for (const auto& piece : res.disjoint_sets) {
        for (Vertex v : piece.set) {
          EXPECT_FALSE(seen[v]);
          EXPECT_GT(x[v], 0.0);
          seen[v] = 1;
        }
      }
    }
  }
  EXPECT_THROW(improved_cheeger_sweep(gen_cycle(6), RealVector(6, 1.0), 2), PreconditionError);
}

TEST(ImprovedSweep, RoundedWalkVectorOnDumbbell) {
  const auto g = gen_dumbbell(16);
  const auto clique = VertexSet::range(32, 0, 16);
  const auto part = walk_partition(g, 3, edge_expansion(g, clique), 16, 0.5, WalkMode::kExact);
  const auto res = improved_cheeger_sweep(g, part.rounding.y, 2);
  EXPECT_TRUE(res.report.pass) << res.report.counterexample;
  EXPECT_LE(res.best.phi, edge_expansion(g, clique) + 1e-12);
  EXPECT_GT(res.report.scalars.at("ratio_sqrt_lambda_k"), 0.0);
}

TEST(Reduction, NamedFixtures) {
  struct Case {
    WeightedGraph g;
    std::size_t k;
    std::size_t t;
    bool stated_holds;
  };
  // Q3, k = 3: lambda_3 = 2/3, t = 2, lambda_2(H) = 1 - (2/3)^2 = 5/9 while
  // lambda_2 / (2 lambda_3) = 1/2; the ceiling-aware bound t lambda_2 / 2 = 2/3.
  // K4, k = 4: lambda_4 = 4/3 > 1, t = 1, lambda_2(H) = lambda_2 / 2 = 2/3
  // exceeds lambda_2 / (2 lambda_4) = 1/2; t lambda_2 / 2 = 2/3 holds with equality.
  std::vector<Case> cases{{gen_hypercube(3), 3, 2, false},
                          {gen_complete(4), 4, 1, false},
                          {gen_cycle(8), 3, 0, true}};
  for (const auto& c : cases) {
    const auto rep = reduction_checks(c.g, c.k);
    EXPECT_TRUE(rep.pass) << rep.counterexample;
    if (c.t) EXPECT_EQ(rep.scalars.at("t"), static_cast<double>(c.t));
    EXPECT_GE(rep.scalars.at("lambdak_H"), 0.25);
    EXPECT_NEAR(rep.scalars.at("lambdak_H"), rep.scalars.at("lambdak_H_formula"), 1e-8);
    EXPECT_NEAR(rep.scalars.at("phi_G"), oracle_phi_g(c.g), 1e-14);
    EXPECT_EQ(rep.scalars.at("stated_bound_holds"), c.stated_holds ? 1.0 : 0.0)
        << "k=" << c.k << " t=" << rep.scalars.at("t") << " l2H=" << rep.scalars.at("lambda2_H")
        << " stated=" << rep.scalars.at("lambda2_H_stated_bound");
  }
  const auto q3 = reduction_checks(gen_hypercube(3), 3);
  EXPECT_NEAR(q3.scalars.at("lambda2_H"), 5.0 / 9, 1e-12);
  // Two disjoint triangles joined... a disconnected graph has lambda_2 = 0.
  const std::vector<Edge> tri{{0, 1, .5}, {1, 2, .5}, {0, 2, .5}, {3, 4, .5}, {4, 5, .5}, {3, 5, .5}};
  EXPECT_THROW(reduction_checks(WeightedGraph::from_edges(6, tri), 2), PreconditionError);
}

TEST(MonteCarlo, AgreesWithDensePower) {
  const auto g = gen_dumbbell(6);
  const VertexSet s = VertexSet::range(12, 0, 6);
  for (std::size_t t : {1u, 4u, 10u}) {
    const auto h = graph_power(g, t);
    const auto est = monte_carlo_crossing(g, s, t, 40000, 5 + t);
    EXPECT_NEAR(est.mean, h.phi(s), 3 * est.stddev + 1e-3);
  }
}
