#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "cheeger/errors.hpp"
#include "cheeger/generators.hpp"
#include "cheeger/partitioner.hpp"
#include "oracles.hpp"

using namespace cheeger;

namespace {

std::vector<WeightedGraph> families() {
  std::vector<WeightedGraph> out;
  for (std::size_t n : {4, 7, 8, 12, 32, 64}) out.push_back(gen_cycle(n));
  for (int d : {1, 2, 3, 4, 6}) out.push_back(gen_hypercube(d));
  for (std::size_t n : {3, 4, 9, 20}) out.push_back(gen_complete(n));
  for (std::size_t m : {3, 4, 8, 16}) out.push_back(gen_dumbbell(m));
  for (std::uint64_t seed : {1, 7}) {
    out.push_back(gen_planted_partition(2, 6, 0.9, seed).graph);
    out.push_back(gen_planted_partition(2, 32, 0.9, seed).graph);
  }
  return out;
}

// Dense oracle for lambda_2 and a unit eigenvector.
EigenPair dense_pair(const WeightedGraph& g, int index = 1) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::laplacian(g));
  EigenPair p;
  p.value = es.eigenvalues()[index];
  Eigen::VectorXd v = es.eigenvectors().col(index);
  p.vector.assign(v.data(), v.data() + v.size());
  p.residual = (oracle::laplacian(g) * v - p.value * v).norm();
  return p;
}

}  // namespace

TEST(Sweep, DumbbellBisection) {
  auto g = gen_dumbbell(4);
  auto pair = second_eigenpair(g);
  auto res = sweep_cut(g, pair.vector);
  auto best = graph_expansion_bruteforce(g, ExpansionMode::kPhi);
  EXPECT_NEAR(res.best.phi, best.value, 1e-14);
  EXPECT_EQ(res.best.set.size(), 4u);
  const bool a = res.best.set == VertexSet::range(8, 0, 4);
  const bool b = res.best.set == VertexSet::range(8, 4, 8);
  EXPECT_TRUE(a || b);
}

TEST(Sweep, IndicatorVectorRecoversSet) {
  auto pp = gen_planted_partition(2, 16, 0.9, 3);
  const auto& g = pp.graph;
  const auto& part = pp.parts[0];
  RealVector x(32);
  for (Vertex v = 0; v < 32; ++v) x[v] = part.contains(v) ? 1.0 : -1.0;
  EXPECT_LE(sweep_cut(g, x).best.phi, edge_expansion(g, part) + 1e-15);
  EXPECT_THROW(sweep_cut(g, RealVector(32, 2.0)), PreconditionError);
}

TEST(Sweep, CheegerSandwich) {
  for (const auto& g : families()) {
    auto pair = second_eigenpair(g);
    auto res = sweep_cut(g, pair.vector);
    const double lam = pair.value;
    EXPECT_GE(res.best.phi, lam / 2 * (1 - 1e-7)) << g.num_vertices();
    EXPECT_LE(res.best.phi, std::sqrt(2 * lam) * (1 + 1e-7)) << g.num_vertices();
    EXPECT_LE(res.best.set.size(), g.num_vertices() / 2);
  }
}

TEST(DropLemma, HoldsOnEigenpairs) {
  for (const auto& g : families()) {
    if (g.num_vertices() > 64) continue;
    auto pairs = eigenpairs(g, std::min<std::size_t>(4, g.num_vertices()));
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      auto rep = drop_lemma_check(g, pairs[i].vector, pairs[i].value, 0, 0);
      EXPECT_TRUE(rep.pass) << rep.counterexample;
      const double n = static_cast<double>(g.num_vertices());
      EXPECT_EQ(rep.scalars["pairs_checked"] + rep.scalars["pairs_vacuous"], n * (n - 1) / 2);
    }
  }
  // Q3 with the exact value 2/3 and the dense oracle's vector.
  auto q3 = gen_hypercube(3);
  auto p = dense_pair(q3);
  EXPECT_NEAR(p.value, 2.0 / 3.0, 1e-14);
  EXPECT_TRUE(drop_lemma_check(q3, p.vector, 2.0 / 3.0, 0, 0).pass);
}

TEST(DropLemma, HandCheckedPairOnK4) {
  // x = (1, -1/3, -1/3, -1/3) is a K4 eigenvector for 4/3. Pair (1, 2):
  // lhs 4/3, rhs (4/3)(1)/w({0},{1,2,3}) = 4/3. Tight.
  auto g = gen_complete(4);
  RealVector x{1, -1.0 / 3, -1.0 / 3, -1.0 / 3};
  auto rep = drop_lemma_check(g, x, 4.0 / 3.0, 0, 0);
  EXPECT_TRUE(rep.pass);
}

TEST(DropLemma, NonEigenvectorFails) {
  auto g = gen_cycle(8);
  RealVector x(8, -1.0 / 8);
  x[0] += 1.0;
  EXPECT_THROW(drop_lemma_check(g, x, 0.01, 0, 0), PreconditionError);
  auto rep = drop_inequality_scan(g, x, 0.01, 0, 0);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.counterexample.empty());
  EXPECT_GT(rep.lhs, rep.rhs);
}

TEST(DropLemma, SampledPairsOnLargeGraph) {
  auto g = gen_cycle(200);
  auto pair = second_eigenpair(g);
  auto rep = drop_lemma_check(g, pair.vector, pair.value, 500, 3);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.scalars["pairs_checked"] + rep.scalars["pairs_vacuous"], 500.0);
}

TEST(Jumping, ConstantGrowthDoubles) {
  auto g = gen_cycle(40);
  std::vector<Vertex> order(40);
  std::iota(order.begin(), order.end(), Vertex{0});
  auto seq = jumping_sequence(g, order, JumpRule::kPagerankVertex, 20, 1, 1.0);
  EXPECT_EQ(seq.indices, (std::vector<std::size_t>{1, 2, 4, 8, 16, 32}));
}

TEST(Jumping, CycleEdgeRuleByHand) {
  auto g = gen_cycle(8);
  std::vector<Vertex> order{0, 1, 2, 3, 4, 5, 6, 7};
  auto seq = jumping_sequence(g, order, JumpRule::kEdge, 4);
  EXPECT_EQ(seq.indices, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_DOUBLE_EQ(seq.stats[0].phi, 1.0);
  EXPECT_DOUBLE_EQ(seq.stats[1].phi, 0.5);
}

TEST(Jumping, VertexRuleIsExactIntegerStep) {
  auto g = gen_complete(9);
  std::vector<Vertex> order(9);
  std::iota(order.begin(), order.end(), Vertex{0});
  auto seq = jumping_sequence(g, order, JumpRule::kVertex, 4);
  // Prefix m of K9: each outside vertex carries m/8 of boundary m(9-m)/8,
  // so N_half = ceil((9-m)/2).
  ASSERT_GE(seq.indices.size(), 2u);
  EXPECT_EQ(seq.indices[1], 1u + 4u);
}

TEST(Jumping, HalfBoundaryOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = gen_planted_partition(2 + seed % 3, 6 + seed % 11, 0.6 + 0.003 * seed, seed).graph;
    const std::size_t n = g.num_vertices();
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), Vertex{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (auto rule : {JumpRule::kVertex, JumpRule::kEdge}) {
      auto seq = jumping_sequence(g, order, rule, n / 2);
      EXPECT_EQ(seq.half_boundary_failures, 0u);
      for (std::size_t i = 0; i < seq.crossing.size(); ++i) {
        // Direct recomputation of w([1,m_i],[m_{i+1},n]).
        const std::size_t a = seq.indices[i], b = seq.indices[i + 1];
        double w = 0.0;
        for (std::size_t p = 0; p < a; ++p) {
          for (std::size_t q = b - 1; q < n; ++q) w += g.weight(order[p], order[q]);
        }
        EXPECT_NEAR(seq.crossing[i], w, 1e-13);
        EXPECT_GE(w, seq.stats[i].boundary_weight / 2 - 1e-12);
      }
      for (std::size_t i = 0; i + 1 < seq.indices.size(); ++i) {
        EXPECT_LT(seq.indices[i], seq.indices[i + 1]);
      }
    }
  }
}

TEST(ProductCertificate, PassesOnFamilies) {
  for (const auto& g : families()) {
    auto rep = theorem_product_certificate(g);
    EXPECT_TRUE(rep.pass) << "n=" << g.num_vertices() << " " << rep.counterexample;
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_LE(rep.witness->set.size(), g.num_vertices() / 2);
    EXPECT_EQ(rep.scalars["jump_violations"], 0.0);
  }
}

TEST(ProductCertificate, NamedInstances) {
  auto q3 = theorem_product_certificate(gen_hypercube(3));
  EXPECT_TRUE(q3.pass);
  EXPECT_LE(q3.lhs, 32 * 2.0 / 3.0);
  EXPECT_NEAR(q3.scalars["lambda2"], 2.0 / 3.0, 1e-9);

  auto c32 = gen_cycle(32);
  auto rep = theorem_product_certificate(c32);
  EXPECT_TRUE(rep.pass);
  // A witness prefix of the eigenvector order on a cycle is an arc: its
  // boundary is exactly two edges.
  EXPECT_NEAR(rep.witness->boundary_weight, 1.0, 1e-12);

  auto pp = gen_planted_partition(2, 64, 0.9, 7);
  auto prep = theorem_product_certificate(pp.graph);
  EXPECT_TRUE(prep.pass);
  EXPECT_LE(prep.witness->phi, 32 * prep.scalars["lambda2"]);

  // n <= 20 runs the exhaustive check of lambda2 >= min(Psi, phi)/32.
  auto small = theorem_product_certificate(gen_planted_partition(2, 8, 0.9, 7).graph);
  EXPECT_TRUE(small.pass);
  EXPECT_TRUE(small.scalars.count("psi_G"));
  EXPECT_GE(small.scalars["lambda2"], std::min(small.scalars["psi_G"], small.scalars["phi_G"]) / 32);
}

TEST(ProductCertificate, TwoVertexGraph) {
  auto rep = theorem_product_certificate(gen_complete(2));
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.witness_prefix, std::optional<std::size_t>(1));
}

TEST(GaoClaim, HandValueAndSampling) {
  EXPECT_NEAR(gao_claim_lhs(2, 1, 1, 1.0 / 32), 12.0 / 7.0, 1e-15);
  for (double c : {2.0, 3.0, 4.0}) {
    for (double h : {0.1, 0.5, 1.0}) EXPECT_LE(gao_claim_lhs(c, h, 0.5, 0.0), c);
  }
  auto rep = gao_claim_check(1000000, 42);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.scalars["violations"], 0.0);
  EXPECT_LE(rep.scalars["max_lhs_over_c"], 1.0);
}

TEST(LemmaJump, CycleTwelve) {
  auto g = gen_cycle(12);
  const double phi3 = k_way_expansion_bruteforce(g, 3).value;
  EXPECT_NEAR(phi3, 0.25, 1e-14);  // three arcs of four
  std::vector<Vertex> order(12);
  std::iota(order.begin(), order.end(), Vertex{0});
  auto rep = lemma_jump_check(g, order, 0.05, 3, phi3);
  EXPECT_TRUE(rep.pass);
  EXPECT_DOUBLE_EQ(rep.rhs, 16 * 3 / 0.25);
  EXPECT_THROW(lemma_jump_check(g, order, 0.1, 3, phi3), PreconditionError);
}

TEST(LemmaJump, EmptyBandPassesTrivially) {
  auto g = gen_complete(8);
  std::vector<Vertex> order(8);
  std::iota(order.begin(), order.end(), Vertex{0});
  // Every prefix of K8 has phi >= 4/7, so the band [0.01, 0.02] is empty.
  auto rep = lemma_jump_check(g, order, 0.01, 2, k_way_expansion_bruteforce(g, 2).value);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.lhs, 0.0);
}

TEST(LemmaJump, RandomOrders) {
  std::mt19937_64 rng(5);
  for (const auto& g : {gen_cycle(12), gen_dumbbell(6), gen_planted_partition(3, 4, 0.8, 2).graph}) {
    const std::size_t n = g.num_vertices();
    for (std::size_t k : {2, 3}) {
      const double pk = k_way_expansion_bruteforce(g, k).value;
      std::vector<Vertex> order(n);
      std::iota(order.begin(), order.end(), Vertex{0});
      for (int rep = 0; rep < 30; ++rep) {
        std::shuffle(order.begin(), order.end(), rng);
        for (double frac : {0.01, 0.1, 0.2, 0.249}) {
          EXPECT_TRUE(lemma_jump_check(g, order, frac * pk, k, pk).pass);
        }
      }
    }
  }
}

TEST(KwayCertificate, TrivialRegimeOnK4) {
  auto rep = theorem_kway_certificate(gen_complete(4), 3);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.scalars["trivial_regime"], 1.0);
  EXPECT_NEAR(rep.scalars["phi_k"], 1.0, 1e-14);
  EXPECT_NEAR(rep.scalars["lambda2"], 4.0 / 3.0, 1e-9);
}

TEST(KwayCertificate, CycleTwelveIsTrivialRegime) {
  // phi_3(C12) = 1/4 and lambda_2 = 1 - cos(pi/6), so phi_3^2 < 1024 lambda_2.
  auto rep = theorem_kway_certificate(gen_cycle(12), 3);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.scalars["trivial_regime"], 1.0);
}

TEST(KwayCertificate, NontrivialRegimeFindsWitness) {
  // Two K7 joined by a very light bridge: phi_3 stays large while lambda_2
  // collapses, so the certificate has to exhibit a prefix.
  auto g = gen_dumbbell(7, 1e-5);
  auto rep = theorem_kway_certificate(g, 3);
  EXPECT_EQ(rep.scalars["trivial_regime"], 0.0);
  EXPECT_TRUE(rep.pass) << rep.counterexample;
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_EQ(rep.witness->set.size(), 7u);
}

TEST(KwayCertificate, FamiliesSmall) {
  for (const auto& g : families()) {
    if (g.num_vertices() > 14) continue;
    for (std::size_t k : {2, 3}) {
      if (g.num_vertices() < k) continue;
      auto rep = theorem_kway_certificate(g, k);
      EXPECT_TRUE(rep.pass) << rep.counterexample;
    }
  }
}

TEST(CurrentSweep, Examples) {
  auto d = gen_dumbbell(4);
  auto res = current_sweep(d, 1);
  EXPECT_EQ(res.best.set, VertexSet::range(8, 0, 4));
  auto k4 = current_sweep(gen_complete(4), 2);
  EXPECT_NEAR(k4.best.phi, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(k4.best.set.size(), 2u);
  auto two = current_sweep(gen_complete(2), 0);
  EXPECT_EQ(two.best.set, VertexSet(2, {0}));
  EXPECT_DOUBLE_EQ(two.best.phi, 1.0);
}
