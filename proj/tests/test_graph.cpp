#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cheeger/errors.hpp"
#include "cheeger/generators.hpp"
#include "cheeger/graph_io.hpp"
#include "oracles.hpp"

using namespace cheeger;

namespace {

LoadedGraph parse(const std::string& text, bool normalize = false) {
  std::istringstream in(text);
  return read_graph(in, normalize);
}

void expect_unit_degrees(const WeightedGraph& g) {
  for (Vertex v = 0; v < g.num_vertices(); ++v) EXPECT_NEAR(g.degree(v), 1.0, 1e-9) << v;
  for (const Edge& e : g.edges()) EXPECT_EQ(g.weight(e.u, e.v), g.weight(e.v, e.u));
}

}  // namespace

TEST(GraphIo, SmallestLegalGraph) {
  auto loaded = parse("2 1\n0 1 1.0\n");
  EXPECT_EQ(loaded.graph.num_vertices(), 2u);
  EXPECT_EQ(loaded.graph.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(loaded.graph.degree(0), 1.0);
  EXPECT_DOUBLE_EQ(loaded.graph.degree(1), 1.0);
}

TEST(GraphIo, TriangleHalfWeights) {
  auto loaded = parse("# triangle\n3 3\n0 1 0.5\n1 2 5e-1\n0 2 0.5  # trailing\n");
  expect_unit_degrees(loaded.graph);
}

TEST(GraphIo, TriangleUnitWeightsNeedsNormalize) {
  const std::string text = "3 3\n0 1 1.0\n1 2 1.0\n0 2 1.0\n";
  EXPECT_THROW(parse(text), GraphValidationError);
  auto loaded = parse(text, true);
  for (const Edge& e : loaded.graph.edges()) EXPECT_NEAR(e.weight, 0.5, 1e-12);
}

TEST(GraphIo, ParseVersusValidationErrors) {
  EXPECT_THROW(parse("2 1\n0 1\n"), GraphParseError);
  EXPECT_THROW(parse("2 1\n0 1 abc\n"), GraphParseError);
  EXPECT_THROW(parse("2 2\n0 1 1.0\n"), GraphParseError);
  EXPECT_THROW(parse(""), GraphParseError);
  EXPECT_THROW(parse("2 1\n0 1 -1.0\n"), GraphValidationError);
  EXPECT_THROW(parse("2 1\n0 0 1.0\n"), GraphValidationError);
  EXPECT_THROW(parse("2 2\n0 1 1.0\n0 1 1.0\n"), GraphValidationError);
  EXPECT_THROW(parse("3 3\n0 1 0.5\n1 0 0.25\n1 2 0.5\n", false), GraphValidationError);
  try {
    parse("2 1\n0 1 x\n");
    FAIL();
  } catch (const GraphParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(GraphIo, ArbitraryLabelsAreRemapped) {
  auto loaded = parse("3 3\nalpha beta 0.5\nbeta gamma 0.5\nalpha gamma 0.5\n");
  ASSERT_EQ(loaded.labels.size(), 3u);
  EXPECT_EQ(loaded.labels[0], "alpha");
  EXPECT_EQ(loaded.labels[2], "gamma");
  expect_unit_degrees(loaded.graph);
}

TEST(GraphIo, NormalizeAsymmetricInput) {
  // A path 0-1-2 closed into a triangle but listed with lopsided weights.
  auto loaded = parse("3 4\n0 1 2\n1 0 1\n1 2 1\n0 2 3\n", true);
  expect_unit_degrees(loaded.graph);
}

TEST(GraphIo, SaveLoadRoundTripIsBitExact) {
  for (const auto& g : {gen_dumbbell(5), gen_planted_partition(3, 7, 0.8, 11).graph,
                        gen_hypercube(4)}) {
    std::stringstream buf;
    write_graph(buf, g);
    auto back = read_graph(buf, false);
    EXPECT_TRUE(back.graph == g);
  }
}

TEST(Generators, Hypercube) {
  auto q1 = gen_hypercube(1);
  EXPECT_EQ(q1.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(q1.weight(0, 1), 1.0);
  auto q3 = gen_hypercube(3);
  EXPECT_EQ(q3.num_vertices(), 8u);
  EXPECT_EQ(q3.num_edges(), 12u);
  EXPECT_EQ(q3.uniform_degree(), std::optional<std::size_t>(3));
  expect_unit_degrees(q3);
  EXPECT_NEAR(oracle::spectrum(q3)[1], 2.0 / 3.0, 1e-12);
  EXPECT_THROW(gen_hypercube(0), PreconditionError);
  EXPECT_THROW(gen_hypercube(21), PreconditionError);
}

TEST(Generators, Cycle) {
  auto c3 = gen_cycle(3);
  for (const Edge& e : c3.edges()) EXPECT_DOUBLE_EQ(e.weight, 0.5);
  auto c8 = gen_cycle(8);
  EXPECT_DOUBLE_EQ(oracle::phi(c8, 0b1111), 0.25);
  EXPECT_NEAR(oracle::spectrum(gen_cycle(4))[1], 1.0, 1e-12);
  EXPECT_THROW(gen_cycle(2), PreconditionError);
}

TEST(Generators, Dumbbell) {
  auto d3 = gen_dumbbell(3);
  EXPECT_EQ(d3.num_vertices(), 6u);
  EXPECT_EQ(d3.num_edges(), 7u);
  expect_unit_degrees(d3);
  EXPECT_THROW(gen_dumbbell(2), PreconditionError);

  // Easy side of Cheeger on the bisection.
  for (std::size_t m : {3, 4, 8, 16}) {
    auto g = gen_dumbbell(m);
    const std::uint64_t half = (std::uint64_t{1} << m) - 1;
    const double lambda2 = oracle::spectrum(g)[1];
    const double bridge = g.weight(0, m);
    EXPECT_LE(lambda2, 2 * oracle::phi(g, half) + 1e-12);
    EXPECT_NEAR(oracle::phi(g, half), bridge / m, 1e-15);
  }
  // On m = 4 the bisection is the expansion minimizer.
  auto g = gen_dumbbell(4);
  EXPECT_NEAR(oracle::min_phi(g, 4), oracle::phi(g, 0b1111), 1e-15);
}

TEST(Generators, PlantedPartitionDeterministic) {
  auto a = gen_planted_partition(2, 4, 0.9, 7);
  auto b = gen_planted_partition(2, 4, 0.9, 7);
  EXPECT_TRUE(a.graph == b.graph);
  expect_unit_degrees(a.graph);
  auto c = gen_planted_partition(2, 4, 0.9, 8);
  EXPECT_FALSE(a.graph == c.graph);
  EXPECT_THROW(gen_planted_partition(1, 4, 0.9, 1), PreconditionError);
  EXPECT_THROW(gen_planted_partition(2, 1, 0.9, 1), PreconditionError);
  EXPECT_THROW(gen_planted_partition(2, 4, 1.0, 1), PreconditionError);
}

TEST(Generators, PlantedPartInternalBias) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t m : {32, 64}) {
      auto pp = gen_planted_partition(2, m, 0.9, seed);
      expect_unit_degrees(pp.graph);
      double boundary = 0.0;
      for (const Edge& e : pp.graph.edges()) {
        if ((e.u < m) != (e.v < m)) boundary += e.weight;
      }
      EXPECT_NEAR(boundary / static_cast<double>(m), 0.1, 0.05) << "m=" << m << " seed=" << seed;
    }
  }
}

TEST(Graph, RejectsModelViolations) {
  std::vector<Edge> loop{{0, 0, 1.0}};
  EXPECT_THROW(WeightedGraph::from_edges(1, loop), GraphValidationError);
  std::vector<Edge> light{{0, 1, 0.5}};
  EXPECT_THROW(WeightedGraph::from_edges(2, light), GraphValidationError);
  std::vector<Edge> dup{{0, 1, 0.5}, {1, 0, 0.5}};
  EXPECT_THROW(WeightedGraph::from_edges(2, dup), GraphValidationError);
  std::vector<Edge> range{{0, 5, 1.0}};
  EXPECT_THROW(WeightedGraph::from_edges(2, range), GraphValidationError);
}

TEST(VertexSetTest, Validation) {
  EXPECT_THROW(VertexSet(4, {}), PreconditionError);
  EXPECT_THROW(VertexSet(4, {1, 1}), PreconditionError);
  EXPECT_THROW(VertexSet(4, {4}), PreconditionError);
  VertexSet s(5, {3, 0, 2});
  EXPECT_EQ(s.members(), (std::vector<Vertex>{0, 2, 3}));
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s.complement().members(), (std::vector<Vertex>{1, 4}));
}
