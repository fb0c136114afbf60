#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cheeger/graph.hpp"

namespace cheeger {

/// Rescales a positive symmetric edge list until every weighted degree is one.
///
/// One pass replaces w_ij by (w_ij / d_i + w_ij / d_j) / 2. Passes repeat until
/// the largest degree error is below 1e-13 or `max_passes` is reached. Graphs
/// that admit no unit-degree reweighting on the same support (stars, for
/// example) never converge and raise GraphValidationError.
std::vector<Edge> normalize_to_unit_degree(std::size_t n, std::vector<Edge> edges,
                                           std::size_t max_passes = 100000);

/// Q_d: 2^d vertices, Hamming-distance-one edges of weight 1/d. 1 <= d <= 20.
WeightedGraph gen_hypercube(int d);

/// C_n with edge weight 1/2. n >= 3.
WeightedGraph gen_cycle(std::size_t n);

/// K_n with edge weight 1/(n-1). n >= 2.
WeightedGraph gen_complete(std::size_t n);

/// Two K_m joined by a bridge between vertex 0 and vertex m.
///
/// Clique edges at the two bridge endpoints start at (1 - bridge) / (m - 1),
/// all other clique edges at 1 / (m - 1); the result is then balanced to unit
/// degree. The default bridge weight is 1/m. m >= 3.
WeightedGraph gen_dumbbell(std::size_t m);
WeightedGraph gen_dumbbell(std::size_t m, double bridge_weight);

struct PlantedPartition {
  WeightedGraph graph;
  std::vector<VertexSet> parts;  ///< part j is [j*m, (j+1)*m)
};

/// Planted partition: k parts of m vertices. Roughly a fraction p_in of each
/// vertex's unit degree stays inside its part; the remainder crosses to random
/// vertices of other parts. Deterministic in `seed`.
PlantedPartition gen_planted_partition(std::size_t k, std::size_t m, double p_in,
                                       std::uint64_t seed);

}  // namespace cheeger
