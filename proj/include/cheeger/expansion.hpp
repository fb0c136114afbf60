#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cheeger/graph.hpp"

namespace cheeger {

/// Expansion quantities of one set S.
struct ExpansionStats {
  VertexSet set;
  double boundary_weight = 0.0;  ///< w(S, V \ S)
  double phi = 0.0;              ///< boundary_weight / |S|
  std::size_t n_half = 0;        ///< fewest outside vertices carrying half the boundary
  double phi_v = 0.0;            ///< n_half / |S|
  double psi = 0.0;              ///< phi * phi_v
};

/// w(S, V \ S). S must be a proper nonempty subset.
double boundary_weight(const WeightedGraph& g, const VertexSet& s);

/// phi(S) = w(S, V \ S) / |S|.
double edge_expansion(const WeightedGraph& g, const VertexSet& s);

struct RobustVertexExpansion {
  std::size_t n_half = 0;
  double phi_v = 0.0;
};

/// N_rho(S): the fewest vertices outside S that together carry at least
/// rho * w(S, V \ S). Taking outside vertices in decreasing order of w(S, {v})
/// (ties by index) is optimal, so the greedy prefix is exact. rho = 1/2 gives
/// the robust vertex expansion.
RobustVertexExpansion robust_vertex_expansion(const WeightedGraph& g, const VertexSet& s,
                                              double rho = 0.5);

ExpansionStats expansion_stats(const WeightedGraph& g, const VertexSet& s, double rho = 0.5);

enum class ExpansionMode { kPhi, kPhiV, kPsi };

struct ExtremalSet {
  double value = 0.0;
  VertexSet witness;
};

/// Largest n accepted by the exhaustive single-set searches.
inline constexpr std::size_t kMaxBruteForceVertices = 24;

/// min over nonempty S with |S| <= min(max_size, n/2) of phi, phi_v or psi.
/// Ties resolve to the lexicographically smallest member list. n <= 24.
ExtremalSet graph_expansion_bruteforce(const WeightedGraph& g, ExpansionMode mode,
                                       std::size_t max_size);
ExtremalSet graph_expansion_bruteforce(const WeightedGraph& g, ExpansionMode mode);

/// phi_delta(G) = min over |S| <= delta * n of phi(S). delta in (0, 1/2].
ExtremalSet small_set_expansion_bruteforce(const WeightedGraph& g, double delta);

struct KWayExpansion {
  double value = 0.0;
  std::vector<VertexSet> witnesses;  ///< k disjoint sets attaining the value
};

/// phi_k(G): min over k disjoint nonempty sets of the largest phi among them.
/// Exhaustive; n <= 14 for k <= 3 and n <= 12 for k = 4.
KWayExpansion k_way_expansion_bruteforce(const WeightedGraph& g, std::size_t k);

/// min over nonempty T subset of S of phi(T). |S| <= 20.
ExtremalSet min_subset_expansion_bruteforce(const WeightedGraph& g, const VertexSet& s);

/// Level-set statistics of an ordering.
///
/// boundary[a-1] and phi[a-1] describe the prefix of the first a vertices,
/// for 1 <= a <= max_prefix. Robust vertex expansion per prefix is optional
/// because it costs O(n log n) per prefix.
struct SweepProfile {
  std::vector<Vertex> order;
  std::vector<double> boundary;
  std::vector<double> phi;
  std::vector<std::size_t> n_half;  ///< empty unless requested

  std::size_t max_prefix() const { return phi.size(); }
  VertexSet prefix_set(std::size_t a) const { return VertexSet::prefix(order, a); }
  /// Full statistics of prefix a (1-based size), computed directly.
  ExpansionStats prefix_stats(const WeightedGraph& g, std::size_t a) const;
};

/// O(edges) incremental sweep. `order` must be a permutation of the vertices
/// and max_prefix <= n - 1.
SweepProfile sweep_profile(const WeightedGraph& g, std::span<const Vertex> order,
                           std::size_t max_prefix, bool with_vertex_expansion = false);

/// Vertices sorted by value, descending, ties by index.
std::vector<Vertex> order_by_value(std::span<const double> values);

}  // namespace cheeger
