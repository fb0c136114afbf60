#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cheeger {

using Vertex = std::size_t;

/// One value per vertex: eigenvectors, pagerank vectors, walk distributions.
using RealVector = std::vector<double>;

/// Absolute tolerance on |weighted degree - 1|.
inline constexpr double kDegreeTolerance = 1e-9;

struct Edge {
  Vertex u;
  Vertex v;
  double weight;
};

struct Neighbor {
  Vertex to;
  double weight;
};

/// Sparse symmetric graph in which every vertex has weighted degree one.
///
/// Each undirected edge is stored once per endpoint from the same double, so
/// w(u,v) and w(v,u) are bit-identical. Self-loops are never stored; the lazy
/// walk's holding probability is implicit in the operators. Immutable after
/// construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds and validates. Edges may be given in either orientation but each
  /// unordered pair at most once. Throws GraphValidationError.
  static WeightedGraph from_edges(std::size_t n, std::span<const Edge> edges);

  /// Same, but skips the unit-degree check. Used by the normalizer and by
  /// generators before their final balancing pass.
  static WeightedGraph from_edges_unchecked(std::size_t n, std::span<const Edge> edges);

  std::size_t num_vertices() const { return degree_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }

  /// Neighbors sorted by index.
  std::span<const Neighbor> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  double degree(Vertex v) const { return degree_[v]; }
  std::size_t neighbor_count(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t max_neighbor_count() const;

  /// d when every vertex has exactly d neighbors and every weight equals 1/d
  /// (the unweighted d-regular setting of the local algorithms).
  std::optional<std::size_t> uniform_degree() const { return uniform_degree_; }

  /// Each edge once with u < v, sorted by (u, v).
  std::vector<Edge> edges() const;

  /// Weight of edge {u, v}, zero when absent. O(log deg).
  double weight(Vertex u, Vertex v) const;

  /// Throws GraphValidationError when some degree is not 1 within tolerance.
  void check_unit_degree(double tolerance = kDegreeTolerance) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  static WeightedGraph build(std::size_t n, std::span<const Edge> edges, bool check_degree);

  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> degree_;
  std::optional<std::size_t> uniform_degree_;
};

/// A nonempty set of distinct vertices of a graph on n vertices, kept sorted.
class VertexSet {
 public:
  /// Sorts and validates; throws PreconditionError on duplicates, out-of-range
  /// members or an empty list.
  VertexSet(std::size_t universe, std::vector<Vertex> members);

  static VertexSet from_mask(std::span<const char> mask);
  /// Positions [0, size) of an ordering.
  static VertexSet prefix(std::span<const Vertex> order, std::size_t size);
  static VertexSet range(std::size_t universe, Vertex first, Vertex last_exclusive);

  std::size_t size() const { return members_.size(); }
  std::size_t universe() const { return universe_; }
  const std::vector<Vertex>& members() const { return members_; }
  bool contains(Vertex v) const;
  bool is_full() const { return members_.size() == universe_; }
  std::vector<char> mask() const;
  VertexSet complement() const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<Vertex> members_;
};

/// Characteristic vector of a single vertex.
RealVector indicator(std::size_t n, Vertex s);
/// Characteristic vector of a set.
RealVector indicator(const VertexSet& set);

}  // namespace cheeger
