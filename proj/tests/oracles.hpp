#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library beyond reading the graph.

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <vector>

#include "cheeger/graph.hpp"

namespace oracle {

inline Eigen::MatrixXd laplacian(const cheeger::WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (const auto& e : g.edges()) {
    l(e.u, e.v) -= e.weight;
    l(e.v, e.u) -= e.weight;
  }
  return l;
}

inline Eigen::VectorXd spectrum(const cheeger::WeightedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g));
  return es.eigenvalues();
}

// Boundary weight of a bitmask set, straight from the edge list.
inline double cut(const cheeger::WeightedGraph& g, std::uint64_t mask) {
  double total = 0.0;
  for (const auto& e : g.edges()) {
    if (((mask >> e.u) & 1) != ((mask >> e.v) & 1)) total += e.weight;
  }
  return total;
}

inline double phi(const cheeger::WeightedGraph& g, std::uint64_t mask) {
  return cut(g, mask) / std::popcount(mask);
}

// N_{1/2} by trying every subset of the outside, smallest first.
inline int n_half(const cheeger::WeightedGraph& g, std::uint64_t mask) {
  const int n = static_cast<int>(g.num_vertices());
  const double boundary = cut(g, mask);
  std::vector<int> outside;
  for (int v = 0; v < n; ++v) {
    if (!((mask >> v) & 1)) outside.push_back(v);
  }
  int best = static_cast<int>(outside.size());
  const std::uint64_t limit = std::uint64_t{1} << outside.size();
  for (std::uint64_t t = 0; t < limit; ++t) {
    const int size = std::popcount(t);
    if (size >= best) continue;
    double covered = 0.0;
    for (std::size_t i = 0; i < outside.size(); ++i) {
      if (!((t >> i) & 1)) continue;
      for (int u = 0; u < n; ++u) {
        if ((mask >> u) & 1) covered += g.weight(u, outside[i]);
      }
    }
    if (covered >= boundary / 2 - 1e-12) best = size;
  }
  return best;
}

inline double min_phi(const cheeger::WeightedGraph& g, std::size_t max_size) {
  const std::size_t n = g.num_vertices();
  double best = 1e300;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    if (static_cast<std::size_t>(std::popcount(m)) <= max_size) best = std::min(best, phi(g, m));
  }
  return best;
}

// Personal pagerank by a dense solve of (I - (1 - alpha) W) r = alpha chi_s.
inline Eigen::VectorXd pagerank(const cheeger::WeightedGraph& g, std::size_t s, double alpha) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  const Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n) - laplacian(g) / 2.0;
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - (1.0 - alpha) * w;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(static_cast<Eigen::Index>(s)) = alpha;
  return m.partialPivLu().solve(rhs);
}

// Random d-regular simple graph with weights 1/d: the union of d random
// perfect matchings, retried until no pair repeats. n even.
template <class Rng>
cheeger::WeightedGraph random_regular(std::size_t n, std::size_t d, Rng& rng) {
  while (true) {
    std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
    std::vector<cheeger::Edge> edges;
    bool ok = true;
    for (std::size_t r = 0; r < d && ok; ++r) {
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng() % (i + 1)]);
      for (std::size_t i = 0; i < n; i += 2) {
        const std::size_t u = perm[i], v = perm[i + 1];
        if (used[u][v]) {
          ok = false;
          break;
        }
        used[u][v] = used[v][u] = 1;
        edges.push_back({u, v, 1.0 / static_cast<double>(d)});
      }
    }
    if (ok) return cheeger::WeightedGraph::from_edges(n, edges);
  }
}

}  // namespace oracle
