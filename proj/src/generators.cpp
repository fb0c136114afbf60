#include "cheeger/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <utility>

#include "cheeger/errors.hpp"

namespace cheeger {

namespace {

// Portable draws: the standard distributions are implementation-defined, the
// engine is not.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(bound));
}

template <typename T>
void shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_index(rng, i)]);
  }
}

}  // namespace

std::vector<Edge> normalize_to_unit_degree(std::size_t n, std::vector<Edge> edges,
                                           std::size_t max_passes) {
  std::vector<double> degree(n);
  auto max_error = [&] {
    std::fill(degree.begin(), degree.end(), 0.0);
    for (const Edge& e : edges) {
      degree[e.u] += e.weight;
      degree[e.v] += e.weight;
    }
    double err = 0.0;
    for (double d : degree) err = std::max(err, std::abs(d - 1.0));
    return err;
  };
  for (std::size_t pass = 0; pass < max_passes; ++pass) {
    if (max_error() <= 1e-13) return edges;
    for (std::size_t v = 0; v < n; ++v) {
      if (degree[v] <= 0.0) {
        throw GraphValidationError("vertex " + std::to_string(v) +
                                   " is isolated and cannot be normalized");
      }
    }
    for (Edge& e : edges) {
      e.weight = 0.5 * (e.weight / degree[e.u] + e.weight / degree[e.v]);
    }
  }
  if (max_error() <= kDegreeTolerance) return edges;
  std::ostringstream os;
  os << "normalization did not reach unit degree after " << max_passes
     << " passes (max degree error " << max_error() << ")";
  throw GraphValidationError(os.str());
}

WeightedGraph gen_hypercube(int d) {
  if (d < 1 || d > 20) throw PreconditionError("hypercube dimension must be in [1, 20]");
  const std::size_t n = std::size_t{1} << d;
  const double w = 1.0 / d;
  std::vector<Edge> edges;
  edges.reserve(n * static_cast<std::size_t>(d) / 2);
  for (Vertex u = 0; u < n; ++u) {
    for (int b = 0; b < d; ++b) {
      const Vertex v = u ^ (std::size_t{1} << b);
      if (u < v) edges.push_back({u, v, w});
    }
  }
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph gen_cycle(std::size_t n) {
  if (n < 3) throw PreconditionError("cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.push_back({u, (u + 1) % n, 0.5});
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph gen_complete(std::size_t n) {
  if (n < 2) throw PreconditionError("complete graph needs at least 2 vertices");
  const double w = 1.0 / static_cast<double>(n - 1);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, w});
  }
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph gen_dumbbell(std::size_t m) {
  if (m < 3) throw PreconditionError("dumbbell cliques need at least 3 vertices");
  return gen_dumbbell(m, 1.0 / static_cast<double>(m));
}

WeightedGraph gen_dumbbell(std::size_t m, double bridge_weight) {
  if (m < 3) throw PreconditionError("dumbbell cliques need at least 3 vertices");
  if (!(bridge_weight > 0.0 && bridge_weight < 1.0)) {
    throw PreconditionError("bridge weight must lie in (0, 1)");
  }
  const double inner = 1.0 / static_cast<double>(m - 1);
  const double at_endpoint = (1.0 - bridge_weight) / static_cast<double>(m - 1);
  std::vector<Edge> edges;
  for (std::size_t side = 0; side < 2; ++side) {
    const Vertex base = side * m;
    for (Vertex i = 0; i < m; ++i) {
      for (Vertex j = i + 1; j < m; ++j) {
        edges.push_back({base + i, base + j, i == 0 ? at_endpoint : inner});
      }
    }
  }
  edges.push_back({0, m, bridge_weight});
  return WeightedGraph::from_edges(2 * m, normalize_to_unit_degree(2 * m, std::move(edges)));
}

PlantedPartition gen_planted_partition(std::size_t k, std::size_t m, double p_in,
                                       std::uint64_t seed) {
  if (k < 2) throw PreconditionError("planted partition needs k >= 2");
  if (m < 2) throw PreconditionError("planted partition needs part size m >= 2");
  if (!(p_in > 0.0 && p_in < 1.0)) throw PreconditionError("p_in must lie in (0, 1)");

  const std::size_t n = k * m;
  std::mt19937_64 rng(seed);
  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<Edge> edges;

  const std::size_t intra_target = std::min<std::size_t>(m - 1, 8);
  const std::size_t inter_target = std::min<std::size_t>((k - 1) * m, 4);
  const double intra_w = p_in / static_cast<double>(intra_target);
  const double inter_w = (1.0 - p_in) / static_cast<double>(inter_target);

  auto add = [&](Vertex u, Vertex v, double w) {
    if (u == v) return;
    auto key = std::minmax(u, v);
    if (seen.insert({key.first, key.second}).second) edges.push_back({key.first, key.second, w});
  };

  // A random Hamiltonian cycle per part keeps every part connected.
  for (std::size_t part = 0; part < k; ++part) {
    std::vector<Vertex> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = part * m + i;
    shuffle(perm, rng);
    if (m == 2) {
      add(perm[0], perm[1], intra_w);
    } else {
      for (std::size_t i = 0; i < m; ++i) add(perm[i], perm[(i + 1) % m], intra_w);
    }
  }
  // A random perfect matching between consecutive parts gives every vertex
  // at least one crossing edge.
  const std::size_t matchings = k == 2 ? 1 : k;
  for (std::size_t part = 0; part < matchings; ++part) {
    std::vector<Vertex> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = ((part + 1) % k) * m + i;
    shuffle(perm, rng);
    for (std::size_t i = 0; i < m; ++i) add(part * m + i, perm[i], inter_w);
  }
  // Remaining degree spread uniformly at random.
  const double q_in = m > 3 ? std::clamp((static_cast<double>(intra_target) - 2.0) /
                                              static_cast<double>(m - 1), 0.0, 1.0)
                            : 0.0;
  const double inter_pool = static_cast<double>((k - 1) * m);
  const double q_out =
      std::clamp((static_cast<double>(inter_target) - static_cast<double>(matchings == 1 ? 1 : 2)) /
                     inter_pool,
                 0.0, 1.0);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const bool same = u / m == v / m;
      const double draw = uniform01(rng);
      if (draw < (same ? q_in : q_out)) add(u, v, same ? intra_w : inter_w);
    }
  }

  PlantedPartition out{
      WeightedGraph::from_edges(n, normalize_to_unit_degree(n, std::move(edges))), {}};
  for (std::size_t part = 0; part < k; ++part) {
    out.parts.push_back(VertexSet::range(n, part * m, (part + 1) * m));
  }
  return out;
}

}  // namespace cheeger
