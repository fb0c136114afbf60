#include "cheeger/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cheeger/errors.hpp"

namespace cheeger {

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::span<const Edge> edges) {
  return build(n, edges, true);
}

WeightedGraph WeightedGraph::from_edges_unchecked(std::size_t n, std::span<const Edge> edges) {
  return build(n, edges, false);
}

WeightedGraph WeightedGraph::build(std::size_t n, std::span<const Edge> edges, bool check_degree) {
  if (n == 0) throw GraphValidationError("graph has no vertices");
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      std::ostringstream os;
      os << "edge (" << e.u << ", " << e.v << ") references a vertex outside [0, " << n << ")";
      throw GraphValidationError(os.str());
    }
    if (e.u == e.v) {
      throw GraphValidationError("self-loop at vertex " + std::to_string(e.u));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      std::ostringstream os;
      os << "edge (" << e.u << ", " << e.v << ") has nonpositive or non-finite weight " << e.weight;
      throw GraphValidationError(os.str());
    }
    canon.push_back(e.u < e.v ? e : Edge{e.v, e.u, e.weight});
  }
  std::sort(canon.begin(), canon.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < canon.size(); ++i) {
    if (canon[i].u == canon[i - 1].u && canon[i].v == canon[i - 1].v) {
      std::ostringstream os;
      os << "duplicate edge (" << canon[i].u << ", " << canon[i].v << ")";
      throw GraphValidationError(os.str());
    }
  }

  std::vector<std::size_t> counts(n + 1, 0);
  for (const Edge& e : canon) {
    ++counts[e.u + 1];
    ++counts[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) counts[i + 1] += counts[i];

  std::vector<Neighbor> adjacency(counts[n]);
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  for (const Edge& e : canon) {
    adjacency[cursor[e.u]++] = {e.v, e.weight};
    adjacency[cursor[e.v]++] = {e.u, e.weight};
  }
  std::vector<double> degree(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adjacency.begin() + static_cast<std::ptrdiff_t>(counts[v]),
              adjacency.begin() + static_cast<std::ptrdiff_t>(counts[v + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.to < b.to; });
    double sum = 0.0;
    for (std::size_t k = counts[v]; k < counts[v + 1]; ++k) sum += adjacency[k].weight;
    degree[v] = sum;
  }

  WeightedGraph g;
  g.offsets_ = std::move(counts);
  g.adjacency_ = std::move(adjacency);
  g.degree_ = std::move(degree);

  const std::size_t d = g.neighbor_count(0);
  bool uniform = d > 0;
  for (Vertex v = 0; uniform && v < n; ++v) uniform = g.neighbor_count(v) == d;
  const double expected = 1.0 / static_cast<double>(d == 0 ? 1 : d);
  for (std::size_t k = 0; uniform && k < g.adjacency_.size(); ++k) {
    uniform = std::abs(g.adjacency_[k].weight - expected) <= 1e-12;
  }
  if (uniform) g.uniform_degree_ = d;
  if (check_degree) g.check_unit_degree();
  return g;
}

std::size_t WeightedGraph::max_neighbor_count() const {
  std::size_t best = 0;
  for (std::size_t v = 0; v < num_vertices(); ++v) best = std::max(best, neighbor_count(v));
  return best;
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < num_vertices(); ++u) {
    for (const Neighbor& nb : neighbors(u)) {
      if (u < nb.to) out.push_back({u, nb.to, nb.weight});
    }
  }
  return out;
}

double WeightedGraph::weight(Vertex u, Vertex v) const {
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const Neighbor& a, Vertex x) { return a.to < x; });
  return (it != nbrs.end() && it->to == v) ? it->weight : 0.0;
}

void WeightedGraph::check_unit_degree(double tolerance) const {
  for (Vertex v = 0; v < num_vertices(); ++v) {
    if (std::abs(degree_[v] - 1.0) > tolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "vertex " << v << " has weighted degree " << degree_[v] << ", expected 1";
      throw GraphValidationError(os.str());
    }
  }
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.offsets_ != b.offsets_ || a.adjacency_.size() != b.adjacency_.size()) return false;
  for (std::size_t k = 0; k < a.adjacency_.size(); ++k) {
    if (a.adjacency_[k].to != b.adjacency_[k].to ||
        a.adjacency_[k].weight != b.adjacency_[k].weight) {
      return false;
    }
  }
  return true;
}

VertexSet::VertexSet(std::size_t universe, std::vector<Vertex> members)
    : universe_(universe), members_(std::move(members)) {
  if (members_.empty()) throw PreconditionError("vertex set must be nonempty");
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw PreconditionError("vertex set has duplicate members");
  }
  if (members_.back() >= universe_) {
    throw PreconditionError("vertex " + std::to_string(members_.back()) + " outside universe of " +
                            std::to_string(universe_));
  }
}

VertexSet VertexSet::from_mask(std::span<const char> mask) {
  std::vector<Vertex> members;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v]) members.push_back(v);
  }
  return VertexSet(mask.size(), std::move(members));
}

VertexSet VertexSet::prefix(std::span<const Vertex> order, std::size_t size) {
  if (size > order.size()) throw PreconditionError("prefix longer than ordering");
  return VertexSet(order.size(), std::vector<Vertex>(order.begin(), order.begin() + size));
}

VertexSet VertexSet::range(std::size_t universe, Vertex first, Vertex last_exclusive) {
  std::vector<Vertex> members;
  for (Vertex v = first; v < last_exclusive; ++v) members.push_back(v);
  return VertexSet(universe, std::move(members));
}

bool VertexSet::contains(Vertex v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

std::vector<char> VertexSet::mask() const {
  std::vector<char> m(universe_, 0);
  for (Vertex v : members_) m[v] = 1;
  return m;
}

VertexSet VertexSet::complement() const {
  std::vector<Vertex> rest;
  auto m = mask();
  for (Vertex v = 0; v < universe_; ++v) {
    if (!m[v]) rest.push_back(v);
  }
  return VertexSet(universe_, std::move(rest));
}

RealVector indicator(std::size_t n, Vertex s) {
  RealVector x(n, 0.0);
  x.at(s) = 1.0;
  return x;
}

RealVector indicator(const VertexSet& set) {
  RealVector x(set.universe(), 0.0);
  for (Vertex v : set) x[v] = 1.0;
  return x;
}

}  // namespace cheeger
