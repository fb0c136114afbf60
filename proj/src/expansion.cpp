#include "cheeger/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "cheeger/errors.hpp"

namespace cheeger {

namespace {

void require_proper(const WeightedGraph& g, const VertexSet& s) {
  if (s.universe() != g.num_vertices()) {
    throw PreconditionError("vertex set universe does not match the graph");
  }
  if (s.is_full()) throw PreconditionError("set must be a proper subset of the vertices");
}

// Half-coverage comparisons tolerate accumulated rounding in the partial sums.
bool covers(double covered, double target) {
  return covered >= target - 1e-12 * std::max(1.0, target);
}

std::size_t n_half_from_contributions(std::vector<std::pair<double, Vertex>>& contrib,
                                      double boundary, double rho) {
  std::sort(contrib.begin(), contrib.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  const double target = rho * boundary;
  if (target <= 0.0) return 0;
  double covered = 0.0;
  for (std::size_t i = 0; i < contrib.size(); ++i) {
    covered += contrib[i].first;
    if (covers(covered, target)) return i + 1;
  }
  return contrib.size();
}

bool lex_less(std::span<const Vertex> a, std::span<const Vertex> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Vertex> members_of(std::uint64_t mask) {
  std::vector<Vertex> out;
  while (mask) {
    out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// Tracks the best value with exact recomputation on near-ties so that the
// incremental Gray-code arithmetic never decides a witness by rounding noise.
class BestSet {
 public:
  explicit BestSet(double tie_tolerance) : tie_(tie_tolerance) {}

  bool worth_checking(double approx) const { return approx <= value_ + 1e-9; }

  void offer(double exact, std::vector<Vertex> members) {
    if (!found_ || exact < value_ - tie_ ||
        (exact <= value_ + tie_ && lex_less(members, witness_))) {
      if (!found_ || exact < value_ - tie_) value_ = exact;
      else value_ = std::min(value_, exact);
      witness_ = std::move(members);
      found_ = true;
    }
  }

  bool found() const { return found_; }
  double value() const { return value_; }
  const std::vector<Vertex>& witness() const { return witness_; }

 private:
  double tie_;
  bool found_ = false;
  double value_ = std::numeric_limits<double>::infinity();
  std::vector<Vertex> witness_;
};

}  // namespace

double boundary_weight(const WeightedGraph& g, const VertexSet& s) {
  require_proper(g, s);
  auto mask = s.mask();
  double total = 0.0;
  for (Vertex u : s) {
    for (const Neighbor& nb : g.neighbors(u)) {
      if (!mask[nb.to]) total += nb.weight;
    }
  }
  return total;
}

double edge_expansion(const WeightedGraph& g, const VertexSet& s) {
  return boundary_weight(g, s) / static_cast<double>(s.size());
}

RobustVertexExpansion robust_vertex_expansion(const WeightedGraph& g, const VertexSet& s,
                                              double rho) {
  require_proper(g, s);
  if (!(rho > 0.0 && rho < 1.0)) throw PreconditionError("rho must lie in (0, 1)");
  auto mask = s.mask();
  std::vector<double> into(g.num_vertices(), 0.0);
  double boundary = 0.0;
  for (Vertex u : s) {
    for (const Neighbor& nb : g.neighbors(u)) {
      if (!mask[nb.to]) {
        into[nb.to] += nb.weight;
        boundary += nb.weight;
      }
    }
  }
  std::vector<std::pair<double, Vertex>> contrib;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    if (!mask[v] && into[v] > 0.0) contrib.push_back({into[v], v});
  }
  const std::size_t n_half = n_half_from_contributions(contrib, boundary, rho);
  return {n_half, static_cast<double>(n_half) / static_cast<double>(s.size())};
}

ExpansionStats expansion_stats(const WeightedGraph& g, const VertexSet& s, double rho) {
  const double boundary = boundary_weight(g, s);
  const auto rve = robust_vertex_expansion(g, s, rho);
  const double phi = boundary / static_cast<double>(s.size());
  return {s, boundary, phi, rve.n_half, rve.phi_v, phi * rve.phi_v};
}

ExtremalSet graph_expansion_bruteforce(const WeightedGraph& g, ExpansionMode mode) {
  return graph_expansion_bruteforce(g, mode, g.num_vertices() / 2);
}

ExtremalSet graph_expansion_bruteforce(const WeightedGraph& g, ExpansionMode mode,
                                       std::size_t max_size) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxBruteForceVertices) {
    throw InstanceTooLarge("exhaustive expansion search supports at most 24 vertices, got " +
                           std::to_string(n));
  }
  const std::size_t cap = std::min(max_size, n / 2);
  if (cap == 0) throw PreconditionError("no eligible set: size cap is zero");

  std::vector<double> into(n, 0.0);  // w(v, S) for every v
  std::vector<char> in(n, 0);
  double boundary = 0.0;
  std::size_t size = 0;
  std::uint64_t mask = 0;
  BestSet best(1e-12);
  std::vector<std::pair<double, Vertex>> contrib;
  contrib.reserve(n);

  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto v = static_cast<Vertex>(std::countr_zero(step));
    const double sign = in[v] ? -1.0 : 1.0;
    boundary += sign * (g.degree(v) - 2.0 * into[v]);
    for (const Neighbor& nb : g.neighbors(v)) into[nb.to] += sign * nb.weight;
    in[v] = !in[v];
    mask ^= std::uint64_t{1} << v;
    size = in[v] ? size + 1 : size - 1;
    if (size == 0 || size > cap) continue;

    const double phi = std::max(boundary, 0.0) / static_cast<double>(size);
    double approx = phi;
    if (mode != ExpansionMode::kPhi) {
      if (mode == ExpansionMode::kPsi && !best.worth_checking(phi * phi / 2.0)) continue;
      contrib.clear();
      for (Vertex u = 0; u < n; ++u) {
        if (!in[u] && into[u] > 1e-300) contrib.push_back({into[u], u});
      }
      const double phi_v = static_cast<double>(n_half_from_contributions(
                               contrib, std::max(boundary, 0.0), 0.5)) /
                           static_cast<double>(size);
      approx = mode == ExpansionMode::kPhiV ? phi_v : phi * phi_v;
    }
    if (!best.worth_checking(approx)) continue;
    VertexSet s(n, members_of(mask));
    const auto stats = expansion_stats(g, s);
    const double exact = mode == ExpansionMode::kPhi    ? stats.phi
                         : mode == ExpansionMode::kPhiV ? stats.phi_v
                                                        : stats.psi;
    best.offer(exact, s.members());
  }
  return {best.value(), VertexSet(n, best.witness())};
}

ExtremalSet small_set_expansion_bruteforce(const WeightedGraph& g, double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw PreconditionError("delta must lie in (0, 1/2]");
  const auto cap =
      static_cast<std::size_t>(std::floor(delta * static_cast<double>(g.num_vertices()) + 1e-12));
  if (cap < 1) throw PreconditionError("delta * n < 1: no eligible set");
  return graph_expansion_bruteforce(g, ExpansionMode::kPhi, cap);
}

KWayExpansion k_way_expansion_bruteforce(const WeightedGraph& g, std::size_t k) {
  const std::size_t n = g.num_vertices();
  if (k < 2) throw PreconditionError("k-way expansion needs k >= 2");
  if (k > 4) throw InstanceTooLarge("exhaustive k-way expansion supports k <= 4");
  if ((k <= 3 && n > 14) || (k == 4 && n > 12)) {
    throw InstanceTooLarge("exhaustive k-way expansion needs n <= 14 (k <= 3) or n <= 12 (k = 4)");
  }
  if (n < k) throw PreconditionError("fewer vertices than parts");

  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  const std::size_t count = std::size_t{1} << n;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // phi of every subset, each computed directly from its members.
  std::vector<double> phi(count, kInf);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    double boundary = 0.0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      const auto u = static_cast<Vertex>(std::countr_zero(rest));
      for (const Neighbor& nb : g.neighbors(u)) {
        if (!((mask >> nb.to) & 1u)) boundary += nb.weight;
      }
    }
    phi[mask] = boundary / static_cast<double>(std::popcount(mask));
  }

  // level[j][mask]: best max-phi over j+1 disjoint nonempty subsets of mask.
  std::vector<std::vector<double>> level(k, std::vector<double>(count, kInf));
  std::vector<std::vector<std::uint32_t>> choice(k, std::vector<std::uint32_t>(count, 0));
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    level[0][mask] = phi[mask];
    choice[0][mask] = mask;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
      const std::uint32_t sub = mask & ~(rest & (~rest + 1));
      if (sub && level[0][sub] < level[0][mask]) {
        level[0][mask] = level[0][sub];
        choice[0][mask] = choice[0][sub];
      }
    }
  }
  for (std::size_t j = 1; j < k; ++j) {
    const bool last = j + 1 == k;
    for (std::uint32_t mask = last ? full : 1; mask < count; ++mask) {
      double best = kInf;
      std::uint32_t arg = 0;
      for (std::uint32_t s = mask; s; s = (s - 1) & mask) {
        const std::uint32_t rest = mask & ~s;
        if (!rest) continue;
        const double value = std::max(phi[s], level[j - 1][rest]);
        if (value < best) {
          best = value;
          arg = s;
        }
      }
      level[j][mask] = best;
      choice[j][mask] = arg;
    }
  }

  KWayExpansion out{level[k - 1][full], {}};
  std::uint32_t mask = full;
  for (std::size_t j = k; j-- > 0;) {
    const std::uint32_t s = choice[j][mask];
    out.witnesses.emplace_back(n, members_of(s));
    if (j == 0) break;
    mask &= ~s;
  }
  return out;
}

ExtremalSet min_subset_expansion_bruteforce(const WeightedGraph& g, const VertexSet& s) {
  require_proper(g, s);
  const std::size_t m = s.size();
  if (m > 20) throw InstanceTooLarge("subset search supports |S| <= 20");
  const auto& members = s.members();
  std::vector<double> into(g.num_vertices(), 0.0);
  std::vector<char> in(g.num_vertices(), 0);
  double boundary = 0.0;
  std::size_t size = 0;
  std::uint64_t local = 0;
  BestSet best(1e-12);
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << m); ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step));
    const Vertex v = members[bit];
    const double sign = in[v] ? -1.0 : 1.0;
    boundary += sign * (g.degree(v) - 2.0 * into[v]);
    for (const Neighbor& nb : g.neighbors(v)) into[nb.to] += sign * nb.weight;
    in[v] = !in[v];
    local ^= std::uint64_t{1} << bit;
    size = in[v] ? size + 1 : size - 1;
    if (size == 0) continue;
    const double approx = boundary / static_cast<double>(size);
    if (!best.worth_checking(approx)) continue;
    std::vector<Vertex> t;
    for (std::uint64_t rest = local; rest; rest &= rest - 1) {
      t.push_back(members[static_cast<std::size_t>(std::countr_zero(rest))]);
    }
    VertexSet subset(g.num_vertices(), t);
    best.offer(edge_expansion(g, subset), subset.members());
  }
  return {best.value(), VertexSet(g.num_vertices(), best.witness())};
}

ExpansionStats SweepProfile::prefix_stats(const WeightedGraph& g, std::size_t a) const {
  return expansion_stats(g, prefix_set(a));
}

SweepProfile sweep_profile(const WeightedGraph& g, std::span<const Vertex> order,
                           std::size_t max_prefix, bool with_vertex_expansion) {
  const std::size_t n = g.num_vertices();
  if (order.size() != n) throw PreconditionError("ordering length differs from vertex count");
  std::vector<char> in(n, 0);
  for (Vertex v : order) {
    if (v >= n || in[v]) throw PreconditionError("ordering is not a permutation");
    in[v] = 1;
  }
  if (max_prefix > n - 1) throw PreconditionError("max_prefix must be at most n - 1");

  SweepProfile profile;
  profile.order.assign(order.begin(), order.end());
  profile.boundary.reserve(max_prefix);
  profile.phi.reserve(max_prefix);
  std::fill(in.begin(), in.end(), 0);
  double boundary = 0.0;
  for (std::size_t a = 1; a <= max_prefix; ++a) {
    const Vertex v = order[a - 1];
    double inside = 0.0;
    for (const Neighbor& nb : g.neighbors(v)) {
      if (in[nb.to]) inside += nb.weight;
    }
    boundary += g.degree(v) - 2.0 * inside;
    in[v] = 1;
    profile.boundary.push_back(boundary);
    profile.phi.push_back(boundary / static_cast<double>(a));
  }
  if (with_vertex_expansion) {
    for (std::size_t a = 1; a <= max_prefix; ++a) {
      profile.n_half.push_back(robust_vertex_expansion(g, profile.prefix_set(a)).n_half);
    }
  }
  return profile;
}

std::vector<Vertex> order_by_value(std::span<const double> values) {
  std::vector<Vertex> order(values.size());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return values[a] > values[b]; });
  return order;
}

}  // namespace cheeger
