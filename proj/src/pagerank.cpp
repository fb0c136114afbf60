#include "cheeger/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cheeger/errors.hpp"
#include "cheeger/partitioner.hpp"
#include "cheeger/spectral.hpp"
#include "pair_scan.hpp"
#include "parallel.hpp"

namespace cheeger {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw PreconditionError("teleport probability alpha must lie in (0, 1], got " +
                            std::to_string(alpha));
  }
}

void require_seed(const WeightedGraph& g, Vertex s) {
  if (s >= g.num_vertices()) throw PreconditionError("seed vertex out of range");
}

// One step of the pagerank map: alpha chi_s + (1 - alpha) W r.
RealVector pagerank_map(const WeightedGraph& g, Vertex s, double alpha, const RealVector& r) {
  RealVector out = apply_lazy_walk(g, r);
  for (double& v : out) v *= 1.0 - alpha;
  out[s] += alpha;
  return out;
}

// Max-heap over vertices keyed by the live residual q[v], ties to the smaller
// index. Holds each vertex at most once, so its size stays below n however
// many pushes run.
class ResidualHeap {
 public:
  ResidualHeap(const RealVector& q) : q_(q), pos_(q.size(), kAbsent) {}

  bool empty() const { return heap_.empty(); }
  bool contains(Vertex v) const { return pos_[v] != kAbsent; }

  Vertex pop() {
    const Vertex top = heap_.front();
    swap_at(0, heap_.size() - 1);
    heap_.pop_back();
    pos_[top] = kAbsent;
    if (!heap_.empty()) sift_down(0);
    return top;
  }

  // Inserts v, or restores order after q[v] grew.
  void raise(Vertex v) {
    if (pos_[v] == kAbsent) {
      pos_[v] = heap_.size();
      heap_.push_back(v);
    }
    sift_up(pos_[v]);
  }

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

  bool above(Vertex a, Vertex b) const { return q_[a] != q_[b] ? q_[a] > q_[b] : a < b; }

  void swap_at(std::size_t i, std::size_t j) {
    std::swap(heap_[i], heap_[j]);
    pos_[heap_[i]] = i;
    pos_[heap_[j]] = j;
  }

  void sift_up(std::size_t i) {
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!above(heap_[i], heap_[parent])) break;
      swap_at(i, parent);
      i = parent;
    }
  }

  void sift_down(std::size_t i) {
    for (;;) {
      std::size_t best = i;
      for (const std::size_t c : {2 * i + 1, 2 * i + 2}) {
        if (c < heap_.size() && above(heap_[c], heap_[best])) best = c;
      }
      if (best == i) return;
      swap_at(i, best);
      i = best;
    }
  }

  const RealVector& q_;
  std::vector<Vertex> heap_;
  std::vector<std::size_t> pos_;
};

PagerankVector push_loop(const WeightedGraph& g, Vertex s, double alpha, double eps,
                         double degree) {
  require_seed(g, s);
  require_alpha(alpha);
  if (!(eps > 0.0)) throw PreconditionError("push needs eps > 0");
  const std::size_t n = g.num_vertices();
  PagerankVector vec;
  vec.seed = s;
  vec.alpha = alpha;
  vec.kind = PagerankKind::kApproximate;
  vec.epsilon = eps;
  vec.values.assign(n, 0.0);
  vec.residual.assign(n, 0.0);
  vec.residual[s] = 1.0;
  vec.work.degree = degree;
  vec.work.push_budget = 1.0 / (eps * alpha);
  vec.work.touch_budget = degree / (eps * alpha);

  RealVector& q = vec.residual;
  RealVector& r = vec.values;
  ResidualHeap heap(q);
  if (q[s] > eps) heap.raise(s);
  while (!heap.empty()) {
    const Vertex u = heap.pop();
    const double qu = q[u];
    r[u] += alpha * qu;
    const double spread = (1.0 - alpha) * qu / 2.0;
    q[u] = spread;
    for (const Neighbor& nb : g.neighbors(u)) {
      q[nb.to] += spread * nb.weight;
      ++vec.work.edge_touches;
      if (q[nb.to] > eps) heap.raise(nb.to);
    }
    ++vec.work.pushes;
    if (q[u] > eps && !heap.contains(u)) heap.raise(u);
  }
  return vec;
}

double natural_log_size(std::size_t size) { return std::log(static_cast<double>(size)); }

}  // namespace

PagerankVector exact_pagerank(const WeightedGraph& g, Vertex s, double alpha, double tol) {
  require_seed(g, s);
  require_alpha(alpha);
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  PagerankVector vec;
  vec.seed = s;
  vec.alpha = alpha;
  vec.kind = PagerankKind::kExact;
  RealVector r = indicator(g.num_vertices(), s);
  // The map contracts l1 distance by (1 - alpha); allow generous headroom.
  const double needed = alpha >= 1.0 ? 1.0 : std::log(tol) / std::log1p(-alpha);
  const std::size_t cap = static_cast<std::size_t>(4.0 * needed) + 100;
  double update = 0.0;
  for (std::size_t it = 1; it <= cap; ++it) {
    RealVector next = pagerank_map(g, s, alpha, r);
    update = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) update += std::abs(next[i] - r[i]);
    r = std::move(next);
    if (update <= tol) {
      vec.values = std::move(r);
      vec.iterations = it;
      return vec;
    }
  }
  throw ConvergenceError("pagerank fixed-point iteration hit its cap", update);
}

PagerankVector approximate_push(const WeightedGraph& g, Vertex s, double alpha, double eps) {
  const auto d = g.uniform_degree();
  if (!d) throw PreconditionError("approximate_push needs a graph with uniform weights 1/d");
  return push_loop(g, s, alpha, eps, static_cast<double>(*d));
}

PagerankVector approximate_push_weighted(const WeightedGraph& g, Vertex s, double alpha,
                                         double eps) {
  return push_loop(g, s, alpha, eps, static_cast<double>(g.max_neighbor_count()));
}

double pagerank_equation_residual(const WeightedGraph& g, const PagerankVector& vec) {
  RealVector rhs = apply_lazy_walk(g, vec.values);
  for (double& v : rhs) v *= 1.0 - vec.alpha;
  rhs[vec.seed] += vec.alpha;
  if (vec.kind == PagerankKind::kApproximate) {
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] -= vec.alpha * vec.residual[i];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < rhs.size(); ++i) {
    worst = std::max(worst, std::abs(vec.values[i] - rhs[i]));
  }
  return worst;
}

CertificateReport pagerank_drop_check(const WeightedGraph& g, const PagerankVector& vec,
                                      std::size_t samples, std::uint64_t seed, double constant) {
  const double alpha = vec.alpha;
  double max_ratio = 0.0;
  auto report = detail::drop_pair_scan(
      g, vec.values, samples, seed, Slack{},
      [&](double drop, double, double w) {
        max_ratio = std::max(max_ratio, drop * w / alpha);
        return constant * alpha / w;
      },
      "pagerank drop inequality");
  const auto doubled = detail::drop_pair_scan(
      g, vec.values, samples, seed, Slack{},
      [&](double, double, double w) { return 2.0 * alpha / w; }, "pagerank drop inequality");
  report.theorem_id = "pagerank_drop";
  report.scalars["alpha"] = alpha;
  report.scalars["constant"] = constant;
  report.scalars["max_ratio"] = max_ratio;
  report.scalars["violations_at_constant_2"] = doubled.scalars.at("violations");
  report.scalars["approximate"] = vec.kind == PagerankKind::kApproximate ? 1.0 : 0.0;
  if (vec.kind == PagerankKind::kApproximate) report.scalars["epsilon"] = vec.epsilon;
  return report;
}

EscapeAnalysis escape_mass_analysis(const WeightedGraph& g, const VertexSet& s, double alpha) {
  require_alpha(alpha);
  const std::size_t n = g.num_vertices();
  if (s.universe() != n) throw PreconditionError("set universe differs from vertex count");
  if (2 * s.size() > n) throw PreconditionError("escape bound needs |S| <= n/2");
  const double phi = edge_expansion(g, s);
  const double bound = 1.0 - phi / alpha;
  const auto& members = s.members();

  EscapeAnalysis out;
  out.vectors.resize(members.size());
  out.retained.resize(members.size());
  detail::parallel_for(members.size(), [&](std::size_t i) {
    out.vectors[i] = exact_pagerank(g, members[i], alpha);
    double mass = 0.0;
    for (Vertex v : members) mass += out.vectors[i].values[v];
    out.retained[i] = mass;
  });

  const Slack slack;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (slack.geq(out.retained[i], bound)) out.good_seeds.push_back(members[i]);
  }
  std::vector<double> sorted = out.retained;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t need = (members.size() + 1) / 2;
  // The median-ranked seed decides: it must keep enough mass.
  const double worst_good = sorted[need - 1];

  CertificateReport& report = out.report;
  report.theorem_id = "pagerank_escape";
  report.relation = ">=";
  report.lhs = worst_good;
  report.rhs = bound;
  report.pass = out.good_seeds.size() >= need;
  report.scalars["alpha"] = alpha;
  report.scalars["phi_S"] = phi;
  report.scalars["set_size"] = static_cast<double>(members.size());
  report.scalars["good_seeds"] = static_cast<double>(out.good_seeds.size());
  report.scalars["required_good_seeds"] = static_cast<double>(need);
  report.scalars["min_retained"] = sorted.back();
  std::string list = "good seeds:";
  for (Vertex v : out.good_seeds) list += " " + std::to_string(v);
  report.notes.push_back(list);
  if (!report.pass) {
    report.counterexample = describe_violation(
        "retained mass of the ceil(|S|/2)-th best seed", report.lhs, ">=", report.rhs);
  }
  return out;
}

CertificateReport escape_mass_check(const WeightedGraph& g, const VertexSet& s, double alpha) {
  return escape_mass_analysis(g, s, alpha).report;
}

PagerankPartitionResult pagerank_partition(const WeightedGraph& g, Vertex s, double phi_target,
                                           std::size_t size_target, PagerankMode mode,
                                           std::optional<double> eps) {
  if (!(phi_target > 0.0 && phi_target <= 1.0)) {
    throw PreconditionError("phi_target must lie in (0, 1]");
  }
  if (size_target < 2) throw PreconditionError("size_target must be at least 2");
  require_seed(g, s);
  const std::size_t n = g.num_vertices();
  const double alpha = std::min(1.0, 3.0 * phi_target);
  const double t = static_cast<double>(size_target);
  const double factor = mode == PagerankMode::kExact ? 3.0 : 6.0;
  const std::size_t size_cap =
      std::min<std::size_t>(static_cast<std::size_t>(factor * t * std::log(t)), n / 2);
  PagerankVector vec;
  bool weighted = false;
  if (mode == PagerankMode::kExact) {
    vec = exact_pagerank(g, s, alpha);
  } else {
    const double e = eps ? *eps : 1.0 / (6.0 * t);
    weighted = !g.uniform_degree().has_value();
    vec = weighted ? approximate_push_weighted(g, s, alpha, e) : approximate_push(g, s, alpha, e);
  }
  ExpansionStats best = best_level_set(g, vec.values, std::max<std::size_t>(size_cap, 1)).best;
  return {std::move(best), std::move(vec), alpha, size_cap, weighted};
}

namespace {

struct ResolvedValue {
  double value = 0.0;
  std::string source;  // "supplied", "exact" or "lower_bound"
};

ResolvedValue resolve_phi_v(const WeightedGraph& g, const PagerankCertificateOptions& opt) {
  const std::size_t n = g.num_vertices();
  if (opt.phi_v_graph) return {*opt.phi_v_graph, "supplied"};
  if (n <= 20) return {graph_expansion_bruteforce(g, ExpansionMode::kPhiV).value, "exact"};
  if (!opt.allow_lower_bounds) {
    throw PreconditionError("phi^V(G) must be supplied for n > 20 (or allow lower bounds)");
  }
  if (n <= kMaxBruteForceVertices) {
    return {graph_expansion_bruteforce(g, ExpansionMode::kPhi).value / 2.0, "lower_bound"};
  }
  return {second_eigenpair(g).value / 4.0, "lower_bound"};
}

bool k_way_feasible(std::size_t n, std::size_t k) {
  return (k <= 3 && n <= 14) || (k == 4 && n <= 12);
}

ResolvedValue resolve_phi_k(const WeightedGraph& g, std::size_t k,
                            const PagerankCertificateOptions& opt) {
  const std::size_t n = g.num_vertices();
  if (opt.phi_k) return {*opt.phi_k, "supplied"};
  if (k_way_feasible(n, k)) return {k_way_expansion_bruteforce(g, k).value, "exact"};
  if (!opt.allow_lower_bounds) {
    throw PreconditionError("phi_k must be supplied when exhaustive search is infeasible");
  }
  // Of two disjoint sets one has at most n/2 vertices, so phi_2 >= phi(G).
  if (k == 2 && n <= kMaxBruteForceVertices) {
    return {graph_expansion_bruteforce(g, ExpansionMode::kPhi).value, "lower_bound"};
  }
  return {eigenpairs(g, k).back().value / 2.0, "lower_bound"};
}

double source_code(const std::string& source) {
  if (source == "exact") return 0.0;
  if (source == "supplied") return 1.0;
  return 2.0;
}

struct SeedOutcome {
  Vertex seed = 0;
  std::size_t start = 0;
  bool mass_ok = false;
  double mass_value = 0.0;  // start * x_start * ln|S| * 3/2, >= 1 when the fact holds
  bool vertex_ok = false;
  std::size_t vertex_m = 0;
  std::optional<ExpansionStats> vertex_stats;
  double vertex_best = std::numeric_limits<double>::infinity();
  bool kway_ok = false;
  std::size_t kway_m = 0;
  std::optional<ExpansionStats> kway_stats;
  double kway_best = std::numeric_limits<double>::infinity();
  std::size_t kway_half_failures = 0;
};

void scan_sequence(const JumpingSequence& seq, std::size_t cap, double bound, bool& ok,
                   std::size_t& m_out, std::optional<ExpansionStats>& stats_out, double& best) {
  const Slack slack;
  for (std::size_t i = 0; i < seq.stats.size(); ++i) {
    const std::size_t m = seq.indices[i];
    if (m > cap) break;
    const double phi = seq.stats[i].phi;
    if (!ok && (slack.leq(phi, bound) || phi < best)) {
      ok = slack.leq(phi, bound);
      m_out = m;
      stats_out = seq.stats[i];
      best = phi;
    }
  }
}

}  // namespace

std::vector<CertificateReport> pagerank_certificates(const WeightedGraph& g, const VertexSet& s,
                                                     std::size_t k,
                                                     const PagerankCertificateOptions& options) {
  const std::size_t n = g.num_vertices();
  if (s.universe() != n) throw PreconditionError("set universe differs from vertex count");
  if (s.size() < 2) throw PreconditionError("pagerank certificates need |S| >= 2");
  if (k < 2) throw PreconditionError("k-way certificate needs k >= 2");
  const double size = static_cast<double>(s.size());
  const double log_size = natural_log_size(s.size());
  const double cap_real = 3.0 * size * log_size;
  if (options.enforce_size_precondition && cap_real > static_cast<double>(n)) {
    throw PreconditionError("pagerank certificates need 3 |S| ln |S| <= n");
  }
  if (2 * s.size() > n) throw PreconditionError("pagerank certificates need |S| <= n/2");
  const std::size_t cap = std::min<std::size_t>(static_cast<std::size_t>(cap_real), n);

  const double phi_s = edge_expansion(g, s);
  const double alpha = std::min(1.0, 3.0 * phi_s);
  if (!(alpha > 0.0)) throw PreconditionError("S has no boundary; phi(S) = 0");
  const ResolvedValue phi_v = resolve_phi_v(g, options);
  const ResolvedValue phi_k = resolve_phi_k(g, k, options);
  const double vertex_bound = 36.0 * phi_s * log_size / phi_v.value;
  const double kway_bound =
      1152.0 * static_cast<double>(k) * phi_s * log_size / phi_k.value;

  EscapeAnalysis escape = escape_mass_analysis(g, s, alpha);
  const auto& members = s.members();
  std::vector<std::size_t> good_index;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (std::binary_search(escape.good_seeds.begin(), escape.good_seeds.end(), members[i])) {
      good_index.push_back(i);
    }
  }

  std::vector<SeedOutcome> outcomes(good_index.size());
  detail::parallel_for(good_index.size(), [&](std::size_t j) {
    const PagerankVector& vec = escape.vectors[good_index[j]];
    SeedOutcome& out = outcomes[j];
    out.seed = vec.seed;
    const auto order = order_by_value(vec.values);
    // Initial mass: some a <= |S| with x_a >= 2 / (3 a ln|S|). Otherwise start
    // the sequences where a x_a is largest.
    double best_product = -1.0;
    for (std::size_t a = 1; a <= s.size(); ++a) {
      const double product = static_cast<double>(a) * vec.values[order[a - 1]];
      const double scaled = product * 1.5 * log_size;
      if (!out.mass_ok && Slack{}.geq(scaled, 1.0)) {
        out.mass_ok = true;
        out.start = a;
        out.mass_value = scaled;
      }
      if (!out.mass_ok && product > best_product) {
        best_product = product;
        out.start = a;
        out.mass_value = scaled;
      }
    }
    const auto vseq =
        jumping_sequence(g, order, JumpRule::kPagerankVertex, cap, out.start, phi_v.value);
    scan_sequence(vseq, cap, vertex_bound, out.vertex_ok, out.vertex_m, out.vertex_stats,
                  out.vertex_best);
    const auto kseq = jumping_sequence(g, order, JumpRule::kPagerankEdge, cap, out.start);
    scan_sequence(kseq, cap, kway_bound, out.kway_ok, out.kway_m, out.kway_stats, out.kway_best);
    out.kway_half_failures = kseq.half_boundary_failures;
  });

  CertificateReport mass;
  mass.theorem_id = "pagerank_initial_mass";
  mass.relation = ">=";
  mass.rhs = 1.0;
  mass.pass = true;
  mass.lhs = std::numeric_limits<double>::infinity();
  mass.notes.push_back("lhs is min over good seeds of max_a (3/2) a x_a ln|S|");
  for (const auto& o : outcomes) {
    mass.lhs = std::min(mass.lhs, o.mass_value);
    if (!o.mass_ok) {
      mass.pass = false;
      mass.notes.push_back("seed " + std::to_string(o.seed) +
                           " has no a <= |S| with x_a >= 2/(3 a ln|S|)");
    }
  }
  mass.scalars["good_seeds"] = static_cast<double>(outcomes.size());
  if (!mass.pass) {
    mass.counterexample = describe_violation("initial mass", mass.lhs, ">=", mass.rhs);
  }

  auto certificate = [&](const char* id, double bound, const ResolvedValue& denom,
                         const char* denom_name, double constant, bool SeedOutcome::*ok,
                         std::size_t SeedOutcome::*m,
                         std::optional<ExpansionStats> SeedOutcome::*stats,
                         double SeedOutcome::*best) {
    CertificateReport rep;
    rep.theorem_id = id;
    rep.rhs = bound;
    rep.lhs = -std::numeric_limits<double>::infinity();
    rep.pass = !outcomes.empty() && escape.report.pass;
    rep.scalars["constant"] = constant;
    rep.scalars["phi_S"] = phi_s;
    rep.scalars["alpha"] = alpha;
    rep.scalars["ln_set_size"] = log_size;
    rep.scalars["size_cap"] = static_cast<double>(cap);
    rep.scalars[denom_name] = denom.value;
    rep.scalars[std::string(denom_name) + "_source"] = source_code(denom.source);
    rep.notes.push_back(std::string(denom_name) + " source: " + denom.source +
                        " (0 exact, 1 supplied, 2 lower bound)");
    // Report the hardest seed: the one whose best prefix is largest.
    for (const auto& o : outcomes) {
      if (!(o.*ok)) rep.pass = false;
      if (o.*best > rep.lhs) {
        rep.lhs = o.*best;
        rep.witness_prefix = o.*m;
        rep.witness = o.*stats;
        rep.scalars["hardest_seed"] = static_cast<double>(o.seed);
      }
      if (!(o.*ok)) {
        rep.notes.push_back(describe_violation(
            "seed " + std::to_string(o.seed) + " best prefix within the cap", o.*best, "<=",
            bound));
      }
    }
    if (!rep.pass) {
      rep.counterexample = outcomes.empty() ? "no good seeds" : rep.notes.back();
    }
    return rep;
  };

  auto vertex = certificate("pagerank_vertex_certificate", vertex_bound, phi_v, "phi_v_G", 36.0,
                            &SeedOutcome::vertex_ok, &SeedOutcome::vertex_m,
                            &SeedOutcome::vertex_stats, &SeedOutcome::vertex_best);
  auto kway = certificate("pagerank_kway_certificate", kway_bound, phi_k, "phi_k", 1152.0,
                          &SeedOutcome::kway_ok, &SeedOutcome::kway_m, &SeedOutcome::kway_stats,
                          &SeedOutcome::kway_best);
  kway.scalars["k"] = static_cast<double>(k);
  std::size_t half_failures = 0;
  for (const auto& o : outcomes) half_failures += o.kway_half_failures;
  kway.scalars["half_boundary_failures"] = static_cast<double>(half_failures);

  return {std::move(escape.report), std::move(mass), std::move(vertex), std::move(kway)};
}

}  // namespace cheeger
