#include "cheeger/partitioner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "cheeger/errors.hpp"
#include "pair_scan.hpp"

namespace cheeger {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t ceil_tolerant(double v) {
  return static_cast<std::size_t>(std::ceil(v - 1e-9 * std::max(1.0, std::abs(v))));
}

std::vector<double> sorted_values(std::span<const double> x, std::span<const Vertex> order) {
  std::vector<double> out(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out[i] = x[order[i]];
  return out;
}

RealVector negated(std::span<const double> x) {
  RealVector out(x.begin(), x.end());
  for (double& v : out) v = -v;
  return out;
}

// w([1,a], [b,n]) in positions of `order`, 1-based.
double crossing_weight(const WeightedGraph& g, std::span<const Vertex> order,
                       std::span<const std::size_t> position, std::size_t a, std::size_t b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a; ++i) {
    for (const Neighbor& nb : g.neighbors(order[i])) {
      if (position[nb.to] + 1 >= b) total += nb.weight;
    }
  }
  return total;
}

std::vector<std::size_t> positions_of(std::span<const Vertex> order) {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  return pos;
}

double residual_norm(const WeightedGraph& g, std::span<const double> x, double lambda) {
  RealVector lx = apply_laplacian(g, x);
  for (std::size_t i = 0; i < lx.size(); ++i) lx[i] -= lambda * x[i];
  return norm2(lx);
}

struct SequenceWitness {
  bool found = false;
  std::size_t m = 0;
  std::optional<ExpansionStats> stats;
  bool negated = false;
  double best_value = std::numeric_limits<double>::infinity();
};

}  // namespace

std::string describe_violation(const std::string& what, double lhs, const char* relation,
                               double rhs) {
  char buf[160];
  std::snprintf(buf, sizeof buf, " violated: lhs=%.17g %s rhs=%.17g does not hold", lhs, relation,
                rhs);
  return what + buf;
}

SweepResult sweep_cut(const WeightedGraph& g, std::span<const double> x, std::size_t max_size) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n) throw PreconditionError("vector length does not match vertex count");
  if (n < 2) throw PreconditionError("sweep needs at least 2 vertices");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) throw PreconditionError("sweep of a constant vector");
  const std::size_t cap = max_size ? std::min(max_size, n - 1) : n / 2;

  std::optional<SweepResult> best;
  for (bool neg : {false, true}) {
    RealVector y = neg ? negated(x) : RealVector(x.begin(), x.end());
    auto order = order_by_value(y);
    SweepProfile profile = sweep_profile(g, order, cap);
    const auto it = std::min_element(profile.phi.begin(), profile.phi.end());
    const std::size_t a = static_cast<std::size_t>(it - profile.phi.begin()) + 1;
    if (!best || *it < best->best.phi) {
      ExpansionStats stats = profile.prefix_stats(g, a);
      best = SweepResult{std::move(stats), std::move(profile), neg};
    }
  }
  return std::move(*best);
}

LevelSetResult best_level_set(const WeightedGraph& g, std::span<const double> x, std::size_t cap,
                              bool positive_only) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n) throw PreconditionError("vector length does not match vertex count");
  if (n < 2) throw PreconditionError("level sets need at least 2 vertices");
  const auto order = order_by_value(x);
  std::size_t limit = std::min(cap, n - 1);
  if (positive_only) {
    std::size_t support = 0;
    while (support < n && x[order[support]] > 0.0) ++support;
    limit = std::min(limit, support);
  }
  if (limit == 0) throw PreconditionError("no level set within the size cap");
  const SweepProfile profile = sweep_profile(g, order, limit);
  const auto it = std::min_element(profile.phi.begin(), profile.phi.end());
  const std::size_t a = static_cast<std::size_t>(it - profile.phi.begin()) + 1;
  return {profile.prefix_stats(g, a), a, limit};
}

namespace detail {

CertificateReport drop_pair_scan(const WeightedGraph& g, std::span<const double> x,
                                 std::size_t samples, std::uint64_t seed, Slack slack,
                                 const DropBound& bound, const std::string& label) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n) throw PreconditionError("vector length does not match vertex count");
  CertificateReport report;
  const auto order = order_by_value(x);
  const auto xs = sorted_values(x, order);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n <= 64) {
    for (std::size_t a = 1; a < n; ++a) {
      for (std::size_t b = a + 1; b <= n; ++b) pairs.push_back({a, b});
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
      const std::size_t a = 1 + static_cast<std::size_t>(uniform01(rng) * (n - 1));
      const std::size_t b = a + 1 + static_cast<std::size_t>(uniform01(rng) * (n - a));
      pairs.push_back({a, b});
    }
    std::sort(pairs.begin(), pairs.end());
  }

  // into[v]: weight between the current prefix and v.
  std::vector<double> into(n, 0.0), suffix(n + 2, 0.0);
  std::size_t prefix = 0;
  double prefix_sum = 0.0;
  std::size_t checked = 0, vacuous = 0, violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t p = 0;
  while (p < pairs.size()) {
    const std::size_t a = pairs[p].first;
    while (prefix < a) {
      const Vertex v = order[prefix];
      for (const Neighbor& nb : g.neighbors(v)) into[nb.to] += nb.weight;
      prefix_sum += xs[prefix];
      ++prefix;
    }
    suffix[n + 1] = 0.0;
    for (std::size_t q = n; q > a; --q) suffix[q] = suffix[q + 1] + into[order[q - 1]];
    for (; p < pairs.size() && pairs[p].first == a; ++p) {
      const std::size_t b = pairs[p].second;
      const double w = suffix[b];
      const double lhs = xs[a - 1] - xs[b - 1];
      if (w <= 0.0) {
        ++vacuous;
        continue;
      }
      ++checked;
      const double rhs = bound(lhs, prefix_sum, w);
      const bool ok = slack.leq(lhs, rhs);
      if (!ok) ++violations;
      const double margin = (lhs - rhs) / (1.0 + std::abs(rhs));
      if (margin > worst) {
        worst = margin;
        report.lhs = lhs;
        report.rhs = rhs;
        report.scalars["worst_a"] = static_cast<double>(a);
        report.scalars["worst_b"] = static_cast<double>(b);
        if (!ok) {
          report.counterexample = describe_violation(
              label + " at a=" + std::to_string(a) + ", b=" + std::to_string(b), lhs, "<=",
              rhs);
        }
      }
    }
  }
  report.pass = violations == 0;
  report.scalars["pairs_checked"] = static_cast<double>(checked);
  report.scalars["pairs_vacuous"] = static_cast<double>(vacuous);
  report.scalars["violations"] = static_cast<double>(violations);
  report.scalars["max_relative_margin"] = checked ? worst : 0.0;
  if (report.pass) report.counterexample.clear();
  return report;
}

}  // namespace detail

CertificateReport drop_inequality_scan(const WeightedGraph& g, std::span<const double> x,
                                       double lambda, std::size_t samples, std::uint64_t seed,
                                       Slack slack) {
  auto report = detail::drop_pair_scan(
      g, x, samples, seed, slack,
      [lambda](double, double prefix_sum, double w) { return lambda * prefix_sum / w; },
      "drop inequality");
  report.theorem_id = "drop_lemma";
  report.scalars["lambda"] = lambda;
  return report;
}

CertificateReport drop_lemma_check(const WeightedGraph& g, std::span<const double> x,
                                   double lambda, std::size_t samples, std::uint64_t seed) {
  const double res = residual_norm(g, x, lambda);
  if (res > 1e-8 * norm2(x)) {
    throw PreconditionError("drop lemma check needs an eigenpair; residual " +
                            std::to_string(res));
  }
  auto report = drop_inequality_scan(g, x, lambda, samples, seed);
  report.scalars["eigen_residual"] = res;
  return report;
}

const char* to_string(JumpRule rule) {
  switch (rule) {
    case JumpRule::kVertex: return "vertex_rule";
    case JumpRule::kEdge: return "edge_rule";
    case JumpRule::kPagerankVertex: return "pagerank_vertex";
    case JumpRule::kPagerankEdge: return "pagerank_edge";
  }
  return "unknown";
}

JumpingSequence jumping_sequence(const WeightedGraph& g, std::span<const Vertex> order,
                                 JumpRule rule, std::size_t cap, std::size_t start,
                                 double growth) {
  const std::size_t n = g.num_vertices();
  if (order.size() != n) throw PreconditionError("ordering length differs from vertex count");
  {
    std::vector<char> seen(n, 0);
    for (Vertex v : order) {
      if (v >= n || seen[v]) throw PreconditionError("ordering is not a permutation");
      seen[v] = 1;
    }
  }
  if (cap > n) throw PreconditionError("cap must be at most n");
  if (start < 1) throw PreconditionError("jumping sequence starts at a prefix of size >= 1");
  if (rule == JumpRule::kPagerankVertex && !(growth > 0.0)) {
    throw PreconditionError("pagerank vertex rule needs a positive growth rate");
  }

  JumpingSequence seq;
  seq.order.assign(order.begin(), order.end());
  seq.rule = rule;
  const auto position = positions_of(order);
  std::size_t m = start;
  while (true) {
    seq.indices.push_back(m);
    if (m > cap || m >= n) break;
    ExpansionStats stats = expansion_stats(g, VertexSet::prefix(order, m));
    std::size_t next = m + 1;
    switch (rule) {
      case JumpRule::kVertex: next = m + stats.n_half; break;
      case JumpRule::kEdge: next = m + ceil_tolerant(stats.boundary_weight / 2.0); break;
      case JumpRule::kPagerankVertex:
        next = ceil_tolerant(static_cast<double>(m) * (1.0 + growth));
        break;
      case JumpRule::kPagerankEdge: next = m + ceil_tolerant(stats.boundary_weight); break;
    }
    next = std::max(next, m + 1);
    if (next <= n) {
      const double cross = crossing_weight(g, order, position, m, next);
      seq.crossing.push_back(cross);
      const double half = stats.boundary_weight / 2.0;
      if (cross < half - 1e-12 * (1.0 + half)) {
        ++seq.half_boundary_failures;
        const bool guaranteed =
            (rule == JumpRule::kVertex || rule == JumpRule::kEdge) && 2 * m <= n;
        if (guaranteed) {
          throw InvariantViolation(std::string(to_string(rule)) + " step " + std::to_string(m) +
                                   " -> " + std::to_string(next) +
                                   " lost more than half the boundary");
        }
      }
    }
    seq.stats.push_back(std::move(stats));
    m = next;
  }
  return seq;
}

CertificateReport theorem_product_certificate(const WeightedGraph& g) {
  return theorem_product_certificate(g, second_eigenpair(g));
}

CertificateReport theorem_product_certificate(const WeightedGraph& g, const EigenPair& pair) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw PreconditionError("product certificate needs n >= 2");
  const Slack slack;
  const double lambda = pair.value;
  const double bound = 32.0 * lambda;
  CertificateReport report;
  report.theorem_id = "theorem_product";
  report.scalars["lambda2"] = lambda;
  report.scalars["eigen_residual"] = pair.residual;
  report.scalars["constant"] = 32.0;

  SequenceWitness witness;
  std::size_t jump_checked = 0, jump_violations = 0;
  for (bool neg : {false, true}) {
    RealVector x = neg ? negated(pair.vector) : pair.vector;
    const auto order = order_by_value(x);
    const auto xs = sorted_values(x, order);
    const auto seq = jumping_sequence(g, order, JumpRule::kVertex, n / 2);
    std::vector<double> prefix_sum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix_sum[i + 1] = prefix_sum[i] + xs[i];
    for (std::size_t i = 0; i < seq.stats.size(); ++i) {
      const auto& st = seq.stats[i];
      const std::size_t m = seq.indices[i];
      const double value = std::min(st.psi, st.phi);
      if (!witness.found) {
        if (slack.leq(value, bound)) {
          witness = {true, m, st, neg, value};
        } else if (value < witness.best_value) {
          witness = {false, m, st, neg, value};
        }
      }
      const std::size_t next = seq.indices[i + 1];
      if (next <= n && st.phi > 0.0) {
        ++jump_checked;
        const double lhs = xs[m - 1] - xs[next - 1];
        const double rhs = 2.0 * lambda * (prefix_sum[m] / static_cast<double>(m)) / st.phi;
        if (!slack.leq(lhs, rhs)) {
          ++jump_violations;
          report.notes.push_back(describe_violation(
              std::string("per-step drop bound on ") + (neg ? "-x" : "x") + " at m=" +
                  std::to_string(m),
              lhs, "<=", rhs));
        }
      }
    }
  }
  report.scalars["jump_steps_checked"] = static_cast<double>(jump_checked);
  report.scalars["jump_violations"] = static_cast<double>(jump_violations);

  bool brute_ok = true;
  if (n <= 20 && n >= 2) {
    const double psi_g = graph_expansion_bruteforce(g, ExpansionMode::kPsi).value;
    const double phi_g = graph_expansion_bruteforce(g, ExpansionMode::kPhi).value;
    report.scalars["psi_G"] = psi_g;
    report.scalars["phi_G"] = phi_g;
    brute_ok = slack.geq(lambda, std::min(psi_g, phi_g) / 32.0);
    if (!brute_ok) {
      report.notes.push_back(
          describe_violation("lambda2 >= min(Psi(G), phi(G))/32", lambda, ">=",
                             std::min(psi_g, phi_g) / 32.0));
    }
    report.scalars["psi_only_bound_holds"] = slack.geq(lambda, psi_g / 32.0) ? 1.0 : 0.0;
  }

  report.lhs = witness.best_value;
  report.rhs = bound;
  if (witness.stats) {
    report.witness_prefix = witness.m;
    report.witness = witness.stats;
    report.scalars["witness_on_negated"] = witness.negated ? 1.0 : 0.0;
  }
  report.pass = witness.found && jump_violations == 0 && brute_ok;
  if (!witness.found) {
    report.counterexample = describe_violation(
        "no vertex-rule prefix m_i <= n/2 with min(Psi, phi) <= 32 lambda2", report.lhs, "<=",
        bound);
  } else if (!report.pass) {
    report.counterexample = report.notes.front();
  }
  return report;
}

double gao_claim_lhs(double c, double h, double phi, double lambda) {
  return ((c + h) / (1.0 + h)) * (phi / (phi - 2.0 * lambda * c));
}

CertificateReport gao_claim_check(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CertificateReport report;
  report.theorem_id = "gao_claim";
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double c = 2.0 + 2.0 * uniform01(rng);
    const double h = 1.0 - uniform01(rng);    // (0, 1]
    const double phi = 1.0 - uniform01(rng);  // (0, 1]
    const double lambda = uniform01(rng) * std::min(h * phi, phi) / 32.0;
    const double lhs = gao_claim_lhs(c, h, phi, lambda);
    const double ratio = lhs / c;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      report.lhs = lhs;
      report.rhs = c;
      report.scalars["worst_c"] = c;
      report.scalars["worst_h"] = h;
      report.scalars["worst_phi"] = phi;
      report.scalars["worst_lambda"] = lambda;
    }
    if (lhs > c * (1.0 + 1e-12)) ++violations;
  }
  report.pass = violations == 0;
  report.scalars["samples"] = static_cast<double>(samples);
  report.scalars["violations"] = static_cast<double>(violations);
  report.scalars["max_lhs_over_c"] = worst_ratio;
  if (!report.pass) report.counterexample = describe_violation("claim", report.lhs, "<=", report.rhs);
  return report;
}

CertificateReport lemma_jump_check(const WeightedGraph& g, std::span<const Vertex> order,
                                   double theta, std::size_t k, double phi_k) {
  if (!(phi_k > 0.0)) throw PreconditionError("phi_k must be positive");
  if (!(theta >= 0.0 && theta < phi_k / 4.0)) throw PreconditionError("need 0 <= theta < phi_k/4");
  const std::size_t n = g.num_vertices();
  const auto seq = jumping_sequence(g, order, JumpRule::kEdge, n - 1);
  std::size_t count = 0;
  for (const auto& st : seq.stats) {
    if (st.phi >= theta && st.phi <= 2.0 * theta) ++count;
  }
  CertificateReport report;
  report.theorem_id = "lemma_jump";
  report.lhs = static_cast<double>(count);
  report.rhs = 16.0 * static_cast<double>(k) / phi_k;
  report.pass = report.lhs <= report.rhs;
  report.scalars["theta"] = theta;
  report.scalars["k"] = static_cast<double>(k);
  report.scalars["phi_k"] = phi_k;
  report.scalars["sequence_length"] = static_cast<double>(seq.stats.size());
  if (!report.pass) {
    report.counterexample = describe_violation("terms in [theta, 2 theta]", report.lhs, "<=",
                                               report.rhs);
  }
  return report;
}

CertificateReport theorem_kway_certificate(const WeightedGraph& g, std::size_t k,
                                           std::optional<double> phi_k) {
  return theorem_kway_certificate(g, k, second_eigenpair(g), phi_k);
}

CertificateReport theorem_kway_certificate(const WeightedGraph& g, std::size_t k,
                                           const EigenPair& pair, std::optional<double> phi_k) {
  const std::size_t n = g.num_vertices();
  if (k < 2) throw PreconditionError("k-way certificate needs k >= 2");
  const double pk = phi_k ? *phi_k : k_way_expansion_bruteforce(g, k).value;
  const double lambda = pair.value;
  const Slack slack;
  CertificateReport report;
  report.theorem_id = "theorem_kway";
  report.scalars["k"] = static_cast<double>(k);
  report.scalars["phi_k"] = pk;
  report.scalars["lambda2"] = lambda;
  report.scalars["eigen_residual"] = pair.residual;
  report.scalars["phi_k_supplied"] = phi_k ? 1.0 : 0.0;

  if (pk * pk < 1024.0 * lambda) {
    report.pass = true;
    report.relation = "<";
    report.lhs = pk * pk;
    report.rhs = 1024.0 * lambda;
    report.scalars["trivial_regime"] = 1.0;
    report.notes.push_back("trivial regime: phi_k^2 < 1024 lambda2");
    return report;
  }
  report.scalars["trivial_regime"] = 0.0;
  const double bound = 256.0 * static_cast<double>(k) * lambda / pk;
  SequenceWitness witness;
  for (bool neg : {false, true}) {
    RealVector x = neg ? negated(pair.vector) : pair.vector;
    const auto order = order_by_value(x);
    const auto seq = jumping_sequence(g, order, JumpRule::kEdge, n / 2);
    for (std::size_t i = 0; i < seq.stats.size(); ++i) {
      const auto& st = seq.stats[i];
      if (witness.found) break;
      if (slack.leq(st.phi, bound)) {
        witness = {true, seq.indices[i], st, neg, st.phi};
      } else if (st.phi < witness.best_value) {
        witness = {false, seq.indices[i], st, neg, st.phi};
      }
    }
  }
  report.lhs = witness.best_value;
  report.rhs = bound;
  if (witness.stats) {
    report.witness_prefix = witness.m;
    report.witness = witness.stats;
    report.scalars["witness_on_negated"] = witness.negated ? 1.0 : 0.0;
  }
  report.pass = witness.found;
  if (!report.pass) {
    report.counterexample = describe_violation(
        "no edge-rule prefix m_i <= n/2 with phi <= 256 k lambda2 / phi_k", report.lhs, "<=",
        bound);
  }
  return report;
}

CurrentSweepResult current_sweep(const WeightedGraph& g, Vertex s, std::size_t max_size) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw PreconditionError("current sweep needs n >= 2");
  if (s >= n) throw PreconditionError("source vertex out of range");
  RealVector b(n, -1.0);
  b[s] += static_cast<double>(n);
  RealVector volts = laplacian_solve(g, b);
  const std::size_t cap = max_size ? std::min(max_size, n - 1) : n / 2;
  const auto order = order_by_value(volts);
  const auto profile = sweep_profile(g, order, cap);
  const auto it = std::min_element(profile.phi.begin(), profile.phi.end());
  const std::size_t a = static_cast<std::size_t>(it - profile.phi.begin()) + 1;
  return {profile.prefix_stats(g, a), std::move(volts)};
}

}  // namespace cheeger
