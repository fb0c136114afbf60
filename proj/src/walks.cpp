#include "cheeger/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cheeger/errors.hpp"
#include "cheeger/partitioner.hpp"
#include "cheeger/spectral.hpp"
#include "parallel.hpp"

namespace cheeger {

namespace {

void require_seed(const WeightedGraph& g, Vertex s) {
  if (s >= g.num_vertices()) throw PreconditionError("seed vertex out of range");
}

double l1_norm(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += std::abs(v);
  return total;
}

double squared_norm(std::span<const double> x) { return dot(x, x); }

void require_local_set(const WeightedGraph& g, const VertexSet& s, double phi) {
  if (s.universe() != g.num_vertices()) {
    throw PreconditionError("set universe differs from vertex count");
  }
  if (s.size() < 2) throw PreconditionError("walk checks need |S| >= 2");
  if (!(phi < 2.0 / 3.0)) throw PreconditionError("walk checks need phi(S) < 2/3");
}

// Runs one exact walk per member of S, in parallel.
std::vector<WalkVector> walks_from(const WeightedGraph& g, const VertexSet& s, std::size_t t) {
  const auto& members = s.members();
  std::vector<WalkVector> out(members.size());
  detail::parallel_for(members.size(),
                       [&](std::size_t i) { out[i] = exact_walk(g, members[i], t); });
  return out;
}

WalkVector truncated_loop(const WeightedGraph& g, Vertex s, std::size_t t, double alpha,
                          double degree) {
  require_seed(g, s);
  if (t < 1) throw PreconditionError("truncated walk needs t >= 1");
  if (!(alpha > 0.0)) throw PreconditionError("truncated walk needs alpha > 0");
  if (alpha >= static_cast<double>(t)) {
    throw PreconditionError("truncation threshold alpha/t >= 1 leaves nothing");
  }
  const std::size_t n = g.num_vertices();
  WalkVector vec;
  vec.seed = s;
  vec.steps = t;
  vec.kind = WalkKind::kTruncated;
  vec.alpha = alpha;
  vec.threshold = alpha / static_cast<double>(t);
  vec.work.degree = degree;
  vec.work.budget = degree * static_cast<double>(t) * static_cast<double>(t) / alpha;

  RealVector p(n, 0.0), q(n, 0.0);
  std::vector<char> marked(n, 0);
  std::vector<Vertex> support{s}, touched;
  p[s] = 1.0;
  for (std::size_t round = 0; round < t; ++round) {
    touched.clear();
    std::size_t touches = 0;
    auto touch = [&](Vertex v) {
      if (!marked[v]) {
        marked[v] = 1;
        touched.push_back(v);
      }
    };
    for (Vertex v : support) {
      touch(v);
      q[v] += p[v] / 2.0;
      for (const Neighbor& nb : g.neighbors(v)) {
        touch(nb.to);
        q[nb.to] += p[v] * nb.weight / 2.0;
      }
      touches += g.neighbor_count(v);
    }
    for (Vertex v : support) p[v] = 0.0;
    support.clear();
    std::sort(touched.begin(), touched.end());
    for (Vertex v : touched) {
      marked[v] = 0;
      if (q[v] >= vec.threshold) {
        p[v] = q[v];
        support.push_back(v);
      }
      q[v] = 0.0;
    }
    vec.work.touches_per_round.push_back(touches);
    vec.work.edge_touches += touches;
  }
  vec.values = std::move(p);
  return vec;
}

}  // namespace

WalkVector exact_walk(const WeightedGraph& g, Vertex s, std::size_t t) {
  require_seed(g, s);
  WalkVector vec;
  vec.seed = s;
  vec.steps = t;
  vec.kind = WalkKind::kExact;
  vec.values = indicator(g.num_vertices(), s);
  for (std::size_t i = 0; i < t; ++i) vec.values = apply_lazy_walk(g, vec.values);
  return vec;
}

CertificateReport rayleigh_bound_check(const WeightedGraph& g, const WalkVector& vec) {
  if (vec.kind != WalkKind::kExact) throw PreconditionError("Rayleigh bound needs an exact walk");
  if (vec.steps < 1) throw PreconditionError("Rayleigh bound needs t >= 1");
  const double norm = norm2(vec.values);
  CertificateReport report;
  report.theorem_id = "walk_rayleigh_bound";
  report.lhs = rayleigh_quotient(g, vec.values);
  report.rhs = 2.0 - 2.0 * std::pow(norm, 1.0 / static_cast<double>(vec.steps));
  report.pass = report.lhs <= report.rhs + 1e-9;
  report.scalars["t"] = static_cast<double>(vec.steps);
  report.scalars["l2_norm"] = norm;
  if (!report.pass) {
    report.counterexample = describe_violation("R(p) <= 2 - 2 ||p||^(1/t)", report.lhs, "<=",
                                               report.rhs);
  }
  return report;
}

namespace {

// Shared by the staying-probability and sparsity checks: per seed value,
// per seed bound, at least half must pass.
CertificateReport half_seed_report(const std::string& id, const VertexSet& s,
                                   const std::vector<double>& lhs,
                                   const std::vector<double>& rhs, const char* relation) {
  const Slack slack;
  const bool geq = std::string(relation) == ">=";
  CertificateReport report;
  report.theorem_id = id;
  report.relation = relation;
  std::size_t good = 0;
  std::string list = "good seeds:";
  // Track the seed with the smallest margin as the reported pair.
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const bool ok = geq ? slack.geq(lhs[i], rhs[i]) : slack.leq(lhs[i], rhs[i]);
    if (ok) {
      ++good;
      list += " " + std::to_string(s.members()[i]);
    }
    const double margin = geq ? lhs[i] - rhs[i] : rhs[i] - lhs[i];
    if (margin < worst_margin) {
      worst_margin = margin;
      report.lhs = lhs[i];
      report.rhs = rhs[i];
      report.scalars["worst_seed"] = static_cast<double>(s.members()[i]);
    }
  }
  const std::size_t need = (s.size() + 1) / 2;
  report.pass = good >= need;
  report.scalars["good_seeds"] = static_cast<double>(good);
  report.scalars["required_good_seeds"] = static_cast<double>(need);
  report.notes.push_back(list);
  if (!report.pass) {
    report.counterexample = describe_violation(id + " at the worst seed", report.lhs, relation,
                                               report.rhs);
  }
  return report;
}

}  // namespace

CertificateReport staying_probability_check(const WeightedGraph& g, const VertexSet& s,
                                            std::size_t t) {
  const double phi = edge_expansion(g, s);
  require_local_set(g, s, phi);
  const auto walks = walks_from(g, s, t);
  const double bound = std::pow(1.0 - 1.5 * phi, static_cast<double>(t)) / 200.0;
  std::vector<double> lhs, rhs;
  for (const auto& w : walks) {
    double mass = 0.0;
    for (Vertex v : s) mass += w.values[v];
    lhs.push_back(mass);
    rhs.push_back(bound);
  }
  auto report = half_seed_report("walk_staying_probability", s, lhs, rhs, ">=");
  report.scalars["phi_S"] = phi;
  report.scalars["t"] = static_cast<double>(t);
  report.scalars["constant"] = 1.0 / 200.0;
  return report;
}

CertificateReport spectral_sparsity_check(const WeightedGraph& g, const VertexSet& s,
                                          std::size_t t) {
  const double phi = edge_expansion(g, s);
  require_local_set(g, s, phi);
  const auto walks = walks_from(g, s, t);
  const double scale = 40000.0 * static_cast<double>(s.size()) /
                       std::pow(1.0 - 1.5 * phi, 2.0 * static_cast<double>(t));
  std::vector<double> lhs, rhs;
  double max_l1_error = 0.0;
  for (const auto& w : walks) {
    const double l1 = l1_norm(w.values);
    max_l1_error = std::max(max_l1_error, std::abs(l1 - 1.0));
    lhs.push_back(l1 * l1);
    rhs.push_back(scale * squared_norm(w.values));
  }
  auto report = half_seed_report("walk_spectral_sparsity", s, lhs, rhs, "<=");
  report.scalars["phi_S"] = phi;
  report.scalars["t"] = static_cast<double>(t);
  report.scalars["constant"] = 40000.0;
  report.scalars["max_l1_norm_error"] = max_l1_error;
  return report;
}

RoundingResult spectral_rounding(const WeightedGraph& g, std::span<const double> x,
                                 std::size_t support_cap) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n) throw PreconditionError("vector length does not match vertex count");
  if (support_cap < 1) throw PreconditionError("support cap must be at least 1");
  double top = 0.0;
  for (double v : x) {
    if (v < 0.0) throw PreconditionError("spectral rounding needs a nonnegative vector");
    top = std::max(top, v);
  }
  if (top == 0.0) throw PreconditionError("spectral rounding needs a nonzero vector");

  std::vector<double> thresholds{0.0};
  {
    std::vector<double> values(x.begin(), x.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (double v : values) {
      if (v > 0.0 && v < top) thresholds.push_back(v);
    }
  }
  std::optional<RoundingResult> best;
  RealVector y(n);
  for (double theta : thresholds) {
    std::size_t support = 0;
    for (double v : x) support += v > theta ? 1 : 0;
    if (support > support_cap) continue;
    for (std::size_t i = 0; i < n; ++i) y[i] = std::max(x[i] - theta, 0.0);
    const double r = rayleigh_quotient(g, y);
    if (!best || r < best->rayleigh) best = RoundingResult{y, theta, support, r};
  }
  if (!best) throw InvariantViolation("no rounding threshold met the support cap");
  return std::move(*best);
}

WalkVector truncated_walk(const WeightedGraph& g, Vertex s, std::size_t t, double alpha) {
  const auto d = g.uniform_degree();
  if (!d) throw PreconditionError("truncated_walk needs a graph with uniform weights 1/d");
  return truncated_loop(g, s, t, alpha, static_cast<double>(*d));
}

WalkVector truncated_walk_weighted(const WeightedGraph& g, Vertex s, std::size_t t,
                                   double alpha) {
  return truncated_loop(g, s, t, alpha, static_cast<double>(g.max_neighbor_count()));
}

std::size_t walk_support_cap(std::size_t n, std::size_t size_target, double eps,
                             double cap_constant) {
  const double raw =
      std::ceil(cap_constant * std::pow(static_cast<double>(size_target), 1.0 + eps));
  const double clamped = std::min(raw, static_cast<double>(n / 2));
  return std::max<std::size_t>(1, static_cast<std::size_t>(clamped));
}

namespace {

void require_walk_inputs(double phi_target, std::size_t size_target, double eps) {
  if (!(phi_target > 0.0 && phi_target <= 0.25)) {
    throw PreconditionError("walk partition needs phi_target in (0, 1/4]");
  }
  if (size_target < 2) throw PreconditionError("walk partition needs size_target >= 2");
  if (!(eps > 0.0 && eps <= 1.0)) throw PreconditionError("walk partition needs eps in (0, 1]");
}

std::size_t ceil_steps(double v) { return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(v))); }

}  // namespace

WalkPartitionResult walk_partition(const WeightedGraph& g, Vertex s, double phi_target,
                                   std::size_t size_target, double eps, WalkMode mode,
                                   double cap_constant) {
  require_walk_inputs(phi_target, size_target, eps);
  require_seed(g, s);
  const double log_size = std::log(static_cast<double>(size_target));
  const std::size_t cap = walk_support_cap(g.num_vertices(), size_target, eps, cap_constant);
  WalkVector vec;
  double alpha = 0.0;
  bool weighted = false;
  std::size_t t = 0;
  if (mode == WalkMode::kExact) {
    t = ceil_steps(eps * log_size / (6.0 * phi_target));
    vec = exact_walk(g, s, t);
  } else {
    t = ceil_steps(eps * log_size / phi_target);
    alpha = phi_target / (160000.0 * std::pow(static_cast<double>(size_target), 1.0 + eps));
    weighted = !g.uniform_degree().has_value();
    vec = weighted ? truncated_walk_weighted(g, s, t, alpha) : truncated_walk(g, s, t, alpha);
  }
  RoundingResult rounding = spectral_rounding(g, vec.values, cap);
  ExpansionStats best = best_level_set(g, rounding.y, cap).best;
  return {std::move(best), std::move(vec), std::move(rounding), t, alpha, cap, weighted};
}

CertificateReport truncated_quality_checks(const WeightedGraph& g, const VertexSet& s, double eps,
                                           bool allow_weighted) {
  const double phi = edge_expansion(g, s);
  require_walk_inputs(phi, s.size(), eps);
  require_local_set(g, s, phi);
  const bool uniform = g.uniform_degree().has_value();
  if (!uniform && !allow_weighted) {
    throw PreconditionError("truncated quality checks need uniform weights (or allow_weighted)");
  }
  const double size = static_cast<double>(s.size());
  const std::size_t t = ceil_steps(eps * std::log(size) / phi);
  const double alpha = phi / (160000.0 * std::pow(size, 1.0 + eps));
  const double chain = 80000.0 * std::pow(size, 1.0 + eps);
  const auto& members = s.members();

  struct SeedResult {
    bool sandwich = true;
    double sandwich_gap = 0.0;  // max over v of (p - alpha) - p' (positive means violation)
    double norm_lhs = 0.0, norm_rhs = 0.0;
    double chain_lhs = 0.0, chain_rhs = 0.0;
    double rayleigh_ratio = 0.0;
    double work_ratio = 0.0;
  };
  std::vector<SeedResult> results(members.size());
  detail::parallel_for(members.size(), [&](std::size_t i) {
    const WalkVector p = exact_walk(g, members[i], t);
    const WalkVector q = uniform ? truncated_walk(g, members[i], t, alpha)
                                 : truncated_walk_weighted(g, members[i], t, alpha);
    SeedResult& r = results[i];
    for (std::size_t v = 0; v < p.values.size(); ++v) {
      const double upper = p.values[v] - q.values[v];
      const double lower = q.values[v] - (p.values[v] - alpha);
      if (q.values[v] < 0.0 || upper < -1e-12 || lower < -1e-12) r.sandwich = false;
      r.sandwich_gap = std::max({r.sandwich_gap, -upper, -lower});
    }
    r.norm_lhs = squared_norm(q.values);
    r.norm_rhs = squared_norm(p.values) - 2.0 * alpha;
    const double l1 = l1_norm(q.values);
    r.chain_lhs = l1 * l1;
    r.chain_rhs = chain * r.norm_lhs;
    r.rayleigh_ratio = rayleigh_quotient(g, q.values) * eps / phi;
    r.work_ratio = static_cast<double>(q.work.edge_touches) / q.work.budget;
  });

  const Slack slack;
  CertificateReport report;
  report.theorem_id = "walk_truncated_quality";
  std::size_t good = 0, sandwich_failures = 0;
  double max_ratio = 0.0, max_work = 0.0, worst_gap = 0.0;
  std::string list = "good seeds:";
  double worst_chain_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& r = results[i];
    if (!r.sandwich) ++sandwich_failures;
    const bool ok = r.sandwich && slack.geq(r.norm_lhs, r.norm_rhs) &&
                    slack.leq(r.chain_lhs, r.chain_rhs);
    if (ok) {
      ++good;
      list += " " + std::to_string(members[i]);
    }
    max_ratio = std::max(max_ratio, r.rayleigh_ratio);
    max_work = std::max(max_work, r.work_ratio);
    worst_gap = std::max(worst_gap, r.sandwich_gap);
    if (r.chain_rhs - r.chain_lhs < worst_chain_margin) {
      worst_chain_margin = r.chain_rhs - r.chain_lhs;
      report.lhs = r.chain_lhs;
      report.rhs = r.chain_rhs;
    }
  }
  const std::size_t need = (members.size() + 1) / 2;
  report.pass = good >= need;
  report.scalars["t"] = static_cast<double>(t);
  report.scalars["alpha"] = alpha;
  report.scalars["phi_S"] = phi;
  report.scalars["epsilon"] = eps;
  report.scalars["good_seeds"] = static_cast<double>(good);
  report.scalars["required_good_seeds"] = static_cast<double>(need);
  report.scalars["sandwich_failures"] = static_cast<double>(sandwich_failures);
  report.scalars["max_sandwich_gap"] = worst_gap;
  report.scalars["max_rayleigh_ratio"] = max_ratio;
  report.scalars["max_work_over_budget"] = max_work;
  report.scalars["weighted"] = uniform ? 0.0 : 1.0;
  report.notes.push_back(list);
  report.notes.push_back("lhs/rhs: ||p'||_1^2 <= 80000 |S|^(1+eps) ||p'||_2^2 at the tightest seed");
  if (!report.pass) {
    report.counterexample = "only " + std::to_string(good) + " of " +
                            std::to_string(members.size()) + " seeds met every check";
  }
  return report;
}

LocalEigenResult local_eigen_partition(const WeightedGraph& g, const VertexSet& s_hint,
                                       double phi_target, double eps, double cap_constant) {
  if (s_hint.size() < 2) throw PreconditionError("local eigen partition needs |S_hint| >= 2");
  require_walk_inputs(phi_target, s_hint.size(), eps);
  const RestrictedSpectrum spec = restricted_eigenvalue(g, s_hint);
  if (!(spec.lambda_s > 0.0 && spec.lambda_s < 1.0)) {
    throw PreconditionError("local eigen partition needs 0 < lambda_S < 1");
  }
  Vertex seed = s_hint.members().front();
  double top = -1.0;
  for (Vertex v : s_hint) {
    if (std::abs(spec.vector[v]) > top) {
      top = std::abs(spec.vector[v]);
      seed = v;
    }
  }
  const double log_size = std::log(static_cast<double>(s_hint.size()));
  LocalEigenResult out{expansion_stats(g, s_hint), spec.lambda_s, seed, 0, 0, 0};
  out.steps = ceil_steps(eps * log_size / (2.0 * -std::log1p(-spec.lambda_s)));
  out.walk_partition_steps = ceil_steps(eps * log_size / (6.0 * phi_target));
  out.support_cap = walk_support_cap(g.num_vertices(), s_hint.size(), eps, cap_constant);
  const WalkVector vec = exact_walk(g, seed, out.steps);
  const RoundingResult rounding = spectral_rounding(g, vec.values, out.support_cap);
  out.best = best_level_set(g, rounding.y, out.support_cap).best;
  return out;
}

double power_mean(std::span<const double> x, std::span<const double> weights, double p) {
  if (x.size() != weights.size()) throw PreconditionError("power mean needs matching lengths");
  if (!(p > 0.0)) throw PreconditionError("power mean needs p > 0");
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += weights[i] * std::pow(x[i], p);
  return std::pow(total, 1.0 / p);
}

}  // namespace cheeger
