#include "cheeger/powering.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cheeger/errors.hpp"
#include "cheeger/partitioner.hpp"
#include "cheeger/spectral.hpp"

namespace cheeger {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::MatrixXd dense_walk_matrix(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const auto i = static_cast<Eigen::Index>(v);
    w(i, i) = 1.0 - g.degree(v) / 2.0;
    for (const Neighbor& nb : g.neighbors(v)) w(i, static_cast<Eigen::Index>(nb.to)) = nb.weight / 2.0;
  }
  return w;
}

Eigen::Map<const RowMatrix> as_matrix(const PowerGraph& h) {
  const auto n = static_cast<Eigen::Index>(h.n);
  return Eigen::Map<const RowMatrix>(h.matrix.data(), n, n);
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> power_laplacian_spectrum(const PowerGraph& h) {
  const auto n = static_cast<Eigen::Index>(h.n);
  const Eigen::MatrixXd lh = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(as_matrix(h));
  return sorted_eigenvalues(lh);
}

std::size_t ceil_tolerant(double v) {
  return static_cast<std::size_t>(std::ceil(v - 1e-9 * std::max(1.0, std::abs(v))));
}

}  // namespace

double PowerGraph::cut_weight(const VertexSet& s) const {
  if (s.universe() != n) throw PreconditionError("set universe differs from vertex count");
  const auto mask = s.mask();
  double total = 0.0;
  for (Vertex i : s) {
    for (Vertex j = 0; j < n; ++j) {
      if (!mask[j]) total += entry(i, j);
    }
  }
  return total;
}

double PowerGraph::phi(const VertexSet& s) const {
  return cut_weight(s) / static_cast<double>(s.size());
}

double PowerGraph::row_sum_error() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += matrix[i * n + j];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

WeightedGraph PowerGraph::off_diagonal_graph() const {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Average the two triangles so the stored weight is exactly symmetric.
      const double w = (matrix[i * n + j] + matrix[j * n + i]) / 2.0;
      if (w > 0.0) edges.push_back({i, j, w});
    }
  }
  return WeightedGraph::from_edges_unchecked(n, edges);
}

PowerGraph graph_power(const WeightedGraph& g, std::size_t t) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxPowerVertices) {
    throw InstanceTooLarge("graph_power builds a dense matrix; n <= 2048, got " +
                           std::to_string(n));
  }
  if (t < 1) throw PreconditionError("graph_power needs t >= 1");
  Eigen::MatrixXd base = dense_walk_matrix(g);
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  bool first = true;
  for (std::size_t e = t; e > 0; e >>= 1) {
    if (e & 1) {
      result = first ? base : Eigen::MatrixXd(result * base);
      first = false;
    }
    if (e > 1) base = base * base;
  }
  // Symmetrize away rounding asymmetry from the products. A fresh matrix
  // avoids aliasing with the transpose.
  const Eigen::MatrixXd symmetric = (result + result.transpose()) / 2.0;
  PowerGraph h;
  h.n = n;
  h.t = t;
  h.matrix.resize(n * n);
  Eigen::Map<RowMatrix>(h.matrix.data(), static_cast<Eigen::Index>(n),
                        static_cast<Eigen::Index>(n)) = symmetric;
  return h;
}

ExtremalSet power_expansion_bruteforce(const PowerGraph& h) {
  if (h.n > 20) throw InstanceTooLarge("exhaustive phi(H) supports n <= 20");
  // The off-diagonal graph has the same cut weights as H, and the sweep's
  // boundary update uses its (sub-unit) degrees, so phi mode is exact here.
  return graph_expansion_bruteforce(h.off_diagonal_graph(), ExpansionMode::kPhi);
}

CertificateReport sqrt_t_power_check(const WeightedGraph& g, std::size_t t) {
  if (g.num_vertices() > 14) throw InstanceTooLarge("sqrt-t power check supports n <= 14");
  if (g.num_vertices() < 2) throw PreconditionError("sqrt-t power check needs n >= 2");
  const PowerGraph h = graph_power(g, t);
  const auto phi_h = power_expansion_bruteforce(h);
  const double phi_g = graph_expansion_bruteforce(g, ExpansionMode::kPhi).value;
  CertificateReport report;
  report.theorem_id = "power_sqrt_t";
  report.relation = ">=";
  report.lhs = phi_h.value;
  report.rhs =
      (1.0 - std::pow(1.0 - phi_g / 2.0, std::sqrt(static_cast<double>(t)))) / 20.0;
  report.pass = Slack{}.geq(report.lhs, report.rhs);
  report.witness = expansion_stats(g, phi_h.witness);
  report.scalars["t"] = static_cast<double>(t);
  report.scalars["phi_G"] = phi_g;
  report.scalars["phi_H"] = phi_h.value;
  report.scalars["constant"] = 1.0 / 20.0;
  // phi(H) / (1 - (1 - phi(G)/2)^sqrt t), the constant the instance supports.
  report.scalars["measured_constant"] = report.rhs > 0.0 ? phi_h.value / (20.0 * report.rhs) : 0.0;
  if (!report.pass) {
    report.counterexample = describe_violation("phi(H) >= (1/20)(1 - (1 - phi(G)/2)^sqrt t)",
                                               report.lhs, ">=", report.rhs);
  }
  return report;
}

std::vector<double> dense_spectrum(const WeightedGraph& g) {
  if (g.num_vertices() > kMaxPowerVertices) throw InstanceTooLarge("dense spectrum needs n <= 2048");
  const auto n = static_cast<Eigen::Index>(g.num_vertices());
  const Eigen::MatrixXd l =
      2.0 * (Eigen::MatrixXd::Identity(n, n) - dense_walk_matrix(g));
  return sorted_eigenvalues(l);
}

double spectrum_mapping_error(const WeightedGraph& g, const PowerGraph& h) {
  if (g.num_vertices() != h.n) throw PreconditionError("power graph does not match the graph");
  const auto lambda = dense_spectrum(g);
  std::vector<double> mapped;
  for (double l : lambda) {
    mapped.push_back(1.0 - std::pow(1.0 - l / 2.0, static_cast<double>(h.t)));
  }
  std::sort(mapped.begin(), mapped.end());
  const auto direct = power_laplacian_spectrum(h);
  double worst = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    worst = std::max(worst, std::abs(mapped[i] - direct[i]));
  }
  return worst;
}

ImprovedSweepResult improved_cheeger_sweep(const WeightedGraph& g, std::span<const double> x,
                                           std::size_t k, std::optional<double> phi_k) {
  const std::size_t n = g.num_vertices();
  if (x.size() != n) throw PreconditionError("vector length does not match vertex count");
  if (k < 2) throw PreconditionError("improved sweep needs k >= 2");
  std::size_t support = 0;
  for (double v : x) {
    if (v < 0.0) throw PreconditionError("improved sweep needs a nonnegative vector");
    support += v > 0.0 ? 1 : 0;
  }
  if (support == 0) throw PreconditionError("improved sweep needs a nonzero vector");
  if (2 * support > n) throw PreconditionError("improved sweep needs |supp x| <= n/2");

  const double r = rayleigh_quotient(g, x);
  const LevelSetResult level = best_level_set(g, x, support);
  const double phi_sw = level.best.phi;
  const double lambda_k = eigenpairs(g, k).back().value;
  if (!phi_k && ((k <= 3 && n <= 14) || (k == 4 && n <= 12))) {
    phi_k = k_way_expansion_bruteforce(g, k).value;
  }

  CertificateReport report;
  report.theorem_id = "improved_cheeger_sweep";
  report.lhs = phi_sw;
  report.rhs = std::sqrt(2.0 * r);
  report.pass = Slack{}.leq(report.lhs, report.rhs);
  report.witness = level.best;
  report.witness_prefix = level.prefix;
  const double kk = static_cast<double>(k);
  report.scalars["k"] = kk;
  report.scalars["rayleigh"] = r;
  report.scalars["lambda_k"] = lambda_k;
  report.scalars["phi_sw"] = phi_sw;
  report.scalars["ratio_over_kR"] = r > 0.0 ? phi_sw / (kk * r) : 0.0;
  report.scalars["ratio_sqrt_lambda_k"] = r > 0.0 ? phi_sw * std::sqrt(lambda_k) / (kk * r) : 0.0;
  if (phi_k) {
    report.scalars["phi_k"] = *phi_k;
    report.scalars["ratio_phi_k"] = r > 0.0 ? phi_sw * *phi_k / (kk * r) : 0.0;
  }
  if (!report.pass) {
    report.counterexample = describe_violation("phi_sw(x) <= sqrt(2 R(x))", report.lhs, "<=",
                                               report.rhs);
  }

  ImprovedSweepResult out{level.best, std::move(report), {}};
  // Disjoint family: sweep, drop the winner from the support, sweep again.
  RealVector rest(x.begin(), x.end());
  double worst_disjoint = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t left = 0;
    for (double v : rest) left += v > 0.0 ? 1 : 0;
    if (left == 0) break;
    const LevelSetResult piece = best_level_set(g, rest, left);
    for (Vertex v : piece.best.set) rest[v] = 0.0;
    worst_disjoint = std::max(worst_disjoint, piece.best.phi);
    out.disjoint_sets.push_back(piece.best);
  }
  out.report.scalars["disjoint_sets"] = static_cast<double>(out.disjoint_sets.size());
  out.report.scalars["disjoint_max_phi"] = worst_disjoint;
  if (r > 0.0 && phi_sw > 0.0) {
    out.report.scalars["disjoint_ratio"] = worst_disjoint * phi_sw / (kk * r);
  }
  return out;
}

CertificateReport reduction_checks(const WeightedGraph& g, std::size_t k) {
  const std::size_t n = g.num_vertices();
  if (n > 14) throw InstanceTooLarge("reduction checks support n <= 14");
  if (k < 2 || k > n) throw PreconditionError("reduction checks need 2 <= k <= n");
  const auto lambda = dense_spectrum(g);
  const double lambda2 = lambda[1];
  const double lambda_k = lambda[k - 1];
  if (lambda_k <= 1e-12) throw PreconditionError("lambda_k = 0: graph has >= k components");
  const std::size_t t = std::max<std::size_t>(1, ceil_tolerant(1.0 / lambda_k));
  const PowerGraph h = graph_power(g, t);
  const auto mu = power_laplacian_spectrum(h);
  const double lambda2_h = mu[1];
  const double lambdak_h = mu[k - 1];
  const Slack slack;

  CertificateReport report;
  report.theorem_id = "power_reduction";
  const double td = static_cast<double>(t);
  report.scalars["k"] = static_cast<double>(k);
  report.scalars["t"] = td;
  report.scalars["lambda2_G"] = lambda2;
  report.scalars["lambdak_G"] = lambda_k;
  report.scalars["lambda2_H"] = lambda2_h;
  report.scalars["lambdak_H"] = lambdak_h;
  report.scalars["lambdak_H_formula"] = 1.0 - std::pow(1.0 - lambda_k / 2.0, td);

  const bool lambdak_ok = slack.geq(lambdak_h, 0.25);
  const double lambda2_bound = td * lambda2 / 2.0;
  const bool lambda2_ok = slack.leq(lambda2_h, lambda2_bound);
  const double stated_bound = lambda2 / (2.0 * lambda_k);
  report.scalars["lambda2_H_bound"] = lambda2_bound;
  report.scalars["lambda2_H_stated_bound"] = stated_bound;
  report.scalars["stated_bound_holds"] = slack.leq(lambda2_h, stated_bound) ? 1.0 : 0.0;
  const double mapping = spectrum_mapping_error(g, h);
  report.scalars["spectrum_mapping_error"] = mapping;
  const bool mapping_ok = mapping <= 1e-8;

  const double phi_h = power_expansion_bruteforce(h).value;
  const auto phi_g = graph_expansion_bruteforce(g, ExpansionMode::kPhi);
  const double c = std::max(phi_h / lambda2_h, 0.1);
  const double chain_bound = 40.0 * c * lambda2 / std::sqrt(lambda_k);
  const bool chain_ok = slack.leq(phi_g.value, chain_bound);
  report.scalars["phi_H"] = phi_h;
  report.scalars["phi_G"] = phi_g.value;
  report.scalars["C"] = c;
  report.lhs = phi_g.value;
  report.rhs = chain_bound;
  report.witness = expansion_stats(g, phi_g.witness);

  report.pass = lambdak_ok && lambda2_ok && mapping_ok && chain_ok;
  if (!lambdak_ok) {
    report.notes.push_back(describe_violation("lambda_k(H) >= 1/4", lambdak_h, ">=", 0.25));
  }
  if (!lambda2_ok) {
    report.notes.push_back(
        describe_violation("lambda_2(H) <= t lambda_2 / 2", lambda2_h, "<=", lambda2_bound));
  }
  if (!mapping_ok) {
    report.notes.push_back(describe_violation("spectrum mapping error", mapping, "<=", 1e-8));
  }
  if (!chain_ok) {
    report.notes.push_back(describe_violation("phi(G) <= 40 C lambda_2 / sqrt(lambda_k)",
                                              phi_g.value, "<=", chain_bound));
  }
  if (!report.pass) report.counterexample = report.notes.front();
  return report;
}

CrossingEstimate monte_carlo_crossing(const WeightedGraph& g, const VertexSet& s, std::size_t t,
                                      std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw PreconditionError("need at least one sample");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const auto mask = s.mask();
  const auto& members = s.members();
  std::size_t outside = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    Vertex v = members[rng() % members.size()];
    for (std::size_t step = 0; step < t; ++step) {
      double u = uniform();
      if (u < 0.5) continue;  // lazy half
      u = (u - 0.5) * 2.0;
      double acc = 0.0;
      const auto nbrs = g.neighbors(v);
      Vertex next = v;  // leftover degree mass (1 - d(v)) stays put
      for (const Neighbor& nb : nbrs) {
        acc += nb.weight;
        if (u < acc) {
          next = nb.to;
          break;
        }
      }
      v = next;
    }
    outside += mask[v] ? 0 : 1;
  }
  const double p = static_cast<double>(outside) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples};
}

}  // namespace cheeger
