#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cheeger/certificate.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/graph.hpp"

namespace cheeger {

enum class PagerankKind { kExact, kApproximate };

/// Work done by the push loop.
struct PushWork {
  std::size_t pushes = 0;
  std::size_t edge_touches = 0;
  double degree = 0.0;        ///< d: uniform degree, or the max neighbor count
  double touch_budget = 0.0;  ///< d / (eps alpha)
  double push_budget = 0.0;   ///< 1 / (eps alpha)
};

/// Personal pagerank r = alpha chi_s + (1 - alpha) W r, exact or approximate.
///
/// For the approximate kind `residual` is q with 0 <= q <= epsilon and
/// values = alpha (chi_s - q) + (1 - alpha) W values.
struct PagerankVector {
  Vertex seed = 0;
  double alpha = 1.0;
  RealVector values;
  PagerankKind kind = PagerankKind::kExact;
  double epsilon = 0.0;
  RealVector residual;
  PushWork work;
  std::size_t iterations = 0;  ///< fixed-point sweeps for the exact kind
};

/// Fixed-point iteration from chi_s until the l1 update is <= tol.
/// alpha in (0, 1].
PagerankVector exact_pagerank(const WeightedGraph& g, Vertex s, double alpha,
                              double tol = 1e-13);

/// Push algorithm on a graph with uniform weights 1/d. Highest residual first,
/// ties by index. eps > 0.
PagerankVector approximate_push(const WeightedGraph& g, Vertex s, double alpha, double eps);

/// The same loop on any unit-degree graph. The work budget uses the largest
/// neighbor count in place of d.
PagerankVector approximate_push_weighted(const WeightedGraph& g, Vertex s, double alpha,
                                         double eps);

/// max_v |values - alpha (chi_s - q) - (1 - alpha) W values| with q = 0 for
/// the exact kind.
double pagerank_equation_residual(const WeightedGraph& g, const PagerankVector& vec);

/// Drop inequality x_a - x_b <= constant * alpha / w([1,a],[b,n]) on the
/// sorted values, all pairs when n <= 64. Always records `max_ratio`, the
/// largest (x_a - x_b) w / alpha seen, and the violation count at constant 2.
CertificateReport pagerank_drop_check(const WeightedGraph& g, const PagerankVector& vec,
                                      std::size_t samples, std::uint64_t seed,
                                      double constant = 1.0);

struct EscapeAnalysis {
  CertificateReport report;
  std::vector<Vertex> good_seeds;    ///< increasing
  std::vector<double> retained;      ///< sum_{i in S} x_i per member of S
  std::vector<PagerankVector> vectors;  ///< one per member of S
};

/// Exact pagerank from every s in S; at least ceil(|S|/2) seeds must keep
/// sum_{i in S} x_i >= 1 - phi(S) / alpha. |S| <= n/2. Seeds run in parallel.
EscapeAnalysis escape_mass_analysis(const WeightedGraph& g, const VertexSet& s, double alpha);
CertificateReport escape_mass_check(const WeightedGraph& g, const VertexSet& s, double alpha);

enum class PagerankMode { kExact, kPush };

struct PagerankPartitionResult {
  ExpansionStats best;
  PagerankVector vec;
  double alpha = 0.0;
  std::size_t size_cap = 0;
  bool weighted_push = false;  ///< push ran on a non-uniform graph
};

/// Level-set partition around s with alpha = 3 phi_target. Push uses
/// eps = 1 / (6 size_target) unless eps is given. Level sets are limited to
/// floor(3 t ln t) (exact) or floor(6 t ln t) (push) vertices, t = size_target,
/// and to n/2. On a non-uniform graph push runs the weighted variant.
PagerankPartitionResult pagerank_partition(const WeightedGraph& g, Vertex s, double phi_target,
                                           std::size_t size_target, PagerankMode mode,
                                           std::optional<double> eps = std::nullopt);

struct PagerankCertificateOptions {
  /// phi^V(G); computed exhaustively for n <= 20 when absent.
  std::optional<double> phi_v_graph;
  /// phi_k(G); computed exhaustively when feasible when absent.
  std::optional<double> phi_k;
  /// When an exact value is unavailable, use a provable lower bound instead
  /// of failing: phi(G)/2 or lambda_2/4 for phi^V(G), phi(G) (k = 2) or
  /// lambda_k/2 for phi_k. A lower bound only weakens the checked bound.
  bool allow_lower_bounds = false;
  /// Refuse S with 3 |S| ln |S| > n.
  bool enforce_size_precondition = true;
};

/// Reports, in order: escape bound, initial mass, vertex certificate
/// (constant 36) and k-way certificate (constant 1152). Each good seed gets
/// its own sequences; a certificate passes when every good seed finds a
/// prefix m_i <= 3 |S| ln |S| under the bound. |S| >= 2, k >= 2.
std::vector<CertificateReport> pagerank_certificates(const WeightedGraph& g, const VertexSet& s,
                                                     std::size_t k,
                                                     const PagerankCertificateOptions& options = {});

}  // namespace cheeger
