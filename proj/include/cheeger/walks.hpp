#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cheeger/certificate.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/graph.hpp"

namespace cheeger {

enum class WalkKind { kExact, kTruncated };

struct WalkWork {
  std::vector<std::size_t> touches_per_round;
  std::size_t edge_touches = 0;
  double degree = 0.0;  ///< d: uniform degree, or the max neighbor count
  double budget = 0.0;  ///< d t^2 / alpha
};

/// p = W^t chi_s, exact or truncated. For the truncated kind every round
/// zeroes entries below threshold = alpha / t, so p >= p' >= p - alpha.
struct WalkVector {
  Vertex seed = 0;
  std::size_t steps = 0;
  RealVector values;
  WalkKind kind = WalkKind::kExact;
  double alpha = 0.0;
  double threshold = 0.0;
  WalkWork work;
};

/// t applications of the lazy walk to chi_s.
WalkVector exact_walk(const WeightedGraph& g, Vertex s, std::size_t t);

/// R(p) <= 2 - 2 ||p||_2^(1/t) with slack 1e-9. Exact walk, t >= 1.
CertificateReport rayleigh_bound_check(const WeightedGraph& g, const WalkVector& vec);

/// For at least ceil(|S|/2) seeds s in S,
/// sum_{v in S} p_{s,t}(v) >= (1/200) (1 - 3 phi(S) / 2)^t.
/// Needs phi(S) < 2/3 and |S| >= 2.
CertificateReport staying_probability_check(const WeightedGraph& g, const VertexSet& s,
                                            std::size_t t);

/// For at least ceil(|S|/2) seeds,
/// ||p||_1^2 <= 40000 |S| ||p||_2^2 / (1 - 3 phi(S) / 2)^(2t).
/// Same preconditions as the staying probability check.
CertificateReport spectral_sparsity_check(const WeightedGraph& g, const VertexSet& s,
                                          std::size_t t);

struct RoundingResult {
  RealVector y;
  double threshold = 0.0;
  std::size_t support = 0;
  double rayleigh = 0.0;  ///< R(y)
};

/// Among y = max(x - theta, 0) for theta in {0} and the distinct values of x,
/// keeps those with 1 <= |supp y| <= support_cap and returns the one with the
/// smallest Rayleigh quotient (ties to the smaller theta). x >= 0, x != 0,
/// support_cap >= 1.
RoundingResult spectral_rounding(const WeightedGraph& g, std::span<const double> x,
                                 std::size_t support_cap);

/// Truncated walk on a graph with uniform weights 1/d: t rounds of the lazy
/// walk restricted to the support and its neighbors, each followed by zeroing
/// entries below alpha / t. 0 < alpha < t, t >= 1.
WalkVector truncated_walk(const WeightedGraph& g, Vertex s, std::size_t t, double alpha);

/// The same on any unit-degree graph; the budget uses the max neighbor count.
WalkVector truncated_walk_weighted(const WeightedGraph& g, Vertex s, std::size_t t,
                                   double alpha);

enum class WalkMode { kExact, kTruncated };

/// Support cap C * size_target^(1 + eps), clamped to [1, n/2].
std::size_t walk_support_cap(std::size_t n, std::size_t size_target, double eps,
                             double cap_constant);

struct WalkPartitionResult {
  ExpansionStats best;
  WalkVector vec;
  RoundingResult rounding;
  std::size_t steps = 0;
  double alpha = 0.0;  ///< truncation budget; 0 for the exact mode
  std::size_t support_cap = 0;
  bool weighted = false;  ///< truncated mode ran on a non-uniform graph
};

inline constexpr double kDefaultWalkCapConstant = 2.0;

/// Exact mode: t = ceil(eps ln T / (6 phi_target)). Truncated mode:
/// t = ceil(eps ln T / phi_target) and alpha = phi_target / (160000 T^(1+eps)),
/// T = size_target. The walk vector is rounded with the support cap and the
/// best level set of the rounded vector is returned. phi_target in (0, 1/4],
/// T >= 2, eps in (0, 1].
WalkPartitionResult walk_partition(const WeightedGraph& g, Vertex s, double phi_target,
                                   std::size_t size_target, double eps, WalkMode mode,
                                   double cap_constant = kDefaultWalkCapConstant);

/// Truncated-walk checks at t = ceil(eps ln|S| / phi(S)) and
/// alpha = phi(S) / (160000 |S|^(1+eps)). For at least half the seeds:
/// the sandwich against the exact walk, ||p'||_2^2 >= ||p||_2^2 - 2 alpha and
/// ||p'||_1^2 <= 80000 |S|^(1+eps) ||p'||_2^2. Reports
/// max R(p') eps / phi(S) as a measured constant. With allow_weighted the
/// weighted truncated walk is used on non-uniform graphs.
CertificateReport truncated_quality_checks(const WeightedGraph& g, const VertexSet& s, double eps,
                                           bool allow_weighted = false);

struct LocalEigenResult {
  ExpansionStats best;
  double lambda_s = 0.0;
  Vertex seed = 0;
  std::size_t steps = 0;
  std::size_t walk_partition_steps = 0;  ///< t that walk_partition would use
  std::size_t support_cap = 0;
};

/// Seeds the exact walk at argmax |v_S| for the restricted eigenvector of
/// S_hint and runs t = ceil(eps ln|S| / (2 ln(1 / (1 - lambda_S)))) steps,
/// then rounds and sweeps as walk_partition does. |S_hint| >= 2.
LocalEigenResult local_eigen_partition(const WeightedGraph& g, const VertexSet& s_hint,
                                       double phi_target, double eps,
                                       double cap_constant = kDefaultWalkCapConstant);

/// (sum_i w_i x_i^p)^(1/p) for weights summing to one, p > 0.
double power_mean(std::span<const double> x, std::span<const double> weights, double p);

}  // namespace cheeger
