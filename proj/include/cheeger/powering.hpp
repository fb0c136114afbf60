#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cheeger/certificate.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/graph.hpp"

namespace cheeger {

/// Largest n accepted by graph_power.
inline constexpr std::size_t kMaxPowerVertices = 2048;

/// H = W^t as a dense symmetric matrix, diagonal included. Cut weights use
/// off-diagonal entries only, so the self-loop mass never crosses a cut and
/// expansion on H keeps the denominator |S|.
struct PowerGraph {
  std::size_t n = 0;
  std::size_t t = 0;
  std::vector<double> matrix;  ///< row-major n x n

  double entry(Vertex i, Vertex j) const { return matrix[i * n + j]; }
  /// sum_{i in S, j not in S} (W^t)_{ij}
  double cut_weight(const VertexSet& s) const;
  double phi(const VertexSet& s) const;
  /// max_i |sum_j (W^t)_{ij} - 1|
  double row_sum_error() const;
  /// Off-diagonal part as a graph (degrees below one, unchecked).
  WeightedGraph off_diagonal_graph() const;
};

/// Dense W^t by repeated squaring. n <= 2048, t >= 1.
PowerGraph graph_power(const WeightedGraph& g, std::size_t t);

/// phi(H) = min over 1 <= |S| <= n/2 of cut_weight(S) / |S|, exhaustive
/// (n <= 20). Ties go to the lexicographically smallest set.
ExtremalSet power_expansion_bruteforce(const PowerGraph& h);

/// phi(H) >= (1/20) (1 - (1 - phi(G)/2)^sqrt(t)), both sides exhaustive.
/// n <= 14.
CertificateReport sqrt_t_power_check(const WeightedGraph& g, std::size_t t);

/// Eigenvalues of L (dense, ascending). n <= 2048.
std::vector<double> dense_spectrum(const WeightedGraph& g);

/// max_i |mu_i(I - W^t) - (1 - (1 - lambda_i/2)^t)| with both spectra sorted.
double spectrum_mapping_error(const WeightedGraph& g, const PowerGraph& h);

struct ImprovedSweepResult {
  ExpansionStats best;
  CertificateReport report;
  /// k disjoint level sets found by sweeping, removing the winner and
  /// sweeping what remains of the support.
  std::vector<ExpansionStats> disjoint_sets;
};

/// Level-set sweep of a nonnegative x with |supp x| <= n/2. Gates on the
/// rounding bound phi_sw(x) <= sqrt(2 R(x)); records phi_sw / (k R),
/// phi_sw sqrt(lambda_k) / (k R) and, when phi_k is known or exhaustively
/// computable, phi_sw phi_k / (k R) as measured constants.
ImprovedSweepResult improved_cheeger_sweep(const WeightedGraph& g, std::span<const double> x,
                                           std::size_t k,
                                           std::optional<double> phi_k = std::nullopt);

/// Reduction arithmetic with t = ceil(1 / lambda_k): lambda_k(H) >= 1/4,
/// lambda_2(H) <= t lambda_2 / 2 (the ceiling-aware form of
/// lambda_2 / (2 lambda_k), which is recorded too), the spectrum mapping,
/// and phi(G) <= 40 C lambda_2 / sqrt(lambda_k) with
/// C = max(phi(H) / lambda_2(H), 1/10). n <= 14 for the exhaustive part;
/// throws when lambda_k is zero.
CertificateReport reduction_checks(const WeightedGraph& g, std::size_t k);

struct CrossingEstimate {
  double mean = 0.0;
  double stddev = 0.0;  ///< standard error of the mean
  std::size_t samples = 0;
};

/// Monte-Carlo estimate of cut_weight(S) / |S| in W^t: start uniformly in S,
/// take t lazy steps, count endings outside S.
CrossingEstimate monte_carlo_crossing(const WeightedGraph& g, const VertexSet& s, std::size_t t,
                                      std::size_t samples, std::uint64_t seed);

}  // namespace cheeger
