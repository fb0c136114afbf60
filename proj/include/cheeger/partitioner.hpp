#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cheeger/certificate.hpp"
#include "cheeger/expansion.hpp"
#include "cheeger/spectral.hpp"

namespace cheeger {

struct SweepResult {
  ExpansionStats best;
  SweepProfile profile;  ///< profile of the side that won
  bool negated = false;  ///< true when the winning order sorts -x
};

/// Minimum-expansion level set of x over prefixes of size <= max_size
/// (0 means n/2). Sorts descending with ties by index, runs on x and on -x
/// and keeps the better; on a tie x wins. Throws for a constant x.
SweepResult sweep_cut(const WeightedGraph& g, std::span<const double> x, std::size_t max_size = 0);

struct LevelSetResult {
  ExpansionStats best;
  std::size_t prefix = 0;      ///< size of the best level set
  std::size_t candidates = 0;  ///< number of prefixes examined
};

/// Best-phi prefix of the descending order of x among sizes <= cap (clamped
/// to n - 1). With positive_only, prefixes stop at the last positive entry so
/// only genuine level sets {v : x_v >= t}, t > 0, are considered. Throws when
/// no prefix qualifies.
LevelSetResult best_level_set(const WeightedGraph& g, std::span<const double> x, std::size_t cap,
                              bool positive_only = true);

/// Drop inequality x_a - x_b <= lambda * sum_{i<=a} x_i / w([1,a],[b,n])
/// over pairs a < b of the descending order of x: every pair when n <= 64,
/// otherwise `samples` random pairs. Pairs with w([1,a],[b,n]) = 0 are
/// vacuous and counted separately. No eigenpair precondition, so it doubles
/// as the negative fixture.
CertificateReport drop_inequality_scan(const WeightedGraph& g, std::span<const double> x,
                                       double lambda, std::size_t samples, std::uint64_t seed,
                                       Slack slack = {});

/// drop_inequality_scan after confirming ||L x - lambda x|| <= 1e-8 ||x||.
CertificateReport drop_lemma_check(const WeightedGraph& g, std::span<const double> x,
                                   double lambda, std::size_t samples, std::uint64_t seed);

enum class JumpRule {
  kVertex,          ///< m' = ceil(m (1 + phi^V(m))) = m + N_half(m)
  kEdge,            ///< m' = ceil(m (1 + phi(m) / 2))
  kPagerankVertex,  ///< m' = ceil(m (1 + g)), g a fixed growth rate such as phi^V(G)
  kPagerankEdge,    ///< m' = ceil(m (1 + phi(m)))
};

const char* to_string(JumpRule rule);

struct JumpingSequence {
  std::vector<Vertex> order;
  JumpRule rule = JumpRule::kVertex;
  /// Prefix sizes m_0 < m_1 < ...; the last entry is the first one above
  /// the cap (it may exceed n).
  std::vector<std::size_t> indices;
  /// Statistics of [1, m_i] for every index within the cap.
  std::vector<ExpansionStats> stats;
  /// w([1, m_i], [m_{i+1}, n]) for every i with stats and m_{i+1} <= n.
  std::vector<double> crossing;
  /// Steps whose crossing weight fell below m_i phi(m_i) / 2. Only the vertex
  /// and edge rules guarantee none (for m_i <= n/2); for the pagerank rules
  /// the count is informational.
  std::size_t half_boundary_failures = 0;
};

/// Builds the sequence from `start` until an index exceeds `cap` (cap <= n).
/// Each step advances by at least one. Throws InvariantViolation when the
/// vertex or edge rule breaks its half-boundary guarantee at some m_i <= n/2.
JumpingSequence jumping_sequence(const WeightedGraph& g, std::span<const Vertex> order,
                                 JumpRule rule, std::size_t cap, std::size_t start = 1,
                                 double growth = 0.0);

/// Executable form of the product bound with constant 32: on the vertex-rule
/// sequences of x and -x some m_i <= n/2 has Psi(m_i) <= 32 lambda or
/// phi(m_i) <= 32 lambda. Also checks the per-step drop bound
/// x_{m_i} - x_{m_{i+1}} <= 2 lambda xbar_{m_i} / phi(m_i) along both
/// sequences and, for n <= 20, lambda >= min(Psi(G), phi(G)) / 32 by
/// exhaustion. n >= 2.
CertificateReport theorem_product_certificate(const WeightedGraph& g);
CertificateReport theorem_product_certificate(const WeightedGraph& g, const EigenPair& pair);

/// ((c + h) / (1 + h)) (phi / (phi - 2 lambda c)).
double gao_claim_lhs(double c, double h, double phi, double lambda);

/// Samples (c, h, phi, lambda) with 2 <= c <= 4, h, phi in (0, 1],
/// 32 lambda <= min(h phi, phi) and checks
/// ((c + h) / (1 + h)) (phi / (phi - 2 lambda c)) <= c.
CertificateReport gao_claim_check(std::size_t samples, std::uint64_t seed);

/// Edge-rule sequence on `order` (up to n - 1); counts terms with
/// theta <= phi(m_i) <= 2 theta and asserts count <= 16 k / phi_k.
/// Requires theta < phi_k / 4.
CertificateReport lemma_jump_check(const WeightedGraph& g, std::span<const Vertex> order,
                                   double theta, std::size_t k, double phi_k);

/// k-way bound with constants 256 and 1024. phi_k is computed exhaustively
/// when not supplied (n <= 14, or 12 for k = 4). When phi_k^2 < 1024 lambda
/// the report passes in the trivial regime.
CertificateReport theorem_kway_certificate(const WeightedGraph& g, std::size_t k,
                                           std::optional<double> phi_k = std::nullopt);
CertificateReport theorem_kway_certificate(const WeightedGraph& g, std::size_t k,
                                           const EigenPair& pair,
                                           std::optional<double> phi_k = std::nullopt);

struct CurrentSweepResult {
  ExpansionStats best;
  RealVector voltages;
};

/// Solves L x = n chi_s - 1, sorts by voltage and returns the best prefix of
/// size <= max_size (0 means n/2).
CurrentSweepResult current_sweep(const WeightedGraph& g, Vertex s, std::size_t max_size = 0);

}  // namespace cheeger
