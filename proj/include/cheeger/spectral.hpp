#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cheeger/graph.hpp"

namespace cheeger {

/// Eigenpair of L = I - A. `vector` has unit 2-norm and
/// residual = ||L v - value v||_2.
struct EigenPair {
  double value = 0.0;
  RealVector vector;
  double residual = 0.0;
};

/// Smallest eigenpair of L_S, the principal submatrix of L on S. The vector
/// is indexed by all n vertices and vanishes outside S.
struct RestrictedSpectrum {
  VertexSet set;
  double lambda_s = 0.0;
  RealVector vector;
  double residual = 0.0;
};

struct LanczosOptions {
  double tol = 1e-10;              ///< target residual of each pair
  std::size_t max_iterations = 0;  ///< operator applications per pair; 0 means 50 k + 1000
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

RealVector apply_laplacian(const WeightedGraph& g, std::span<const double> x);

/// W x = x - L x / 2.
RealVector apply_lazy_walk(const WeightedGraph& g, std::span<const double> x);

/// x^T L x as sum over edges of w_ij (x_i - x_j)^2, so it is never negative.
double laplacian_quadratic_form(const WeightedGraph& g, std::span<const double> x);

/// x^T L x / x^T x. Throws PreconditionError for the zero vector.
double rayleigh_quotient(const WeightedGraph& g, std::span<const double> x);

/// lambda_1 ... lambda_k, ascending.
///
/// lambda_1 is pinned to (0, 1/sqrt(n)). Each further pair comes from its own
/// Lanczos run on 2I - L with full reorthogonalization, kept orthogonal to the
/// all-ones vector and to every pair found before it; this is what lets
/// repeated eigenvalues (complete graphs, hypercubes) come out one copy at a
/// time. Throws ConvergenceError when a run exhausts its iteration budget.
std::vector<EigenPair> eigenpairs(const WeightedGraph& g, std::size_t k,
                                  const LanczosOptions& options = {});

/// Convenience: the pair lambda_2, v_2.
EigenPair second_eigenpair(const WeightedGraph& g, const LanczosOptions& options = {});

/// lambda_S and v_S, with v_S made nonnegative in sum (it is a Perron vector
/// of the restricted walk, so its entries share one sign).
RestrictedSpectrum restricted_eigenvalue(const WeightedGraph& g, const VertexSet& s,
                                         const LanczosOptions& options = {});

/// Solves L x = b on the complement of the all-ones vector by projected
/// conjugate gradients. b must sum to zero within 1e-9 * max(1, ||b||_1).
/// The returned x sums to zero and meets ||L x - b|| <= tol ||b||.
RealVector laplacian_solve(const WeightedGraph& g, std::span<const double> b, double tol = 1e-10,
                           std::size_t max_iterations = 0);

/// Dense symmetric matrix of L, row-major. For oracles and small instances.
std::vector<double> dense_laplacian(const WeightedGraph& g);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace cheeger
