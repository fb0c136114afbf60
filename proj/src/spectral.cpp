#include "cheeger/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "cheeger/errors.hpp"

namespace cheeger {

namespace {

using Operator = std::function<void(std::span<const double>, std::span<double>)>;

void require_dimension(const WeightedGraph& g, std::span<const double> x) {
  if (x.size() != g.num_vertices()) {
    throw PreconditionError("vector length " + std::to_string(x.size()) +
                            " does not match vertex count " + std::to_string(g.num_vertices()));
  }
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

void project_out(std::span<double> w, const std::vector<RealVector>& basis) {
  for (const RealVector& q : basis) axpy(-dot(q, w), q, w);
}

struct TopPair {
  double theta;
  RealVector vector;
  double residual;
};

// Largest eigenpair of a symmetric operator on the orthogonal complement of
// `deflate` (orthonormal). Lanczos with full reorthogonalization; restarts
// from the current Ritz vector when the basis fills without converging.
TopPair lanczos_top(const Operator& op, std::size_t dim, const std::vector<RealVector>& deflate,
                    const LanczosOptions& options, std::size_t max_iterations,
                    std::uint64_t stream) {
  if (deflate.size() >= dim) throw PreconditionError("no room left for another eigenvector");
  const std::size_t available = dim - deflate.size();
  const std::size_t basis_cap = dim <= 1024 ? available : std::min<std::size_t>(available, 160);

  std::mt19937_64 rng(options.seed ^ (stream * 0xbf58476d1ce4e5b9ULL));
  RealVector start(dim);
  for (double& v : start) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;

  std::size_t applied = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  RealVector w(dim);

  while (true) {
    project_out(start, deflate);
    project_out(start, deflate);
    double nrm = norm2(start);
    if (nrm == 0.0) {
      // Start fell inside the deflated space; perturb deterministically.
      for (double& v : start) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
      continue;
    }
    scale(1.0 / nrm, start);

    std::vector<RealVector> basis{start};
    std::vector<double> alpha, beta;
    while (true) {
      const RealVector& v = basis.back();
      op(v, w);
      ++applied;
      const double a = dot(w, v);
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt against everything.
      for (int pass = 0; pass < 2; ++pass) {
        project_out(w, deflate);
        project_out(w, basis);
      }
      const double b = norm2(w);
      const std::size_t m = basis.size();
      const bool exhausted = m >= basis_cap || b <= 1e-13;
      const bool check = exhausted || m % 4 == 0 || applied >= max_iterations;
      if (check) {
        Eigen::VectorXd diag(m), off(m > 1 ? m - 1 : 0);
        for (std::size_t i = 0; i < m; ++i) diag[i] = alpha[i];
        for (std::size_t i = 0; i + 1 < m; ++i) off[i] = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
        const Eigen::VectorXd s = tri.eigenvectors().col(m - 1);
        const double estimate = b * std::abs(s[m - 1]);
        if (exhausted || estimate <= 0.1 * options.tol || applied >= max_iterations) {
          RealVector y(dim, 0.0);
          for (std::size_t i = 0; i < m; ++i) axpy(s[i], basis[i], y);
          project_out(y, deflate);
          scale(1.0 / norm2(y), y);
          RealVector by(dim);
          op(y, by);
          ++applied;
          const double theta = dot(y, by);
          axpy(-theta, y, by);
          const double residual = norm2(by);
          best_residual = std::min(best_residual, residual);
          if (residual <= options.tol) return {theta, std::move(y), residual};
          if (applied >= max_iterations) {
            throw ConvergenceError("Lanczos did not converge in " +
                                       std::to_string(max_iterations) + " operator applications",
                                   best_residual);
          }
          start = std::move(y);
          break;  // restart
        }
      }
      beta.push_back(b);
      RealVector next(w);
      scale(1.0 / b, next);
      basis.push_back(std::move(next));
    }
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

RealVector apply_laplacian(const WeightedGraph& g, std::span<const double> x) {
  require_dimension(g, x);
  RealVector out(x.size());
  for (Vertex i = 0; i < x.size(); ++i) {
    double ax = 0.0;
    for (const Neighbor& nb : g.neighbors(i)) ax += nb.weight * x[nb.to];
    out[i] = x[i] - ax;
  }
  return out;
}

RealVector apply_lazy_walk(const WeightedGraph& g, std::span<const double> x) {
  require_dimension(g, x);
  RealVector out(x.size());
  for (Vertex i = 0; i < x.size(); ++i) {
    double ax = 0.0;
    for (const Neighbor& nb : g.neighbors(i)) ax += nb.weight * x[nb.to];
    // x - (x - Ax)/2 with the degree of i taken as exactly one.
    out[i] = 0.5 * x[i] + 0.5 * ax;
  }
  return out;
}

double laplacian_quadratic_form(const WeightedGraph& g, std::span<const double> x) {
  require_dimension(g, x);
  double total = 0.0;
  for (Vertex i = 0; i < x.size(); ++i) {
    for (const Neighbor& nb : g.neighbors(i)) {
      if (nb.to > i) {
        const double d = x[i] - x[nb.to];
        total += nb.weight * d * d;
      }
    }
  }
  return total;
}

double rayleigh_quotient(const WeightedGraph& g, std::span<const double> x) {
  const double denom = dot(x, x);
  if (!(denom > 0.0)) throw PreconditionError("Rayleigh quotient of the zero vector");
  return laplacian_quadratic_form(g, x) / denom;
}

std::vector<EigenPair> eigenpairs(const WeightedGraph& g, std::size_t k,
                                  const LanczosOptions& options) {
  const std::size_t n = g.num_vertices();
  if (k < 1 || k > n) throw PreconditionError("eigenpairs needs 1 <= k <= n");
  if (!(options.tol > 0.0)) throw PreconditionError("tolerance must be positive");
  const std::size_t cap = options.max_iterations ? options.max_iterations : 50 * k + 1000;

  std::vector<EigenPair> pairs;
  RealVector ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
  pairs.push_back({0.0, ones, norm2(apply_laplacian(g, ones))});

  std::vector<RealVector> deflate{ones};
  Operator shifted = [&g](std::span<const double> x, std::span<double> y) {
    for (Vertex i = 0; i < x.size(); ++i) {
      double ax = 0.0;
      for (const Neighbor& nb : g.neighbors(i)) ax += nb.weight * x[nb.to];
      y[i] = x[i] + ax;  // (2I - L) x = x + A x
    }
  };
  for (std::size_t j = 1; j < k; ++j) {
    TopPair top = lanczos_top(shifted, n, deflate, options, cap, j);
    const double lambda = std::clamp(2.0 - top.theta, 0.0, 2.0);
    deflate.push_back(top.vector);
    pairs.push_back({lambda, std::move(top.vector), top.residual});
  }
  std::stable_sort(pairs.begin() + 1, pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return pairs;
}

EigenPair second_eigenpair(const WeightedGraph& g, const LanczosOptions& options) {
  if (g.num_vertices() < 2) throw PreconditionError("lambda_2 needs at least 2 vertices");
  return eigenpairs(g, 2, options)[1];
}

RestrictedSpectrum restricted_eigenvalue(const WeightedGraph& g, const VertexSet& s,
                                         const LanczosOptions& options) {
  const std::size_t n = g.num_vertices();
  if (s.universe() != n) throw PreconditionError("vertex set universe does not match the graph");
  if (s.is_full()) throw PreconditionError("restricted eigenvalue needs S != V");
  const auto& members = s.members();
  const std::size_t m = members.size();
  std::vector<std::size_t> local(n, n);
  for (std::size_t i = 0; i < m; ++i) local[members[i]] = i;

  Operator shifted = [&](std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < m; ++i) {
      double ax = 0.0;
      for (const Neighbor& nb : g.neighbors(members[i])) {
        if (local[nb.to] < n) ax += nb.weight * x[local[nb.to]];
      }
      y[i] = x[i] + ax;  // (2I - L_S) x, degrees being one
    }
  };
  const std::size_t cap = options.max_iterations ? options.max_iterations : 1050;
  TopPair top = m == 1 ? TopPair{1.0, RealVector{1.0}, 0.0}
                       : lanczos_top(shifted, m, {}, options, cap, 1);
  double sum = std::accumulate(top.vector.begin(), top.vector.end(), 0.0);
  if (sum < 0.0) scale(-1.0, top.vector);
  RealVector full(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) full[members[i]] = top.vector[i];
  return {s, std::clamp(2.0 - top.theta, 0.0, 2.0), std::move(full), top.residual};
}

RealVector laplacian_solve(const WeightedGraph& g, std::span<const double> b, double tol,
                           std::size_t max_iterations) {
  require_dimension(g, b);
  const std::size_t n = b.size();
  double l1 = 0.0, sum = 0.0;
  for (double v : b) {
    l1 += std::abs(v);
    sum += v;
  }
  if (std::abs(sum) > 1e-9 * std::max(1.0, l1)) {
    throw PreconditionError("right-hand side must sum to zero");
  }
  const double mean = sum / static_cast<double>(n);
  RealVector r(b.begin(), b.end());
  for (double& v : r) v -= mean;
  RealVector x(n, 0.0);
  const double bnorm = norm2(r);
  if (bnorm == 0.0) return x;
  const std::size_t cap = max_iterations ? max_iterations : std::max<std::size_t>(10 * n, 1000);

  auto center = [n](RealVector& v) {
    const double avg = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    for (double& e : v) e -= avg;
  };
  RealVector p = r;
  double rr = dot(r, r);
  for (std::size_t it = 0; it < cap; ++it) {
    RealVector lp = apply_laplacian(g, p);
    const double curvature = dot(p, lp);
    if (!(curvature > 0.0)) break;
    const double step = rr / curvature;
    axpy(step, p, x);
    axpy(-step, lp, r);
    center(r);
    const double rr_next = dot(r, r);
    if (std::sqrt(rr_next) <= tol * bnorm) {
      center(x);
      // Confirm on the true residual; recursion refines if drift crept in.
      RealVector lx = apply_laplacian(g, x);
      double true_res = 0.0;
      for (std::size_t i = 0; i < n; ++i) true_res += (lx[i] - (b[i] - mean)) * (lx[i] - (b[i] - mean));
      if (std::sqrt(true_res) <= tol * bnorm) return x;
      r.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) r[i] = (b[i] - mean) - lx[i];
      center(r);
      p = r;
      rr = dot(r, r);
      continue;
    }
    const double ratio = rr_next / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + ratio * p[i];
    rr = rr_next;
  }
  RealVector lx = apply_laplacian(g, x);
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) res += (lx[i] - (b[i] - mean)) * (lx[i] - (b[i] - mean));
  throw ConvergenceError("conjugate gradients did not converge", std::sqrt(res) / bnorm);
}

std::vector<double> dense_laplacian(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<double> m(n * n, 0.0);
  for (Vertex i = 0; i < n; ++i) {
    m[i * n + i] = 1.0;
    for (const Neighbor& nb : g.neighbors(i)) m[i * n + nb.to] -= nb.weight;
  }
  return m;
}

}  // namespace cheeger
