#include "modalfit/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

// Relative size of beta below which the Krylov space is treated as invariant.
constexpr double kBreakdown = 1e-10;

struct RitzCheck {
  Vector mu;       // s largest Ritz values, descending
  Matrix vectors;  // matching eigenvectors of T_j, columns
  Vector bounds;   // beta |last component| / mu
};

RitzCheck ritz(const Vector& alpha, const Vector& beta, Index j, Index s, double beta_next) {
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  const Vector diag = alpha.head(j);
  const Vector sub = beta.head(j - 1);
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const Index take = std::min(s, j);
  RitzCheck rc{Vector(take), Matrix(j, take), Vector(take)};
  for (Index i = 0; i < take; ++i) {
    const Index col = j - 1 - i;
    rc.mu[i] = es.eigenvalues()[col];
    rc.vectors.col(i) = es.eigenvectors().col(col);
    rc.bounds[i] = std::abs(beta_next * es.eigenvectors()(j - 1, col)) / std::abs(rc.mu[i]);
  }
  return rc;
}

Vector estimates(const RitzCheck& rc) {
  Vector lambda(rc.mu.size());
  for (Index i = 0; i < rc.mu.size(); ++i) lambda[i] = 1.0 / rc.mu[i];
  return lambda;
}

}  // namespace

Matrix LanczosResult::tridiagonal() const {
  const Index m = alpha.size();
  Matrix t = Matrix::Zero(m, m);
  t.diagonal() = alpha;
  for (Index i = 0; i + 1 < m; ++i) {
    t(i, i + 1) = beta[i];
    t(i + 1, i) = beta[i];
  }
  return t;
}

LanczosResult lanczos_smallest(const SparseSymMatrix& k, const SparseSymMatrix& m,
                               const LanczosOptions& options) {
  const Index n = k.dim();
  const Index s = options.count;
  if (m.dim() != n) throw DimensionError("lanczos: K and M dimensions differ");
  if (s < 1) throw InvalidArgument("lanczos: eigenpair count must be at least 1");
  if (!(options.tolerance > 0.0)) throw InvalidArgument("lanczos: tolerance must be positive");
  if (s > n) {
    throw LanczosError(LanczosError::Kind::SubspaceExhausted,
                       "lanczos: " + std::to_string(s) + " eigenpairs requested from a pencil of size " +
                           std::to_string(n),
                       Vector());
  }
  Index cap = options.max_basis > 0 ? options.max_basis : std::max<Index>(4 * s + 20, 100);
  cap = std::min(cap, n);
  if (cap < s) throw InvalidArgument("lanczos: basis cap smaller than eigenpair count");

  auto factor = std::make_shared<const CholeskyFactor>(cholesky_factorize(k));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  Matrix u(n, cap), mu(n, cap);
  Vector alpha = Vector::Zero(cap), beta = Vector::Zero(cap);
  Index restarts = 0;

  auto orthogonalize = [&](Vector& w, Index cols) {
    for (int pass = 0; pass < 2; ++pass) {
      if (cols == 0) break;
      const Vector c = mu.leftCols(cols).transpose() * w;
      w.noalias() -= u.leftCols(cols) * c;
    }
  };

  // Fresh M-normalized start vector, M-orthogonal to the first `cols` basis vectors and
  // smoothed by one shift-invert application. Returns false if nothing is left.
  auto fresh_start = [&](Index cols, Vector& w, Vector& mw) {
    Vector r(n);
    for (Index i = 0; i < n; ++i) r[i] = uniform(rng);
    w = factor->solve(m.multiply(r));
    const double before = std::sqrt(std::max(0.0, w.dot(m.multiply(w))));
    orthogonalize(w, cols);
    mw = m.multiply(w);
    const double norm = std::sqrt(std::max(0.0, w.dot(mw)));
    if (!(norm > kBreakdown * before)) return false;
    w /= norm;
    mw /= norm;
    return true;
  };

  Vector w, mw;
  fresh_start(0, w, mw);
  double scale = 0.0;  // running max |alpha|, the magnitude of the operator seen so far
  for (Index j = 0;; ++j) {
    u.col(j) = w;
    mu.col(j) = mw;
    w = factor->solve(mw);
    alpha[j] = mw.dot(w);
    scale = std::max(scale, std::abs(alpha[j]));
    w.noalias() -= alpha[j] * u.col(j);
    if (j > 0) w.noalias() -= beta[j - 1] * u.col(j - 1);
    orthogonalize(w, j + 1);
    mw = m.multiply(w);
    double b = std::sqrt(std::max(0.0, w.dot(mw)));
    const bool invariant = b <= kBreakdown * scale;
    if (invariant) b = 0.0;

    const Index steps = j + 1;
    const RitzCheck rc = ritz(alpha, beta, steps, s, b);
    const bool converged = steps >= s && (rc.bounds.array() <= options.tolerance).all();
    if (converged) {
      LanczosResult res;
      res.steps = steps;
      res.restarts = restarts;
      res.tolerance = options.tolerance;
      res.alpha = alpha.head(steps);
      res.beta = beta.head(steps - 1);
      res.residual_beta = b;
      res.basis = u.leftCols(steps);
      res.mass_basis = mu.leftCols(steps);
      res.eigenvalues = estimates(rc);
      res.eigenvectors = res.basis * rc.vectors;
      res.error_bounds = rc.bounds;
      res.stiffness_factor = std::move(factor);
      return res;
    }
    if (steps == cap) {
      if (cap == n) {
        throw LanczosError(LanczosError::Kind::SubspaceExhausted,
                           "lanczos: basis spans the whole space without meeting the tolerance",
                           estimates(rc));
      }
      throw LanczosError(LanczosError::Kind::MaxIterations,
                         "lanczos: no convergence within " + std::to_string(cap) + " steps",
                         estimates(rc));
    }
    if (invariant) {
      beta[j] = 0.0;
      ++restarts;
      if (!fresh_start(steps, w, mw)) {
        throw LanczosError(LanczosError::Kind::SubspaceExhausted,
                           "lanczos: invariant subspace exhausted with fewer than " +
                               std::to_string(s) + " eigenpairs",
                           estimates(rc));
      }
    } else {
      beta[j] = b;
      w /= b;
      mw /= b;
    }
  }
}

Vector frequencies_from_eigenvalues(const Vector& eigenvalues) {
  Vector f(eigenvalues.size());
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    if (eigenvalues[i] < 0.0) {
      throw InvalidArgument("negative eigenvalue " + std::to_string(eigenvalues[i]) +
                            " at index " + std::to_string(i) + ": pencil is not definite");
    }
    f[i] = std::sqrt(eigenvalues[i]) / (2.0 * std::numbers::pi);
  }
  return f;
}

}  // namespace modalfit
