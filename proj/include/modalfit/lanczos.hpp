#pragma once

#include <cstdint>
#include <memory>

#include "modalfit/cholesky.hpp"
#include "modalfit/sparse_matrix.hpp"

namespace modalfit {

struct LanczosOptions {
  Index count = 1;           // s: number of smallest eigenpairs wanted
  double tolerance = 1e-5;   // relative eigenvalue accuracy tau
  std::uint64_t seed = 1;    // start-vector seed
  Index max_basis = 0;       // 0: max(4s + 20, 100), always clipped to n
};

/// Output of shift-invert Lanczos on K - lambda M.
///
/// basis() = U_m is M-orthonormal and tridiagonal() = T_m = U_m^T M K^{-1} M U_m; the
/// s largest eigenvalues mu_i of T_m give eigenvalues() lambda_i = 1 / mu_i.
struct LanczosResult {
  Vector eigenvalues;      // lambda_1 <= ... <= lambda_s
  Matrix eigenvectors;     // n x s Ritz vectors, M-normalized
  Matrix basis;            // U_m, n x m
  Matrix mass_basis;       // M U_m
  Vector alpha;            // diagonal of T_m (m)
  Vector beta;             // off-diagonal of T_m (m - 1); zero where the start vector was renewed
  double residual_beta = 0.0;  // beta_m coupling U_m to the next Lanczos vector
  Vector error_bounds;     // beta_m |y_{m,i}| / mu_i for the reported pairs
  std::shared_ptr<const CholeskyFactor> stiffness_factor;
  Index steps = 0;         // m
  Index restarts = 0;      // fresh start vectors injected after an invariant subspace
  double tolerance = 0.0;

  Matrix tridiagonal() const;
};

/// The s smallest eigenpairs of K v = lambda M v (K, M SPD). One sparse Cholesky of K;
/// per step one solve with K and one product with M; full M-reorthogonalization.
///
/// Throws LanczosError (SubspaceExhausted when s > n, MaxIterations when the basis cap
/// is reached first; both carry the current estimates) and NotPositiveDefinite.
LanczosResult lanczos_smallest(const SparseSymMatrix& k, const SparseSymMatrix& m,
                               const LanczosOptions& options);

/// f_i = sqrt(lambda_i) / (2 pi) in Hz; throws InvalidArgument on negative input.
Vector frequencies_from_eigenvalues(const Vector& eigenvalues);

}  // namespace modalfit
