#pragma once

#include <vector>

#include "modalfit/sparse_matrix.hpp"

namespace modalfit {

enum class Ordering { Natural, ApproximateMinimumDegree };

/// Sparse Cholesky factor P A P^T = L L^T.
///
/// `order()[k]` is the original index eliminated at step k, i.e. row k of P A P^T is
/// row `order()[k]` of A. L is kept in CSC form with the diagonal first in each column.
class CholeskyFactor {
 public:
  Index dim() const { return n_; }
  const std::vector<Index>& order() const { return order_; }
  Index factor_nonzeros() const { return static_cast<Index>(lx_.size()); }

  /// Solves A x = b.
  Vector solve(const Eigen::Ref<const Vector>& b) const;
  /// Solves A X = B column by column.
  Matrix solve_block(const Eigen::Ref<const Matrix>& b) const;

  /// Dense copy of L (testing and debugging).
  Matrix lower_dense() const;
  /// Dense permutation matrix P with (P A P^T) = L L^T.
  Matrix permutation_dense() const;

 private:
  friend CholeskyFactor cholesky_factorize(const SparseSymMatrix&, Ordering);

  void solve_in_place(double* x, std::vector<double>& work) const;

  Index n_ = 0;
  std::vector<Index> order_;
  std::vector<Index> lp_;
  std::vector<Index> li_;
  std::vector<double> lx_;
};

/// Factorizes an SPD matrix. Throws NotPositiveDefinite naming the original index of
/// the first non-positive pivot.
CholeskyFactor cholesky_factorize(const SparseSymMatrix& a,
                                  Ordering ordering = Ordering::ApproximateMinimumDegree);

}  // namespace modalfit
