#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace modalfit {

using Index = std::ptrdiff_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed-sparse-column structure of the lower triangle of a symmetric matrix.
/// Row indices inside each column are strictly increasing and never above the diagonal.
struct SymPattern {
  Index n = 0;
  std::vector<Index> col_ptr;  // size n + 1
  std::vector<Index> row_idx;  // size nnz

  Index nonzeros() const { return static_cast<Index>(row_idx.size()); }

  /// Position of entry (row, col) with row >= col, or -1 if structurally zero.
  Index find(Index row, Index col) const;

  /// Builds the pattern of the given coordinates (either triangle, duplicates allowed).
  static std::shared_ptr<const SymPattern> from_coordinates(
      Index n, std::span<const std::pair<Index, Index>> coords);
};

/// Sparse symmetric matrix stored as the lower triangle in CSC form.
///
/// Matrices produced from one assembly share a single SymPattern object, so that
/// linear combinations are plain value-array operations.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;
  SparseSymMatrix(std::shared_ptr<const SymPattern> pattern, std::vector<double> values);

  /// Sums duplicate entries; entries from the upper triangle are mirrored.
  static SparseSymMatrix from_triplets(Index n, std::span<const Triplet> entries);
  /// Scatters entries into an existing pattern (summing duplicates).
  static SparseSymMatrix from_triplets(std::shared_ptr<const SymPattern> pattern,
                                       std::span<const Triplet> entries);
  static SparseSymMatrix identity(Index n);
  static SparseSymMatrix zeros_like(const SparseSymMatrix& other);
  /// Lower triangle of a dense symmetric matrix; entries with |a| == 0 are dropped.
  static SparseSymMatrix from_dense(const Matrix& dense);

  Index dim() const { return pattern_ ? pattern_->n : 0; }
  Index nonzeros() const { return static_cast<Index>(values_.size()); }
  const SymPattern& pattern() const { return *pattern_; }
  const std::shared_ptr<const SymPattern>& pattern_ptr() const { return pattern_; }
  std::span<const double> values() const { return values_; }
  bool shares_pattern(const SparseSymMatrix& other) const { return pattern_ == other.pattern_; }

  /// Entry (i, j) with symmetric semantics.
  double coeff(Index i, Index j) const;

  /// A * v with both triangles applied.
  Vector multiply(const Eigen::Ref<const Vector>& v) const;
  /// A * V, column by column.
  Matrix multiply_block(const Eigen::Ref<const Matrix>& v) const;

  /// v^T A v.
  double quadratic_form(const Eigen::Ref<const Vector>& v) const;

  Matrix to_dense() const;
  bool is_zero() const;
  double max_abs() const;

  /// this + alpha * other; both operands must share the same pattern object.
  SparseSymMatrix plus_scaled(double alpha, const SparseSymMatrix& other) const;
  SparseSymMatrix scaled(double alpha) const;

 private:
  std::shared_ptr<const SymPattern> pattern_;
  std::vector<double> values_;
};

}  // namespace modalfit
