#include "modalfit/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

void check_index(Index n, Index row, Index col) {
  if (row < 0 || row >= n || col < 0 || col >= n) {
    throw IndexError("entry (" + std::to_string(row) + ", " + std::to_string(col) +
                     ") outside a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
}

}  // namespace

Index SymPattern::find(Index row, Index col) const {
  if (row < col) std::swap(row, col);
  const auto first = row_idx.begin() + col_ptr[col];
  const auto last = row_idx.begin() + col_ptr[col + 1];
  const auto it = std::lower_bound(first, last, row);
  if (it == last || *it != row) return -1;
  return static_cast<Index>(it - row_idx.begin());
}

std::shared_ptr<const SymPattern> SymPattern::from_coordinates(
    Index n, std::span<const std::pair<Index, Index>> coords) {
  if (n < 0) throw InvalidArgument("negative matrix dimension");
  std::vector<std::vector<Index>> columns(static_cast<std::size_t>(n));
  for (auto [r, c] : coords) {
    check_index(n, r, c);
    if (r < c) std::swap(r, c);
    columns[static_cast<std::size_t>(c)].push_back(r);
  }
  auto pattern = std::make_shared<SymPattern>();
  pattern->n = n;
  pattern->col_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index j = 0; j < n; ++j) {
    auto& col = columns[static_cast<std::size_t>(j)];
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
    pattern->row_idx.insert(pattern->row_idx.end(), col.begin(), col.end());
    pattern->col_ptr[static_cast<std::size_t>(j) + 1] = pattern->nonzeros();
  }
  return pattern;
}

SparseSymMatrix::SparseSymMatrix(std::shared_ptr<const SymPattern> pattern,
                                 std::vector<double> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (!pattern_) throw InvalidArgument("null sparsity pattern");
  if (static_cast<Index>(values_.size()) != pattern_->nonzeros()) {
    throw DimensionError("value array size " + std::to_string(values_.size()) +
                         " does not match pattern nonzeros " +
                         std::to_string(pattern_->nonzeros()));
  }
}

SparseSymMatrix SparseSymMatrix::from_triplets(Index n, std::span<const Triplet> entries) {
  std::vector<std::pair<Index, Index>> coords;
  coords.reserve(entries.size());
  for (const auto& t : entries) coords.emplace_back(t.row, t.col);
  return from_triplets(SymPattern::from_coordinates(n, coords), entries);
}

SparseSymMatrix SparseSymMatrix::from_triplets(std::shared_ptr<const SymPattern> pattern,
                                               std::span<const Triplet> entries) {
  std::vector<double> values(static_cast<std::size_t>(pattern->nonzeros()), 0.0);
  for (const auto& t : entries) {
    check_index(pattern->n, t.row, t.col);
    const Index p = pattern->find(t.row, t.col);
    if (p < 0) {
      throw InvalidArgument("entry (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                            ") is not in the sparsity pattern");
    }
    values[static_cast<std::size_t>(p)] += t.value;
  }
  return SparseSymMatrix(std::move(pattern), std::move(values));
}

SparseSymMatrix SparseSymMatrix::identity(Index n) {
  std::vector<Triplet> diag;
  diag.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) diag.push_back({i, i, 1.0});
  return from_triplets(n, diag);
}

SparseSymMatrix SparseSymMatrix::zeros_like(const SparseSymMatrix& other) {
  return SparseSymMatrix(other.pattern_,
                         std::vector<double>(static_cast<std::size_t>(other.nonzeros()), 0.0));
}

SparseSymMatrix SparseSymMatrix::from_dense(const Matrix& dense) {
  if (dense.rows() != dense.cols()) throw DimensionError("dense matrix is not square");
  std::vector<Triplet> entries;
  for (Index j = 0; j < dense.cols(); ++j) {
    for (Index i = j; i < dense.rows(); ++i) {
      if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
    }
  }
  return from_triplets(dense.rows(), entries);
}

double SparseSymMatrix::coeff(Index i, Index j) const {
  check_index(dim(), i, j);
  const Index p = pattern_->find(i, j);
  return p < 0 ? 0.0 : values_[static_cast<std::size_t>(p)];
}

Vector SparseSymMatrix::multiply(const Eigen::Ref<const Vector>& v) const {
  const Index n = dim();
  if (v.size() != n) {
    throw DimensionError("matvec: vector length " + std::to_string(v.size()) +
                         " does not match dimension " + std::to_string(n));
  }
  Vector y = Vector::Zero(n);
  const auto& cp = pattern_->col_ptr;
  const auto& ri = pattern_->row_idx;
  for (Index j = 0; j < n; ++j) {
    const double vj = v[j];
    double acc = 0.0;
    for (Index p = cp[j]; p < cp[j + 1]; ++p) {
      const Index i = ri[p];
      const double a = values_[static_cast<std::size_t>(p)];
      y[i] += a * vj;
      if (i != j) acc += a * v[i];
    }
    y[j] += acc;
  }
  return y;
}

Matrix SparseSymMatrix::multiply_block(const Eigen::Ref<const Matrix>& v) const {
  if (v.rows() != dim()) {
    throw DimensionError("matvec: block row count " + std::to_string(v.rows()) +
                         " does not match dimension " + std::to_string(dim()));
  }
  Matrix y(v.rows(), v.cols());
  for (Index c = 0; c < v.cols(); ++c) y.col(c) = multiply(Vector(v.col(c)));
  return y;
}

double SparseSymMatrix::quadratic_form(const Eigen::Ref<const Vector>& v) const {
  return v.dot(multiply(v));
}

Matrix SparseSymMatrix::to_dense() const {
  const Index n = dim();
  Matrix d = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index p = pattern_->col_ptr[j]; p < pattern_->col_ptr[j + 1]; ++p) {
      const Index i = pattern_->row_idx[p];
      d(i, j) = values_[static_cast<std::size_t>(p)];
      d(j, i) = values_[static_cast<std::size_t>(p)];
    }
  }
  return d;
}

bool SparseSymMatrix::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double a) { return a == 0.0; });
}

double SparseSymMatrix::max_abs() const {
  double m = 0.0;
  for (double a : values_) m = std::max(m, std::abs(a));
  return m;
}

SparseSymMatrix SparseSymMatrix::plus_scaled(double alpha, const SparseSymMatrix& other) const {
  if (!shares_pattern(other)) {
    throw InvalidArgument("plus_scaled: operands do not share a sparsity pattern");
  }
  std::vector<double> v = values_;
  for (std::size_t p = 0; p < v.size(); ++p) v[p] += alpha * other.values_[p];
  return SparseSymMatrix(pattern_, std::move(v));
}

SparseSymMatrix SparseSymMatrix::scaled(double alpha) const {
  std::vector<double> v = values_;
  for (double& a : v) a *= alpha;
  return SparseSymMatrix(pattern_, std::move(v));
}

}  // namespace modalfit
