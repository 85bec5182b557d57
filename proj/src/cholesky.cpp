#include "modalfit/cholesky.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

std::vector<Index> amd_order(const SparseSymMatrix& a) {
  const Index n = a.dim();
  const auto& pat = a.pattern();
  std::vector<Eigen::Triplet<double, int>> entries;
  entries.reserve(static_cast<std::size_t>(2 * pat.nonzeros()));
  for (Index j = 0; j < n; ++j) {
    for (Index p = pat.col_ptr[j]; p < pat.col_ptr[j + 1]; ++p) {
      const auto i = static_cast<int>(pat.row_idx[p]);
      entries.emplace_back(i, static_cast<int>(j), 1.0);
      if (i != j) entries.emplace_back(static_cast<int>(j), i, 1.0);
    }
  }
  Eigen::SparseMatrix<double, Eigen::ColMajor, int> full(static_cast<int>(n), static_cast<int>(n));
  full.setFromTriplets(entries.begin(), entries.end());
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> perm;
  Eigen::AMDOrdering<int>()(full, perm);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = perm.indices()[k];
  return order;
}

// Upper triangle of C = P A P^T in CSC form.
struct UpperCsc {
  std::vector<Index> cp, ri;
  std::vector<double> vx;
};

UpperCsc permuted_upper(const SparseSymMatrix& a, const std::vector<Index>& pos) {
  const Index n = a.dim();
  const auto& pat = a.pattern();
  const auto vals = a.values();
  UpperCsc c;
  c.cp.assign(static_cast<std::size_t>(n) + 1, 0);
  for (Index j = 0; j < n; ++j) {
    for (Index p = pat.col_ptr[j]; p < pat.col_ptr[j + 1]; ++p) {
      const Index i = pos[static_cast<std::size_t>(pat.row_idx[p])];
      const Index k = pos[static_cast<std::size_t>(j)];
      ++c.cp[static_cast<std::size_t>(std::max(i, k)) + 1];
    }
  }
  std::partial_sum(c.cp.begin(), c.cp.end(), c.cp.begin());
  c.ri.resize(static_cast<std::size_t>(c.cp.back()));
  c.vx.resize(static_cast<std::size_t>(c.cp.back()));
  std::vector<Index> next(c.cp.begin(), c.cp.end() - 1);
  for (Index j = 0; j < n; ++j) {
    for (Index p = pat.col_ptr[j]; p < pat.col_ptr[j + 1]; ++p) {
      Index i = pos[static_cast<std::size_t>(pat.row_idx[p])];
      Index k = pos[static_cast<std::size_t>(j)];
      if (i > k) std::swap(i, k);
      const Index q = next[static_cast<std::size_t>(k)]++;
      c.ri[static_cast<std::size_t>(q)] = i;
      c.vx[static_cast<std::size_t>(q)] = vals[static_cast<std::size_t>(p)];
    }
  }
  return c;
}

std::vector<Index> elimination_tree(const UpperCsc& c, Index n) {
  std::vector<Index> parent(static_cast<std::size_t>(n), -1);
  std::vector<Index> ancestor(static_cast<std::size_t>(n), -1);
  for (Index k = 0; k < n; ++k) {
    for (Index p = c.cp[k]; p < c.cp[k + 1]; ++p) {
      Index i = c.ri[p];
      while (i != -1 && i < k) {
        const Index next = ancestor[i];
        ancestor[i] = k;
        if (next == -1) parent[i] = k;
        i = next;
      }
    }
  }
  return parent;
}

// Nonzero pattern of row k of L (excluding the diagonal), returned in stack[top..n).
Index row_reach(const UpperCsc& c, Index k, const std::vector<Index>& parent,
                std::vector<Index>& stack, std::vector<Index>& mark, Index n) {
  Index top = n;
  mark[k] = k;
  for (Index p = c.cp[k]; p < c.cp[k + 1]; ++p) {
    Index i = c.ri[p];
    if (i > k) continue;
    Index len = 0;
    for (; mark[i] != k; i = parent[i]) {
      stack[len++] = i;
      mark[i] = k;
    }
    while (len > 0) stack[--top] = stack[--len];
  }
  return top;
}

}  // namespace

CholeskyFactor cholesky_factorize(const SparseSymMatrix& a, Ordering ordering) {
  const Index n = a.dim();
  CholeskyFactor f;
  f.n_ = n;
  if (ordering == Ordering::ApproximateMinimumDegree && n > 0) {
    f.order_ = amd_order(a);
  } else {
    f.order_.resize(static_cast<std::size_t>(n));
    std::iota(f.order_.begin(), f.order_.end(), Index{0});
  }
  std::vector<Index> pos(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) pos[static_cast<std::size_t>(f.order_[k])] = k;

  const UpperCsc c = permuted_upper(a, pos);
  const auto parent = elimination_tree(c, n);

  std::vector<Index> stack(static_cast<std::size_t>(n));
  std::vector<Index> mark(static_cast<std::size_t>(n), -1);

  // Symbolic: column counts of L.
  std::vector<Index> counts(static_cast<std::size_t>(n), 1);
  for (Index k = 0; k < n; ++k) {
    for (Index t = row_reach(c, k, parent, stack, mark, n); t < n; ++t) ++counts[stack[t]];
  }
  f.lp_.assign(static_cast<std::size_t>(n) + 1, 0);
  std::partial_sum(counts.begin(), counts.end(), f.lp_.begin() + 1);
  f.li_.resize(static_cast<std::size_t>(f.lp_.back()));
  f.lx_.resize(static_cast<std::size_t>(f.lp_.back()));

  // Numeric: up-looking, one row of L per step.
  std::vector<Index> fill(f.lp_.begin(), f.lp_.end() - 1);
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  std::fill(mark.begin(), mark.end(), -1);
  for (Index k = 0; k < n; ++k) {
    const Index top = row_reach(c, k, parent, stack, mark, n);
    x[k] = 0.0;
    for (Index p = c.cp[k]; p < c.cp[k + 1]; ++p) {
      if (c.ri[p] <= k) x[c.ri[p]] = c.vx[p];
    }
    double d = x[k];
    x[k] = 0.0;
    for (Index t = top; t < n; ++t) {
      const Index i = stack[t];
      const double lki = x[i] / f.lx_[f.lp_[i]];
      x[i] = 0.0;
      for (Index p = f.lp_[i] + 1; p < fill[i]; ++p) x[f.li_[p]] -= f.lx_[p] * lki;
      d -= lki * lki;
      const Index p = fill[i]++;
      f.li_[p] = k;
      f.lx_[p] = lki;
    }
    if (!(d > 0.0)) throw NotPositiveDefinite(f.order_[k], d);
    const Index p = fill[k]++;
    f.li_[p] = k;
    f.lx_[p] = std::sqrt(d);
  }
  return f;
}

void CholeskyFactor::solve_in_place(double* y, std::vector<double>& work) const {
  for (Index k = 0; k < n_; ++k) work[k] = y[order_[k]];
  for (Index j = 0; j < n_; ++j) {
    work[j] /= lx_[lp_[j]];
    const double wj = work[j];
    for (Index p = lp_[j] + 1; p < lp_[j + 1]; ++p) work[li_[p]] -= lx_[p] * wj;
  }
  for (Index j = n_ - 1; j >= 0; --j) {
    double s = work[j];
    for (Index p = lp_[j] + 1; p < lp_[j + 1]; ++p) s -= lx_[p] * work[li_[p]];
    work[j] = s / lx_[lp_[j]];
  }
  for (Index k = 0; k < n_; ++k) y[order_[k]] = work[k];
}

Vector CholeskyFactor::solve(const Eigen::Ref<const Vector>& b) const {
  if (b.size() != n_) {
    throw DimensionError("solve: right-hand side length " + std::to_string(b.size()) +
                         " does not match dimension " + std::to_string(n_));
  }
  Vector x = b;
  std::vector<double> work(static_cast<std::size_t>(n_));
  solve_in_place(x.data(), work);
  return x;
}

Matrix CholeskyFactor::solve_block(const Eigen::Ref<const Matrix>& b) const {
  if (b.rows() != n_) {
    throw DimensionError("solve: right-hand side rows " + std::to_string(b.rows()) +
                         " do not match dimension " + std::to_string(n_));
  }
  Matrix x = b;
  std::vector<double> work(static_cast<std::size_t>(n_));
  for (Index c = 0; c < x.cols(); ++c) solve_in_place(x.col(c).data(), work);
  return x;
}

Matrix CholeskyFactor::lower_dense() const {
  Matrix l = Matrix::Zero(n_, n_);
  for (Index j = 0; j < n_; ++j) {
    for (Index p = lp_[j]; p < lp_[j + 1]; ++p) l(li_[p], j) = lx_[p];
  }
  return l;
}

Matrix CholeskyFactor::permutation_dense() const {
  Matrix p = Matrix::Zero(n_, n_);
  for (Index k = 0; k < n_; ++k) p(k, order_[k]) = 1.0;
  return p;
}

}  // namespace modalfit
