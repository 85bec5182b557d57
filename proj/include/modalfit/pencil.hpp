#pragma once

#include <string>
#include <utility>
#include <vector>

#include "modalfit/sparse_matrix.hpp"

namespace modalfit {

struct ParameterInfo {
  std::string name;  // e.g. "E2", "rho2"
  std::string unit;  // e.g. "MPa", "kg/m^3"
};

/// Box [lower_i, upper_i] of admissible parameter values.
struct FeasibleBox {
  Vector lower;
  Vector upper;

  FeasibleBox() = default;
  FeasibleBox(Vector lo, Vector hi);

  Index size() const { return lower.size(); }
  /// Throws InvalidArgument unless lower_i < upper_i for all i.
  void validate() const;
  bool contains(const Vector& x) const;
  Vector project(const Vector& x) const;
  Vector midpoint() const;
};

/// Midpoint of the box; the start point used when no estimate is supplied.
Vector default_start(const FeasibleBox& box);

/// Diagonal scaling that maps a reference point to the all-ones vector.
class ParameterScaling {
 public:
  ParameterScaling() = default;
  explicit ParameterScaling(Vector reference);

  const Vector& reference() const { return reference_; }
  Vector to_scaled(const Vector& physical) const;
  Vector to_physical(const Vector& scaled) const;
  FeasibleBox to_scaled(const FeasibleBox& physical) const;
  /// Gradient with respect to scaled coordinates from one with respect to physical ones.
  Vector gradient_to_scaled(const Vector& physical_gradient) const;

 private:
  Vector reference_;
};

/// K(x) = K0 + sum_j x_j dK_j and M(x) = M0 + sum_j x_j dM_j on one shared pattern.
class ParametricPencil {
 public:
  ParametricPencil() = default;
  ParametricPencil(SparseSymMatrix k0, SparseSymMatrix m0, std::vector<SparseSymMatrix> dk,
                   std::vector<SparseSymMatrix> dm, std::vector<ParameterInfo> params);

  Index dim() const { return k0_.dim(); }
  Index param_count() const { return static_cast<Index>(params_.size()); }
  const std::vector<ParameterInfo>& params() const { return params_; }
  const SparseSymMatrix& base_stiffness() const { return k0_; }
  const SparseSymMatrix& base_mass() const { return m0_; }

  /// (K(x), M(x)).
  std::pair<SparseSymMatrix, SparseSymMatrix> evaluate(const Vector& x) const;
  /// (dK/dx_j, dM/dx_j) for 0 <= j < param_count(); constant in x.
  std::pair<const SparseSymMatrix&, const SparseSymMatrix&> derivative(Index j) const;

  /// The same pencil in the coordinates of `scaling` (x_physical = reference .* x_scaled).
  ParametricPencil rescaled(const ParameterScaling& scaling) const;

  /// Throws InvalidArgument unless K(x) and M(x) factor at every box corner.
  /// Dense-free (uses sparse Cholesky); intended for small pencils.
  void check_definite_on(const FeasibleBox& box) const;

 private:
  SparseSymMatrix k0_, m0_;
  std::vector<SparseSymMatrix> dk_, dm_;
  std::vector<ParameterInfo> params_;
};

}  // namespace modalfit
