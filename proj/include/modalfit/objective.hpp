#pragma once

#include <cstdint>

#include "modalfit/lanczos.hpp"
#include "modalfit/pencil.hpp"

namespace modalfit {

enum class WeightMode { Uniform, Relative, Custom };

/// Weight vector normalized to unit Euclidean norm: all ones (Uniform), f_i^{-1}
/// (Relative), or a normalized copy of `custom`.
Vector make_weights(WeightMode mode, const Vector& measured, const Vector& custom = {});

/// Weighted squared frequency mismatch sum_i w_i^2 (f_i(x) - f_i)^2 and its chain rule.
struct FrequencyTarget {
  Vector measured;  // Hz, length s
  Vector weights;   // length s

  Index count() const { return measured.size(); }
  double mismatch(const Vector& frequencies) const;
  /// Gradient of mismatch() given eigenvalues lambda_i and d lambda_i / d x_j (s x l).
  Vector mismatch_gradient(const Vector& eigenvalues, const Matrix& eigenvalue_jacobian) const;
};

/// One model-updating instance: pencil, box, targets, weights and tolerances.
struct UpdatingProblem {
  ParametricPencil pencil;
  FeasibleBox box;
  FrequencyTarget target;
  WeightMode weight_mode = WeightMode::Relative;
  double lanczos_tolerance = 1e-5;
  double criticality_tolerance = 1e-4;
  std::uint64_t seed = 20180101;
  double cluster_threshold = 1e-8;

  /// Builds the problem and its normalized weights; `custom` is used for Custom mode.
  static UpdatingProblem create(ParametricPencil pencil, FeasibleBox box, Vector measured,
                                WeightMode mode, const Vector& custom = {});

  Index param_count() const { return pencil.param_count(); }
  /// Throws InvalidArgument when an invariant fails.
  void validate() const;
  LanczosOptions lanczos_options() const;
};

struct FullEvaluation {
  double value = 0.0;
  Vector frequencies;
  LanczosResult lanczos;
};

/// phi(x) from a fresh shift-invert Lanczos solve at x.
FullEvaluation evaluate_full(const UpdatingProblem& problem, const Vector& x);

/// d lambda_i / d x_j = v_i^T (dK_j - lambda_i dM_j) v_i / (v_i^T M v_i), as an s x l matrix.
/// Throws ClusteredEigenvalues when two of the s eigenvalues are closer than `threshold`.
Matrix eigenvalue_jacobian(const ParametricPencil& pencil, const Vector& x,
                           const LanczosResult& lanczos, double threshold = 1e-8);

/// grad phi(x) from the Ritz pairs of the Lanczos solve at x.
Vector full_gradient(const UpdatingProblem& problem, const Vector& x,
                     const LanczosResult& lanczos);

/// Throws ClusteredEigenvalues if |l_{i+1} - l_i| / |l_i| < threshold for some i.
void check_separated(const Vector& ascending, double threshold);

}  // namespace modalfit
