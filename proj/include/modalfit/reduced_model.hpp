#pragma once

#include <filesystem>
#include <vector>

#include "modalfit/lanczos.hpp"
#include "modalfit/objective.hpp"
#include "modalfit/pencil.hpp"

namespace modalfit {

struct ReducedEvaluation {
  double value = 0.0;        // phi^R(x), corrected
  double tilde_value = 0.0;  // uncorrected mismatch of the reduced frequencies
  Vector frequencies;        // nondecreasing, length s
  Vector eigenvalues;        // 1 / mu_i
};

/// Local surrogate of the objective built from one Lanczos basis at x0.
///
/// With delta = x - x0, Z(x) = I + sum_j delta_j S_j and
/// F(x) = Z^{-1/2} (T + sum_j delta_j G_j) Z^{-1/2}; the s largest eigenvalues of F give
/// the reduced frequencies. Every evaluation costs O(m^3) and does not touch n.
class ReducedModel {
 public:
  /// `gradient_at_center` is the full gradient at x0 and fixes the first-order correction.
  /// Throws ClusteredEigenvalues when the s Ritz values are not separated by `cluster_threshold`.
  static ReducedModel build(const LanczosResult& lanczos, const ParametricPencil& pencil,
                            const Vector& center, const FrequencyTarget& target,
                            const Vector& gradient_at_center, double cluster_threshold = 1e-8);

  Index basis_size() const { return t_.rows(); }
  Index param_count() const { return static_cast<Index>(s_.size()); }
  Index count() const { return target_.count(); }
  const Vector& center() const { return center_; }
  const Matrix& tridiagonal() const { return t_; }
  const std::vector<Matrix>& mass_blocks() const { return s_; }
  const std::vector<Matrix>& correction_blocks() const { return g_; }
  const Vector& gradient_correction() const { return g_corr_; }
  /// phi(x0) - phi~(x0) found at build time; zero up to rounding.
  double value_offset() const { return offset_; }

  /// Projected mass matrix Z(x).
  Matrix mass_matrix(const Vector& x) const;
  /// F(x), symmetrized; optionally also Z(x)^{-1/2}. Throws SurrogateOutOfRange when
  /// Z(x) has an eigenvalue <= 1e-8.
  Matrix reduced_matrix(const Vector& x, Matrix* inv_sqrt_mass = nullptr) const;

  /// Throws SurrogateOutOfRange when Z(x) is not definite or a wanted mu_i <= 0.
  ReducedEvaluation evaluate(const Vector& x) const;
  /// Gradient of evaluate(x).value; throws ClusteredEigenvalues at coalescing eigenvalues.
  Vector gradient(const Vector& x) const;

  /// Writes T.mtx, S<j>.mtx and G<j>.mtx (1-based j) into `directory`.
  void dump(const std::filesystem::path& directory) const;

 private:
  struct Spectrum {
    Vector mu;       // s largest eigenvalues of F, descending
    Matrix y;        // Z^{-1/2} z_i, so y_i^T Z y_i = 1
  };
  Spectrum spectrum(const Vector& x) const;
  Vector tilde_gradient(const Vector& x) const;

  Vector center_;
  Matrix t_;
  std::vector<Matrix> s_, g_;
  FrequencyTarget target_;
  Vector g_corr_;
  double offset_ = 0.0;
  double cluster_threshold_ = 1e-8;
};

}  // namespace modalfit
