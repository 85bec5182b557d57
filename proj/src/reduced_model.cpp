#include "modalfit/reduced_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "modalfit/errors.hpp"
#include "modalfit/matrix_market.hpp"

namespace modalfit {

namespace {

constexpr double kMinMassEigenvalue = 1e-8;

Matrix symmetric_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }

// Z^{-1/2} by eigendecomposition.
Matrix inverse_sqrt(const Matrix& z) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(z);
  if (es.info() != Eigen::Success) throw SurrogateOutOfRange("reduced model: eigensolver failed on Z(x)");
  const Vector& d = es.eigenvalues();
  if (d.minCoeff() <= kMinMassEigenvalue) {
    throw SurrogateOutOfRange("reduced model: projected mass matrix lost definiteness (min eigenvalue " +
                              std::to_string(d.minCoeff()) + ")");
  }
  const Vector r = d.cwiseSqrt().cwiseInverse();
  return symmetric_part(es.eigenvectors() * r.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace

ReducedModel ReducedModel::build(const LanczosResult& lanczos, const ParametricPencil& pencil,
                                 const Vector& center, const FrequencyTarget& target,
                                 const Vector& gradient_at_center, double cluster_threshold) {
  const Index l = pencil.param_count();
  const Index s = target.count();
  if (center.size() != l || gradient_at_center.size() != l) {
    throw DimensionError("reduced model: center or gradient length differs from parameter count");
  }
  if (lanczos.eigenvalues.size() != s) throw DimensionError("reduced model: Lanczos pair count differs from target count");
  if (!lanczos.stiffness_factor) throw InvalidArgument("reduced model: Lanczos result carries no factor");
  check_separated(lanczos.eigenvalues, cluster_threshold);

  ReducedModel rm;
  rm.center_ = center;
  rm.t_ = lanczos.tridiagonal();
  rm.target_ = target;
  rm.cluster_threshold_ = cluster_threshold;

  const Matrix& u = lanczos.basis;
  const Matrix y = lanczos.stiffness_factor->solve_block(lanczos.mass_basis);
  rm.s_.reserve(static_cast<std::size_t>(l));
  rm.g_.reserve(static_cast<std::size_t>(l));
  for (Index j = 0; j < l; ++j) {
    const auto [dk, dm] = pencil.derivative(j);
    const Index m = u.cols();
    Matrix sj = Matrix::Zero(m, m), gj = Matrix::Zero(m, m);
    if (!dm.is_zero()) {
      const Matrix dmu = dm.multiply_block(u);
      sj = symmetric_part(u.transpose() * dmu);
      const Matrix a = dmu.transpose() * y;
      gj = a + a.transpose();
    }
    if (!dk.is_zero()) gj -= y.transpose() * dk.multiply_block(y);
    rm.s_.push_back(std::move(sj));
    rm.g_.push_back(symmetric_part(gj));
  }

  rm.g_corr_ = Vector::Zero(l);
  const ReducedEvaluation at_center = rm.evaluate(center);
  const double phi = target.mismatch(frequencies_from_eigenvalues(lanczos.eigenvalues));
  rm.offset_ = phi - at_center.tilde_value;
  if (std::abs(rm.offset_) > 1e-10 * std::max(1.0, std::abs(phi))) {
    throw Error("reduced model: value at the expansion point differs from the objective by " +
                std::to_string(rm.offset_));
  }
  rm.g_corr_ = gradient_at_center - rm.tilde_gradient(center);
  return rm;
}

Matrix ReducedModel::mass_matrix(const Vector& x) const {
  if (x.size() != param_count()) throw DimensionError("reduced model: parameter vector length differs");
  Matrix z = Matrix::Identity(basis_size(), basis_size());
  for (Index j = 0; j < param_count(); ++j) {
    const double d = x[j] - center_[j];
    if (d != 0.0) z += d * s_[static_cast<std::size_t>(j)];
  }
  return z;
}

Matrix ReducedModel::reduced_matrix(const Vector& x, Matrix* inv_sqrt_mass) const {
  const Matrix w = inverse_sqrt(mass_matrix(x));
  Matrix h = t_;
  for (Index j = 0; j < param_count(); ++j) {
    const double d = x[j] - center_[j];
    if (d != 0.0) h += d * g_[static_cast<std::size_t>(j)];
  }
  if (inv_sqrt_mass) *inv_sqrt_mass = w;
  return symmetric_part(w * h * w);
}

ReducedModel::Spectrum ReducedModel::spectrum(const Vector& x) const {
  Matrix w;
  const Matrix f = reduced_matrix(x, &w);
  Eigen::SelfAdjointEigenSolver<Matrix> es(f);
  if (es.info() != Eigen::Success) throw SurrogateOutOfRange("reduced model: eigensolver failed on F(x)");
  const Index m = basis_size();
  const Index s = count();
  Spectrum sp{Vector(s), Matrix(m, s)};
  for (Index i = 0; i < s; ++i) {
    const Index col = m - 1 - i;
    sp.mu[i] = es.eigenvalues()[col];
    if (!(sp.mu[i] > 0.0)) {
      throw SurrogateOutOfRange("reduced model: eigenvalue " + std::to_string(i) +
                                " of F(x) is not positive");
    }
    sp.y.col(i) = w * es.eigenvectors().col(col);
  }
  return sp;
}

ReducedEvaluation ReducedModel::evaluate(const Vector& x) const {
  const Spectrum sp = spectrum(x);
  ReducedEvaluation ev;
  ev.eigenvalues = sp.mu.cwiseInverse();
  ev.frequencies = frequencies_from_eigenvalues(ev.eigenvalues);
  ev.tilde_value = target_.mismatch(ev.frequencies);
  ev.value = ev.tilde_value + g_corr_.dot(x - center_);
  return ev;
}

Vector ReducedModel::tilde_gradient(const Vector& x) const {
  const Spectrum sp = spectrum(x);
  const Vector lambda = sp.mu.cwiseInverse();
  check_separated(lambda, cluster_threshold_);
  Matrix jac(count(), param_count());
  for (Index i = 0; i < count(); ++i) {
    const Vector yi = sp.y.col(i);
    const double mu = sp.mu[i];
    for (Index j = 0; j < param_count(); ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double dmu = yi.dot(g_[js] * yi) - mu * yi.dot(s_[js] * yi);
      jac(i, j) = -dmu / (mu * mu);
    }
  }
  return target_.mismatch_gradient(lambda, jac);
}

Vector ReducedModel::gradient(const Vector& x) const { return tilde_gradient(x) + g_corr_; }

void ReducedModel::dump(const std::filesystem::path& directory) const {
  std::filesystem::create_directories(directory);
  write_matrix_market(directory / "T.mtx", t_);
  for (Index j = 0; j < param_count(); ++j) {
    const auto js = static_cast<std::size_t>(j);
    write_matrix_market(directory / ("S" + std::to_string(j + 1) + ".mtx"), s_[js]);
    write_matrix_market(directory / ("G" + std::to_string(j + 1) + ".mtx"), g_[js]);
  }
}

}  // namespace modalfit
