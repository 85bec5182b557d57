#include "modalfit/objective.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "modalfit/errors.hpp"

namespace modalfit {

Vector make_weights(WeightMode mode, const Vector& measured, const Vector& custom) {
  Vector w;
  switch (mode) {
    case WeightMode::Uniform:
      w = Vector::Ones(measured.size());
      break;
    case WeightMode::Relative:
      w.resize(measured.size());
      for (Index i = 0; i < measured.size(); ++i) {
        if (measured[i] == 0.0) {
          throw InvalidArgument("relative weights: measured frequency " + std::to_string(i) +
                                " is zero");
        }
        w[i] = 1.0 / measured[i];
      }
      break;
    case WeightMode::Custom:
      if (custom.size() != measured.size()) {
        throw DimensionError("custom weights: expected " + std::to_string(measured.size()) +
                             " entries, got " + std::to_string(custom.size()));
      }
      if ((custom.array() < 0.0).any()) throw InvalidArgument("custom weights must be nonnegative");
      w = custom;
      break;
  }
  const double norm = w.norm();
  if (!(norm > 0.0)) throw InvalidArgument("weight vector is identically zero");
  return w / norm;
}

double FrequencyTarget::mismatch(const Vector& frequencies) const {
  if (frequencies.size() != count()) throw DimensionError("mismatch: frequency count differs");
  return (weights.array() * (frequencies - measured).array()).square().sum();
}

Vector FrequencyTarget::mismatch_gradient(const Vector& eigenvalues,
                                          const Matrix& eigenvalue_jacobian) const {
  if (eigenvalues.size() != count() || eigenvalue_jacobian.rows() != count()) {
    throw DimensionError("mismatch gradient: eigenvalue count differs");
  }
  const Vector f = frequencies_from_eigenvalues(eigenvalues);
  Vector coef(count());
  for (Index i = 0; i < count(); ++i) {
    coef[i] = weights[i] * weights[i] * (f[i] - measured[i]) /
              (2.0 * std::numbers::pi * std::sqrt(eigenvalues[i]));
  }
  return eigenvalue_jacobian.transpose() * coef;
}

UpdatingProblem UpdatingProblem::create(ParametricPencil pencil, FeasibleBox box, Vector measured,
                                        WeightMode mode, const Vector& custom) {
  UpdatingProblem p;
  p.weight_mode = mode;
  p.target.weights = make_weights(mode, measured, custom);
  p.target.measured = std::move(measured);
  p.pencil = std::move(pencil);
  p.box = std::move(box);
  p.validate();
  return p;
}

void UpdatingProblem::validate() const {
  box.validate();
  if (pencil.param_count() == 0) throw InvalidArgument("updating problem has no free parameters");
  if (box.size() != pencil.param_count()) {
    throw DimensionError("box has " + std::to_string(box.size()) + " coordinates but the pencil has " +
                         std::to_string(pencil.param_count()) + " parameters");
  }
  const Vector& f = target.measured;
  if (f.size() < 1) throw InvalidArgument("at least one measured frequency is required");
  if (target.weights.size() != f.size()) throw DimensionError("weights and frequencies differ in length");
  for (Index i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0)) throw InvalidArgument("measured frequency " + std::to_string(i) + " is not positive");
    if (i > 0 && f[i] < f[i - 1]) throw InvalidArgument("measured frequencies must be nondecreasing");
  }
  if ((target.weights.array() < 0.0).any()) throw InvalidArgument("weights must be nonnegative");
  if (std::abs(target.weights.norm() - 1.0) > 1e-12) throw InvalidArgument("weights must have unit norm");
  if (!(lanczos_tolerance > 0.0) || !(criticality_tolerance > 0.0)) {
    throw InvalidArgument("tolerances must be positive");
  }
  if (f.size() > pencil.dim()) throw InvalidArgument("more frequencies requested than degrees of freedom");
}

LanczosOptions UpdatingProblem::lanczos_options() const {
  LanczosOptions o;
  o.count = target.count();
  o.tolerance = lanczos_tolerance;
  o.seed = seed;
  return o;
}

FullEvaluation evaluate_full(const UpdatingProblem& problem, const Vector& x) {
  const auto [k, m] = problem.pencil.evaluate(x);
  FullEvaluation ev;
  ev.lanczos = lanczos_smallest(k, m, problem.lanczos_options());
  ev.frequencies = frequencies_from_eigenvalues(ev.lanczos.eigenvalues);
  ev.value = problem.target.mismatch(ev.frequencies);
  return ev;
}

void check_separated(const Vector& ascending, double threshold) {
  for (Index i = 0; i + 1 < ascending.size(); ++i) {
    const double gap = std::abs(ascending[i + 1] - ascending[i]) / std::abs(ascending[i]);
    if (gap < threshold) throw ClusteredEigenvalues(i, gap);
  }
}

Matrix eigenvalue_jacobian(const ParametricPencil& pencil, const Vector& x,
                           const LanczosResult& lanczos, double threshold) {
  const Index s = lanczos.eigenvalues.size();
  check_separated(lanczos.eigenvalues, threshold);
  const auto mx = pencil.evaluate(x).second;
  Matrix jac(s, pencil.param_count());
  for (Index i = 0; i < s; ++i) {
    const Vector v = lanczos.eigenvectors.col(i);
    const double lambda = lanczos.eigenvalues[i];
    const double denom = mx.quadratic_form(v);
    for (Index j = 0; j < pencil.param_count(); ++j) {
      const auto [dk, dm] = pencil.derivative(j);
      double num = 0.0;
      if (!dk.is_zero()) num += dk.quadratic_form(v);
      if (!dm.is_zero()) num -= lambda * dm.quadratic_form(v);
      jac(i, j) = num / denom;
    }
  }
  return jac;
}

Vector full_gradient(const UpdatingProblem& problem, const Vector& x,
                     const LanczosResult& lanczos) {
  const Matrix jac = eigenvalue_jacobian(problem.pencil, x, lanczos, problem.cluster_threshold);
  return problem.target.mismatch_gradient(lanczos.eigenvalues, jac);
}

}  // namespace modalfit
