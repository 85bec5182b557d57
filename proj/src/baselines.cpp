#include "modalfit/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

class FullObjective final : public BoxFunction {
 public:
  FullObjective(const UpdatingProblem& problem, const BaselineOptions& options)
      : problem_(problem), options_(options) {}

  double value(const Vector& x) override {
    ++factorizations;
    last_ = evaluate_full(problem_, x);
    last_x_ = x;
    return last_->value;
  }

  Vector gradient(const Vector& x) override {
    if (!last_ || last_x_ != x) value(x);
    if (options_.gradient == GradientSource::Analytic) return full_gradient(problem_, x, last_->lanczos);
    const double phi = last_->value;
    Vector g(x.size());
    for (Index j = 0; j < x.size(); ++j) {
      double h = options_.fd_step * std::max(1.0, std::abs(x[j]));
      if (x[j] + h > problem_.box.upper[j]) h = -h;
      Vector xh = x;
      xh[j] += h;
      ++factorizations;
      g[j] = (evaluate_full(problem_, xh).value - phi) / (xh[j] - x[j]);
    }
    return g;
  }

  /// The full evaluation at x, reusing the last value() call when it was made at x.
  FullEvaluation at(const Vector& x) {
    if (!last_ || last_x_ != x) value(x);
    return *last_;
  }

  Index factorizations = 0;

 private:
  const UpdatingProblem& problem_;
  const BaselineOptions& options_;
  std::optional<FullEvaluation> last_;
  Vector last_x_;
};

}  // namespace

SolutionRecord solve_direct(const UpdatingProblem& problem, const BaselineOptions& options,
                            const std::optional<Vector>& start) {
  problem.validate();
  const Vector x0 = start ? *start : default_start(problem.box);
  if (x0.size() != problem.param_count()) throw DimensionError("solve_direct: start point length differs");
  if (!problem.box.contains(x0)) throw InvalidArgument("solve_direct: start point outside the box");
  const auto clock_start = std::chrono::steady_clock::now();
  const ParameterScaling scaling(x0);
  const UpdatingProblem sp = scaled_problem(problem, scaling);

  FullObjective fn(sp, options);
  BoxMinimizerOptions bo;
  bo.tolerance = options.tolerance;
  bo.max_iterations = options.max_iterations;
  const BoxMinimizerResult r = minimize_on_box(fn, sp.box, sp.box.project(scaling.to_scaled(x0)), bo);

  // Final report at the returned point with the analytic gradient.
  const FullEvaluation fin = fn.at(r.x);
  const Vector g = full_gradient(sp, r.x, fin.lanczos);

  SolutionRecord out;
  out.scaled = r.x;
  out.parameters = scaling.to_physical(r.x);
  out.frequencies = fin.frequencies;
  out.phi = fin.value;
  out.chi = criticality(sp.box, r.x, g);
  out.converged = out.chi <= problem.criticality_tolerance;
  out.status = out.converged ? "converged" : to_string(r.status);
  out.iterations = r.iterations;
  out.factorizations = fn.factorizations;

  IterationRecord rec;
  rec.k = r.iterations;
  rec.phi = out.phi;
  rec.frequencies = out.frequencies;
  rec.chi = out.chi;
  rec.accepted = true;
  rec.factorizations = out.factorizations;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  out.history.push_back(std::move(rec));
  return out;
}

}  // namespace modalfit
