#include "modalfit/trust_region.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

class ModelFunction final : public BoxFunction {
 public:
  explicit ModelFunction(const ReducedModel& model) : model_(model) {}
  double value(const Vector& x) override { return model_.evaluate(x).value; }
  Vector gradient(const Vector& x) override { return model_.gradient(x); }

 private:
  const ReducedModel& model_;
};

void record_model_gaps(const TrustRegionState& state, IterationRecord& rec) {
  const ReducedModel& m = *state.model;
  rec.model_value_gap = std::abs(m.evaluate(state.x).value - state.phi);
  rec.model_gradient_gap = (m.gradient(state.x) - state.gradient).norm();
}

void rebuild_model(TrustRegionState& state, const UpdatingProblem& problem) {
  state.model = ReducedModel::build(state.evaluation.lanczos, problem.pencil, state.x, problem.target,
                                    state.gradient, problem.cluster_threshold);
  ++state.models_built;
}

}  // namespace

void TrustRegionConfig::validate() const {
  if (!(0.0 < eta1 && eta1 <= eta2 && eta2 < 1.0)) throw InvalidArgument("trust region: need 0 < eta1 <= eta2 < 1");
  if (!(0.0 < gamma1 && gamma1 <= gamma2 && gamma2 < 1.0)) {
    throw InvalidArgument("trust region: need 0 < gamma1 <= gamma2 < 1");
  }
  if (!(growth >= 1.0)) throw InvalidArgument("trust region: growth factor must be at least 1");
  if (!(0.0 < min_radius && min_radius <= initial_radius && initial_radius <= max_radius)) {
    throw InvalidArgument("trust region: need 0 < min_radius <= initial_radius <= max_radius");
  }
  if (max_iterations < 0) throw InvalidArgument("trust region: negative iteration cap");
}

double criticality(const FeasibleBox& box, const Vector& x, const Vector& gradient) {
  return projected_gradient_norm(box, x, gradient);
}

Vector inner_minimize(const ReducedModel& model, const Vector& center, double radius,
                      const FeasibleBox& box, const BoxMinimizerOptions& options) {
  if (!(radius > 0.0)) throw InvalidArgument("inner minimization: radius must be positive");
  const Vector lo = box.lower.cwiseMax((center.array() - radius).matrix());
  const Vector hi = box.upper.cwiseMin((center.array() + radius).matrix());
  const FeasibleBox local(lo, hi);
  ModelFunction fn(model);
  const BoxMinimizerResult r = minimize_on_box(fn, local, center, options);
  return (r.x - center).cwiseMax(-radius).cwiseMin(radius);
}

TrustRegionState initial_state(const UpdatingProblem& problem, const Vector& x,
                               const TrustRegionConfig& config) {
  config.validate();
  if (!problem.box.contains(x)) throw InvalidArgument("trust region: start point outside the box");
  TrustRegionState st;
  st.x = x;
  st.radius = config.initial_radius;
  st.evaluation = evaluate_full(problem, x);
  ++st.factorizations;
  st.phi = st.evaluation.value;
  st.gradient = full_gradient(problem, x, st.evaluation.lanczos);
  st.chi = criticality(problem.box, x, st.gradient);
  rebuild_model(st, problem);

  IterationRecord rec;
  rec.k = 0;
  rec.phi = st.phi;
  rec.frequencies = st.evaluation.frequencies;
  rec.chi = st.chi;
  rec.radius = st.radius;
  rec.accepted = true;
  rec.factorizations = st.factorizations;
  record_model_gaps(st, rec);
  st.history.push_back(std::move(rec));
  return st;
}

void outer_iterate(TrustRegionState& state, const UpdatingProblem& problem,
                   const TrustRegionConfig& config) {
  if (!state.model) throw InvalidArgument("trust region: state carries no model");
  ++state.iterations;
  const ReducedModel& model = *state.model;
  const Vector step = inner_minimize(model, state.x, state.radius, problem.box, config.inner);
  const Vector trial = problem.box.project(state.x + step);
  const double step_norm = (trial - state.x).lpNorm<Eigen::Infinity>();

  IterationRecord rec;
  rec.k = state.iterations;
  rec.step_norm = step_norm;
  double rho = std::numeric_limits<double>::quiet_NaN();
  std::optional<FullEvaluation> fresh;
  if (step_norm > 0.0) {
    rec.predicted = model.evaluate(state.x).value - model.evaluate(trial).value;
    if (rec.predicted > 0.0) {
      try {
        fresh = evaluate_full(problem, trial);
      } catch (const Error&) {
        fresh.reset();
      }
      ++state.factorizations;
      if (fresh) {
        rec.actual = state.phi - fresh->value;
        rho = rec.actual / rec.predicted;
      }
    }
  }

  const bool accept = fresh && rho >= config.eta1;
  if (accept) {
    Vector gradient = full_gradient(problem, trial, fresh->lanczos);
    state.x = trial;
    state.phi = fresh->value;
    state.gradient = std::move(gradient);
    state.evaluation = std::move(*fresh);
    state.chi = criticality(problem.box, state.x, state.gradient);
    rebuild_model(state, problem);
  }
  if (accept && rho >= config.eta2) {
    state.radius = std::min(std::max(state.radius, config.growth * step_norm), config.max_radius);
  } else if (!accept) {
    state.radius = std::clamp(0.5 * step_norm, config.gamma1 * state.radius, config.gamma2 * state.radius);
  }
  state.rho = rho;

  rec.phi = state.phi;
  rec.frequencies = state.evaluation.frequencies;
  rec.chi = state.chi;
  rec.radius = state.radius;
  rec.rho = rho;
  rec.accepted = accept;
  rec.factorizations = state.factorizations;
  if (accept) record_model_gaps(state, rec);
  state.history.push_back(std::move(rec));
}

UpdatingProblem scaled_problem(const UpdatingProblem& problem, const ParameterScaling& scaling) {
  UpdatingProblem p = problem;
  p.pencil = problem.pencil.rescaled(scaling);
  p.box = scaling.to_scaled(problem.box);
  return p;
}

SolutionRecord solve(const UpdatingProblem& problem, const TrustRegionConfig& config,
                     const std::optional<Vector>& start) {
  problem.validate();
  config.validate();
  const Vector x0 = start ? *start : default_start(problem.box);
  if (x0.size() != problem.param_count()) throw DimensionError("solve: start point length differs");
  if (!problem.box.contains(x0)) throw InvalidArgument("solve: start point outside the box");
  const auto clock_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
  };
  const ParameterScaling scaling(x0);
  const UpdatingProblem sp = scaled_problem(problem, scaling);
  const double eps = problem.criticality_tolerance;

  TrustRegionState st = initial_state(sp, sp.box.project(scaling.to_scaled(x0)), config);
  st.history.back().wall_time = elapsed();
  std::string status = "converged";
  while (!(st.chi <= eps)) {
    if (st.iterations >= config.max_iterations) {
      status = "iteration-limit";
      break;
    }
    if (st.radius < config.min_radius) {
      status = "radius-collapse";
      break;
    }
    outer_iterate(st, sp, config);
    st.history.back().wall_time = elapsed();
  }

  SolutionRecord out;
  out.scaled = st.x;
  out.parameters = scaling.to_physical(st.x);
  out.frequencies = st.evaluation.frequencies;
  out.phi = st.phi;
  out.chi = st.chi;
  out.converged = st.chi <= eps;
  out.status = out.converged ? "converged" : status;
  out.iterations = st.iterations;
  out.models_built = st.models_built;
  out.factorizations = st.factorizations;
  out.history = std::move(st.history);
  return out;
}

}  // namespace modalfit
