#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "modalfit/box_minimizer.hpp"
#include "modalfit/objective.hpp"
#include "modalfit/reduced_model.hpp"

namespace modalfit {

struct TrustRegionConfig {
  double eta1 = 0.05;
  double eta2 = 0.9;
  double gamma1 = 0.25;
  double gamma2 = 0.5;
  double growth = 2.0;
  double initial_radius = 0.1;  // scaled units
  double max_radius = 1.0;
  double min_radius = 1e-10;    // give up below this radius
  Index max_iterations = 100;
  BoxMinimizerOptions inner;

  /// Throws InvalidArgument unless 0 < eta1 <= eta2 < 1, 0 < gamma1 <= gamma2 < 1,
  /// growth >= 1 and 0 < min_radius <= initial_radius <= max_radius.
  void validate() const;
};

/// One row of the convergence history; k = 0 is the start point.
struct IterationRecord {
  Index k = 0;
  double phi = 0.0;         // at the iterate after this iteration
  Vector frequencies;
  double chi = 0.0;
  double radius = 0.0;      // radius after the update
  double rho = std::numeric_limits<double>::quiet_NaN();
  bool accepted = false;
  Index factorizations = 0;  // cumulative
  double step_norm = 0.0;    // ||s||_inf of the trial step
  double predicted = 0.0;
  double actual = 0.0;
  double model_value_gap = 0.0;    // |phi^R - phi| at the expansion point
  double model_gradient_gap = 0.0; // ||grad phi^R - grad phi|| at the expansion point
  double wall_time = 0.0;          // seconds since solve() started
};

/// Iterate of the outer loop; all vectors in the coordinates of the problem handed in.
struct TrustRegionState {
  Vector x;
  double radius = 0.0;
  double rho = std::numeric_limits<double>::quiet_NaN();
  double phi = 0.0;
  Vector gradient;
  double chi = 0.0;
  FullEvaluation evaluation;
  std::optional<ReducedModel> model;
  Index iterations = 0;
  Index models_built = 0;
  Index factorizations = 0;
  std::vector<IterationRecord> history;
};

/// chi(x) = ||P_box(x - g) - x||_2.
double criticality(const FeasibleBox& box, const Vector& x, const Vector& gradient);

/// Step s minimizing the model over {||s||_inf <= radius} intersected with the box.
Vector inner_minimize(const ReducedModel& model, const Vector& center, double radius,
                      const FeasibleBox& box, const BoxMinimizerOptions& options = {});

/// Evaluates phi and its gradient at x and builds the first model.
TrustRegionState initial_state(const UpdatingProblem& problem, const Vector& x,
                               const TrustRegionConfig& config);

/// One trial step: inner solve, fresh evaluation, ratio test, radius update, and a new model
/// on acceptance. Appends a history record.
void outer_iterate(TrustRegionState& state, const UpdatingProblem& problem,
                   const TrustRegionConfig& config);

struct SolutionRecord {
  Vector parameters;   // physical units
  Vector scaled;       // optimization coordinates
  Vector frequencies;
  double phi = 0.0;
  double chi = 0.0;
  bool converged = false;
  std::string status;
  Index iterations = 0;
  Index models_built = 0;
  Index factorizations = 0;
  std::vector<IterationRecord> history;
};

/// Trust-region model updating. The problem is given in physical units; the iteration runs
/// in coordinates scaled so that the start point (default: the box midpoint) is all ones.
SolutionRecord solve(const UpdatingProblem& problem, const TrustRegionConfig& config,
                     const std::optional<Vector>& start = std::nullopt);

/// Scaled copy of `problem` (pencil and box) with the scaling that maps `reference` to ones.
UpdatingProblem scaled_problem(const UpdatingProblem& problem, const ParameterScaling& scaling);

}  // namespace modalfit
