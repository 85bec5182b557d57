#pragma once

#include <string>

#include "modalfit/pencil.hpp"

namespace modalfit {

/// Smooth function handed to minimize_on_box().
class BoxFunction {
 public:
  virtual ~BoxFunction() = default;
  /// f(x). Throwing modalfit::Error marks x as infeasible for the line search.
  virtual double value(const Vector& x) = 0;
  /// Gradient at x; always called right after a successful value(x).
  virtual Vector gradient(const Vector& x) = 0;
};

struct BoxMinimizerOptions {
  double tolerance = 1e-8;     // stop when ||P(x - g) - x||_2 <= tolerance
  Index max_iterations = 500;
  Index memory = 10;           // quasi-Newton pairs kept
  double armijo = 1e-4;
  Index max_backtracks = 60;
};

enum class BoxStatus { Converged, Stagnated, IterationLimit };

struct BoxMinimizerResult {
  Vector x;
  double value = 0.0;
  Vector gradient;
  double projected_gradient_norm = 0.0;
  Index iterations = 0;
  Index evaluations = 0;  // value() calls
  BoxStatus status = BoxStatus::Converged;
};

/// ||P_box(x - g) - x||_2.
double projected_gradient_norm(const FeasibleBox& box, const Vector& x, const Vector& g);

/// Projected-gradient / limited-memory quasi-Newton descent on a box.
///
/// Each iteration takes a quasi-Newton direction on the variables not held at a bound
/// (steepest descent when that is not a descent direction), projects the trial points
/// onto the box and backtracks until the Armijo condition holds. The first step is a
/// projected steepest-descent step long enough to reach across the box. Throws if the
/// start point itself cannot be evaluated.
BoxMinimizerResult minimize_on_box(BoxFunction& f, const FeasibleBox& box, const Vector& start,
                                   const BoxMinimizerOptions& options = {});

std::string to_string(BoxStatus status);

}  // namespace modalfit
