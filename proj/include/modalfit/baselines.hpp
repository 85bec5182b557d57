#pragma once

#include <optional>

#include "modalfit/box_minimizer.hpp"
#include "modalfit/objective.hpp"
#include "modalfit/trust_region.hpp"

namespace modalfit {

enum class GradientSource {
  FiniteDifference,  // forward differences, one extra Lanczos solve per parameter
  Analytic,          // eigenvalue perturbation formula, no extra solve
};

struct BaselineOptions {
  GradientSource gradient = GradientSource::Analytic;
  double fd_step = 1e-7;        // relative to max(1, |x_j|) in scaled coordinates
  double tolerance = 1e-8;      // projected-gradient stop of the box minimizer
  Index max_iterations = 500;
};

/// Minimizes phi directly over the box with the full objective in every evaluation
/// (the same box minimizer, with the same stopping tolerance, that solves the trust-region
/// subproblems). Converged means the analytic chi at the returned point is at most the
/// problem's criticality tolerance. Coordinates are scaled as in solve().
SolutionRecord solve_direct(const UpdatingProblem& problem, const BaselineOptions& options,
                            const std::optional<Vector>& start = std::nullopt);

}  // namespace modalfit
