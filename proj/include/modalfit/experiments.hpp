#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "modalfit/fe.hpp"
#include "modalfit/run_config.hpp"
#include "modalfit/trust_region.hpp"

namespace modalfit {

/// Assembled benchmark: parametric pencil, box and the material values used to generate data.
struct Benchmark {
  fe::Mesh mesh;
  std::vector<fe::Material> materials;
  ParametricPencil pencil;
  FeasibleBox box;
  Vector reference;  // physical parameter values from the material table
  double assembly_seconds = 0.0;
};

/// Builds the mesh, applies material overrides and bounds, and assembles the pencil.
/// Throws ConfigError for regions that do not exist or an empty free-parameter set.
Benchmark make_benchmark(const RunConfig& config);

/// The `count` lowest frequencies at physical parameters x, computed with a tight
/// Lanczos tolerance (1e-12) so that they can serve as synthetic measurements.
Vector reference_frequencies(const ParametricPencil& pencil, const Vector& x, Index count,
                             std::uint64_t seed);

/// f_i (1 + u_i), u_i uniform on [-delta, delta], then sorted.
Vector perturb_frequencies(const Vector& f, double delta, std::uint64_t seed);

/// Measured frequencies of the config: given, or generated at the reference values with noise.
Vector measured_frequencies(const RunConfig& config, const Benchmark& bench);

UpdatingProblem make_problem(const RunConfig& config, const Benchmark& bench, const Vector& measured);

/// Start point in physical units: config.start by parameter name, box midpoint elsewhere.
Vector start_point(const RunConfig& config, const Benchmark& bench);

/// max_i |x_i - r_i| / |r_i| and the mean of the same ratios.
double max_relative_error(const Vector& x, const Vector& reference);
double mean_relative_error(const Vector& x, const Vector& reference);

struct UpdateOutcome {
  SolutionRecord solution;
  Vector reference;  // generating values when the frequencies were generated, else empty
  Vector measured;
  double max_error = 0.0;
  double mean_error = 0.0;
};

/// Runs config.strategy on the config's problem.
UpdateOutcome run_update(const RunConfig& config, const Benchmark& bench);
UpdateOutcome run_update(const RunConfig& config);

/// Columns k, phi, f1..fs, chi, radius, rho, accepted, factorizations[, wall_time].
void write_convergence_csv(std::ostream& out, const SolutionRecord& solution, bool with_wall_time);
/// Human-readable key = value summary, including the tolerances in effect.
void write_summary(std::ostream& out, const RunConfig& config, const Benchmark& bench,
                   const UpdateOutcome& outcome);

struct NoiseTrial {
  double delta = 0.0;
  Index trial = 0;
  double error = 0.0;  // max relative parameter error; NaN when the trial failed
  bool converged = false;
  Index iterations = 0;
  std::string status;
};

/// For each delta and trial: perturb the generated frequencies with a trial-specific seed,
/// solve, and record the error against the generating values. Failures are recorded.
std::vector<NoiseTrial> run_noise_study(const RunConfig& config, const std::vector<double>& deltas,
                                        Index trials);
void write_noise_csv(std::ostream& out, const std::vector<NoiseTrial>& rows);

struct StrategyRun {
  std::string strategy;  // RM, A, AD, BB
  bool supported = true;
  bool converged = false;
  double phi = 0.0;
  double chi = 0.0;
  Index factorizations = 0;
  Index iterations = 0;
  double seconds = 0.0;
  double assembly_seconds = 0.0;
  Vector parameters;
  std::string status;
};

/// Runs A, AD and RM on the same problem and start; BB is reported as unsupported.
std::vector<StrategyRun> run_strategy_comparison(const RunConfig& config);
void write_comparison_csv(std::ostream& out, const std::vector<StrategyRun>& rows);

}  // namespace modalfit
