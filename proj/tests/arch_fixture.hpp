// Arch problem in scaled coordinates shared by the objective, model and solver tests.
#pragma once

#include "modalfit/experiments.hpp"
#include "modalfit/objective.hpp"
#include "modalfit/run_config.hpp"
#include "modalfit/trust_region.hpp"

namespace fixture {

using modalfit::Vector;

struct ArchProblem {
  modalfit::Benchmark bench;
  Vector truth;                       // physical generating values
  modalfit::ParameterScaling scaling;  // maps `start` to ones
  modalfit::UpdatingProblem physical;
  modalfit::UpdatingProblem scaled;
};

/// Arch with frequencies generated at the reference values, scaled around `start`
/// (physical, default: box midpoint).
inline ArchProblem arch(double lanczos_tolerance = 1e-5, const Vector& start = Vector()) {
  modalfit::RunConfig cfg;
  cfg.lanczos_tolerance = lanczos_tolerance;
  ArchProblem a;
  a.bench = modalfit::make_benchmark(cfg);
  a.truth = a.bench.reference;
  const Vector f = modalfit::reference_frequencies(a.bench.pencil, a.truth, cfg.count, cfg.seed);
  a.physical = modalfit::make_problem(cfg, a.bench, f);
  a.scaling = modalfit::ParameterScaling(start.size() ? start : a.bench.box.midpoint());
  a.scaled = modalfit::scaled_problem(a.physical, a.scaling);
  return a;
}

}  // namespace fixture
