#include "modalfit/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <tuple>

#include "modalfit/baselines.hpp"
#include "modalfit/errors.hpp"

namespace modalfit {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SolutionRecord run_strategy(Strategy strategy, const RunConfig& config, const UpdatingProblem& problem,
                            const Vector& start) {
  if (strategy == Strategy::ReducedModel) return solve(problem, config.trust_region, start);
  BaselineOptions bo;
  bo.gradient = strategy == Strategy::Analytic ? GradientSource::Analytic : GradientSource::FiniteDifference;
  bo.fd_step = config.fd_step;
  bo.tolerance = config.trust_region.inner.tolerance;
  bo.max_iterations = config.baseline_max_iterations;
  return solve_direct(problem, bo, start);
}

}  // namespace

Benchmark make_benchmark(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Benchmark b;
  if (config.benchmark == "arch") {
    std::tie(b.mesh, b.materials) = fe::generate_arch_on_piers(config.arch);
  } else if (config.benchmark == "vault") {
    std::tie(b.mesh, b.materials) = fe::generate_pillared_vault(config.vault);
  } else if (config.benchmark == "mesh") {
    try {
      b.mesh = fe::read_mesh(config.mesh_path);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("benchmark.path: ") + e.what());
    }
    b.materials.assign(static_cast<std::size_t>(b.mesh.region_count()), fe::Material{});
    for (auto& m : b.materials) {
      m.youngs_modulus = 0.0;  // must be supplied by the config
      m.density = 0.0;
    }
  } else {
    throw ConfigError("benchmark.kind: unknown benchmark '" + config.benchmark + "'");
  }

  const int regions = static_cast<int>(b.materials.size());
  std::vector<std::pair<double, double>> e_bounds(b.materials.size(), default_bounds(config.benchmark, true));
  std::vector<std::pair<double, double>> r_bounds(b.materials.size(), default_bounds(config.benchmark, false));
  for (const MaterialOverride& o : config.materials) {
    if (o.region < 1 || o.region > regions) {
      throw ConfigError("materials: region " + std::to_string(o.region) + " does not exist (mesh has " +
                        std::to_string(regions) + ")");
    }
    const auto r = static_cast<std::size_t>(o.region - 1);
    fe::Material& m = b.materials[r];
    if (o.youngs_modulus) m.youngs_modulus = *o.youngs_modulus;
    if (o.density) m.density = *o.density;
    if (o.poisson) m.poisson = *o.poisson;
    if (o.modulus_bounds) {
      m.free_modulus = true;
      e_bounds[r] = *o.modulus_bounds;
    }
    if (o.density_bounds) {
      m.free_density = true;
      r_bounds[r] = *o.density_bounds;
    }
    if (o.fix_modulus) m.free_modulus = false;
    if (o.fix_density) m.free_density = false;
  }
  for (int r = 1; r <= regions; ++r) {
    try {
      b.materials[static_cast<std::size_t>(r - 1)].validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError("materials: region " + std::to_string(r) + ": " + e.what());
    }
  }

  std::vector<double> lo, hi, ref;
  for (int r = 1; r <= regions; ++r) {
    const auto ri = static_cast<std::size_t>(r - 1);
    const fe::Material& m = b.materials[ri];
    if (m.free_modulus) {
      lo.push_back(e_bounds[ri].first);
      hi.push_back(e_bounds[ri].second);
      ref.push_back(m.youngs_modulus);
    }
    if (m.free_density) {
      lo.push_back(r_bounds[ri].first);
      hi.push_back(r_bounds[ri].second);
      ref.push_back(m.density);
    }
  }
  if (ref.empty()) throw ConfigError("materials: the free-parameter set is empty");
  b.box = FeasibleBox(Eigen::Map<Vector>(lo.data(), static_cast<Index>(lo.size())),
                      Eigen::Map<Vector>(hi.data(), static_cast<Index>(hi.size())));
  b.reference = Eigen::Map<Vector>(ref.data(), static_cast<Index>(ref.size()));
  b.pencil = fe::assemble_parametric(b.mesh, b.materials);
  b.assembly_seconds = seconds_since(t0);
  return b;
}

Vector reference_frequencies(const ParametricPencil& pencil, const Vector& x, Index count,
                             std::uint64_t seed) {
  const auto [k, m] = pencil.evaluate(x);
  LanczosOptions o;
  o.count = count;
  o.tolerance = 1e-12;
  o.seed = seed;
  return frequencies_from_eigenvalues(lanczos_smallest(k, m, o).eigenvalues);
}

Vector perturb_frequencies(const Vector& f, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0)) throw InvalidArgument("noise level must be nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector g(f.size());
  for (Index i = 0; i < f.size(); ++i) g[i] = f[i] * (1.0 + delta * u(rng));
  std::sort(g.data(), g.data() + g.size());
  return g;
}

Vector measured_frequencies(const RunConfig& config, const Benchmark& bench) {
  if (config.frequencies) return *config.frequencies;
  const Vector f = reference_frequencies(bench.pencil, bench.reference, config.count, config.seed);
  return config.noise > 0.0 ? perturb_frequencies(f, config.noise, config.noise_seed) : f;
}

UpdatingProblem make_problem(const RunConfig& config, const Benchmark& bench, const Vector& measured) {
  UpdatingProblem p;
  try {
    p = UpdatingProblem::create(bench.pencil, bench.box, measured, config.weights, config.custom_weights);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  p.lanczos_tolerance = config.lanczos_tolerance;
  p.criticality_tolerance = config.criticality_tolerance;
  p.seed = config.seed;
  return p;
}

Vector start_point(const RunConfig& config, const Benchmark& bench) {
  Vector x = default_start(bench.box);
  const auto& params = bench.pencil.params();
  for (const auto& [name, value] : config.start) {
    auto it = std::find_if(params.begin(), params.end(), [&](const ParameterInfo& p) { return p.name == name; });
    if (it == params.end()) throw ConfigError("start." + name + ": not a free parameter");
    const auto j = static_cast<Index>(it - params.begin());
    if (value < bench.box.lower[j] || value > bench.box.upper[j]) {
      throw ConfigError("start." + name + ": outside the bounds");
    }
    x[j] = value;
  }
  return x;
}

double max_relative_error(const Vector& x, const Vector& reference) {
  return ((x - reference).array() / reference.array()).abs().maxCoeff();
}

double mean_relative_error(const Vector& x, const Vector& reference) {
  return ((x - reference).array() / reference.array()).abs().mean();
}

UpdateOutcome run_update(const RunConfig& config, const Benchmark& bench) {
  UpdateOutcome out;
  out.measured = measured_frequencies(config, bench);
  const UpdatingProblem problem = make_problem(config, bench, out.measured);
  out.solution = run_strategy(config.strategy, config, problem, start_point(config, bench));
  if (!config.frequencies) {
    out.reference = bench.reference;
    out.max_error = max_relative_error(out.solution.parameters, bench.reference);
    out.mean_error = mean_relative_error(out.solution.parameters, bench.reference);
  }
  return out;
}

UpdateOutcome run_update(const RunConfig& config) { return run_update(config, make_benchmark(config)); }

void write_convergence_csv(std::ostream& out, const SolutionRecord& solution, bool with_wall_time) {
  const Index s = solution.frequencies.size();
  out << "k,phi";
  for (Index i = 1; i <= s; ++i) out << ",f" << i;
  out << ",chi,radius,rho,accepted,factorizations";
  if (with_wall_time) out << ",wall_time";
  out << '\n' << std::setprecision(17);
  for (const IterationRecord& r : solution.history) {
    out << r.k << ',' << r.phi;
    for (Index i = 0; i < s; ++i) out << ',' << r.frequencies[i];
    out << ',' << r.chi << ',' << r.radius << ',';
    if (std::isnan(r.rho)) out << "nan";
    else out << r.rho;
    out << ',' << (r.accepted ? 1 : 0) << ',' << r.factorizations;
    if (with_wall_time) out << ',' << r.wall_time;
    out << '\n';
  }
}

void write_summary(std::ostream& out, const RunConfig& config, const Benchmark& bench,
                   const UpdateOutcome& o) {
  const SolutionRecord& s = o.solution;
  out << std::setprecision(10);
  out << "benchmark = " << config.benchmark << '\n';
  out << "dofs = " << bench.pencil.dim() << '\n';
  out << "strategy = " << to_string(config.strategy) << '\n';
  out << "lanczos_tolerance = " << config.lanczos_tolerance << '\n';
  out << "criticality_tolerance = " << config.criticality_tolerance << '\n';
  out << "status = " << s.status << '\n';
  out << "iterations = " << s.iterations << '\n';
  out << "models_built = " << s.models_built << '\n';
  out << "factorizations = " << s.factorizations << '\n';
  out << "phi = " << s.phi << '\n';
  out << "chi = " << s.chi << '\n';
  for (Index i = 0; i < o.measured.size(); ++i) {
    out << "f" << i + 1 << " = " << s.frequencies[i] << "  (measured " << o.measured[i] << ")\n";
  }
  const auto& params = bench.pencil.params();
  for (Index j = 0; j < s.parameters.size(); ++j) {
    const auto& p = params[static_cast<std::size_t>(j)];
    out << p.name << " = " << s.parameters[j] << ' ' << p.unit;
    if (o.reference.size() > 0) {
      out << "  (reference " << o.reference[j] << ", relative error "
          << std::abs(s.parameters[j] - o.reference[j]) / std::abs(o.reference[j]) << ")";
    }
    out << '\n';
  }
  if (o.reference.size() > 0) {
    out << "max_relative_error = " << o.max_error << '\n';
    out << "mean_relative_error = " << o.mean_error << '\n';
  }
}

std::vector<NoiseTrial> run_noise_study(const RunConfig& config, const std::vector<double>& deltas,
                                        Index trials) {
  if (config.frequencies) throw ConfigError("measured: the noise study needs generated frequencies");
  if (trials < 1) throw ConfigError("noise study: at least one trial per level is required");
  const Benchmark bench = make_benchmark(config);
  const Vector clean = reference_frequencies(bench.pencil, bench.reference, config.count, config.seed);
  const Vector start = start_point(config, bench);
  std::vector<NoiseTrial> rows;
  for (std::size_t level = 0; level < deltas.size(); ++level) {
    for (Index t = 0; t < trials; ++t) {
      NoiseTrial row;
      row.delta = deltas[level];
      row.trial = t;
      const std::uint64_t seed = config.noise_seed * 1000003ULL + level * 1009ULL + static_cast<std::uint64_t>(t);
      try {
        const Vector f = perturb_frequencies(clean, row.delta, seed);
        const UpdatingProblem problem = make_problem(config, bench, f);
        const SolutionRecord sol = run_strategy(config.strategy, config, problem, start);
        row.error = max_relative_error(sol.parameters, bench.reference);
        row.converged = sol.converged;
        row.iterations = sol.iterations;
        row.status = sol.status;
      } catch (const Error& e) {
        row.error = std::numeric_limits<double>::quiet_NaN();
        row.status = std::string("failed: ") + e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_noise_csv(std::ostream& out, const std::vector<NoiseTrial>& rows) {
  out << "delta,trial,error,converged,iterations,status\n" << std::setprecision(17);
  for (const NoiseTrial& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << r.delta << ',' << r.trial << ',' << r.error << ',' << (r.converged ? 1 : 0) << ','
        << r.iterations << ',' << status << '\n';
  }
}

std::vector<StrategyRun> run_strategy_comparison(const RunConfig& config) {
  const Benchmark bench = make_benchmark(config);
  const Vector measured = measured_frequencies(config, bench);
  const UpdatingProblem problem = make_problem(config, bench, measured);
  const Vector start = start_point(config, bench);
  std::vector<StrategyRun> rows;
  for (Strategy st : {Strategy::FiniteDifference, Strategy::Analytic, Strategy::ReducedModel}) {
    StrategyRun row;
    row.strategy = to_string(st);
    row.assembly_seconds = bench.assembly_seconds;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const SolutionRecord sol = run_strategy(st, config, problem, start);
      row.seconds = seconds_since(t0);
      row.converged = sol.converged;
      row.phi = sol.phi;
      row.chi = sol.chi;
      row.factorizations = sol.factorizations;
      row.iterations = sol.iterations;
      row.parameters = sol.parameters;
      row.status = sol.status;
    } catch (const Error& e) {
      row.seconds = seconds_since(t0);
      row.status = std::string("failed: ") + e.what();
    }
    rows.push_back(std::move(row));
  }
  StrategyRun bb;
  bb.strategy = "BB";
  bb.supported = false;
  bb.status = "unsupported";
  rows.push_back(std::move(bb));
  return rows;
}

void write_comparison_csv(std::ostream& out, const std::vector<StrategyRun>& rows) {
  out << "strategy,supported,converged,phi,chi,factorizations,iterations,seconds,assembly_seconds,status\n"
      << std::setprecision(17);
  for (const StrategyRun& r : rows) {
    out << r.strategy << ',' << (r.supported ? 1 : 0) << ',';
    if (!r.supported) {
      out << ",,,,,,," << r.status << '\n';
      continue;
    }
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << (r.converged ? 1 : 0) << ',' << r.phi << ',' << r.chi << ',' << r.factorizations << ','
        << r.iterations << ',' << r.seconds << ',' << r.assembly_seconds << ',' << status << '\n';
  }
}

}  // namespace modalfit
