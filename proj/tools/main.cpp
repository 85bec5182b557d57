// modalfit command-line front end.
//
// Exit status: 0 success, 1 solver did not converge (or failed), 2 configuration error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modalfit/errors.hpp"
#include "modalfit/experiments.hpp"
#include "modalfit/fe.hpp"
#include "modalfit/run_config.hpp"

namespace {

using namespace modalfit;

constexpr int kSuccess = 0;
constexpr int kNotConverged = 1;
constexpr int kConfigError = 2;

// Opens `path` for writing, or returns std::cout for an empty path or "-".
std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw ConfigError("cannot open " + path + " for writing");
  return *holder;
}

void print_header(const RunConfig& cfg, const Benchmark& bench) {
  std::cout << "# benchmark " << cfg.benchmark << ", " << bench.pencil.dim() << " dofs, "
            << bench.pencil.param_count() << " parameters, strategy " << to_string(cfg.strategy) << '\n'
            << "# tau = " << cfg.lanczos_tolerance << ", epsilon = " << cfg.criticality_tolerance
            << ", frequencies = " << cfg.count << ", assembly " << std::fixed << std::setprecision(3)
            << bench.assembly_seconds << " s" << std::defaultfloat << std::setprecision(6) << '\n';
}

int cmd_update(const std::string& config_path, std::string csv, std::string summary, bool timings) {
  RunConfig cfg = load_config(config_path);
  if (!csv.empty()) cfg.convergence_csv = csv;
  if (!summary.empty()) cfg.summary = summary;
  const Benchmark bench = make_benchmark(cfg);
  print_header(cfg, bench);
  const UpdateOutcome out = run_update(cfg, bench);
  if (!cfg.convergence_csv.empty()) {
    std::unique_ptr<std::ofstream> f;
    write_convergence_csv(open_output(cfg.convergence_csv.string(), f), out.solution, timings);
  }
  if (!cfg.summary.empty()) {
    std::unique_ptr<std::ofstream> f;
    write_summary(open_output(cfg.summary.string(), f), cfg, bench, out);
  }
  write_summary(std::cout, cfg, bench, out);
  return out.solution.converged ? kSuccess : kNotConverged;
}

std::vector<double> parse_deltas(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double d = std::stod(item, &used);
      if (used != item.size() || !(d >= 0.0)) throw std::invalid_argument(item);
      out.push_back(d);
    } catch (const std::exception&) {
      throw ConfigError("--deltas: bad noise level '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--deltas: empty list");
  return out;
}

int cmd_noise(const std::string& config_path, const std::string& deltas, int trials, const std::string& out_path) {
  const RunConfig cfg = load_config(config_path);
  const auto rows = run_noise_study(cfg, parse_deltas(deltas), trials);
  std::unique_ptr<std::ofstream> f;
  write_noise_csv(open_output(out_path, f), rows);
  for (const auto& r : rows) {
    if (!r.converged) return kNotConverged;
  }
  return kSuccess;
}

int cmd_compare(const std::string& config_path, const std::string& out_path) {
  const RunConfig cfg = load_config(config_path);
  const auto rows = run_strategy_comparison(cfg);
  std::unique_ptr<std::ofstream> f;
  write_comparison_csv(open_output(out_path, f), rows);
  for (const auto& r : rows) {
    if (r.supported && !r.converged) return kNotConverged;
  }
  return kSuccess;
}

int cmd_eigs(const std::string& config_path, const std::vector<std::string>& assignments, int count,
             double tolerance) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  if (count > 0) cfg.count = count;
  const Benchmark bench = make_benchmark(cfg);
  Vector x = bench.reference;
  const auto& params = bench.pencil.params();
  for (const std::string& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("--param: expected NAME=VALUE, got '" + a + "'");
    const std::string name = a.substr(0, eq);
    Index j = 0;
    while (j < bench.pencil.param_count() && params[static_cast<std::size_t>(j)].name != name) ++j;
    if (j == bench.pencil.param_count()) throw ConfigError("--param: '" + name + "' is not a free parameter");
    try {
      x[j] = std::stod(a.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--param: bad value in '" + a + "'");
    }
  }
  const auto [k, m] = bench.pencil.evaluate(x);
  LanczosOptions o;
  o.count = cfg.count;
  o.tolerance = tolerance;
  o.seed = cfg.seed;
  const LanczosResult r = lanczos_smallest(k, m, o);
  const Vector f = frequencies_from_eigenvalues(r.eigenvalues);
  std::cout << "# " << bench.pencil.dim() << " dofs, " << r.steps << " Lanczos steps\n";
  for (Index j = 0; j < x.size(); ++j) {
    std::cout << "# " << params[static_cast<std::size_t>(j)].name << " = " << x[j] << ' '
              << params[static_cast<std::size_t>(j)].unit << '\n';
  }
  std::cout << "mode,frequency_hz,eigenvalue,error_bound\n" << std::setprecision(17);
  for (Index i = 0; i < f.size(); ++i) {
    std::cout << i + 1 << ',' << f[i] << ',' << r.eigenvalues[i] << ',' << r.error_bounds[i] << '\n';
  }
  return kSuccess;
}

int cmd_mesh(const std::string& benchmark, const std::string& config_path, const std::string& out_path) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  if (!benchmark.empty()) cfg.benchmark = benchmark;
  fe::Mesh mesh;
  if (cfg.benchmark == "arch") mesh = fe::generate_arch_on_piers(cfg.arch).first;
  else if (cfg.benchmark == "vault") mesh = fe::generate_pillared_vault(cfg.vault).first;
  else throw ConfigError("--benchmark: expected arch or vault");
  std::unique_ptr<std::ofstream> f;
  fe::write_mesh(open_output(out_path, f), mesh);
  return kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element model updating by frequency matching"};
  app.require_subcommand(1);

  std::string config, csv, summary, out, deltas = "0.0001,0.001,0.01,0.1,1", benchmark;
  bool timings = false;
  int trials = 5, count = 0;
  double tolerance = 1e-10;
  std::vector<std::string> assignments;

  auto* update = app.add_subcommand("update", "Run one model-updating problem");
  update->add_option("-c,--config", config, "Run configuration (JSON)")->required();
  update->add_option("--csv", csv, "Convergence CSV path (overrides output.convergence_csv)");
  update->add_option("--summary", summary, "Summary path (overrides output.summary)");
  update->add_flag("--timings", timings, "Add a wall_time column to the convergence CSV");

  auto* noise = app.add_subcommand("noise-study", "Recovery error versus frequency noise");
  noise->add_option("-c,--config", config, "Run configuration (JSON)")->required();
  noise->add_option("--deltas", deltas, "Comma-separated noise levels");
  noise->add_option("--trials", trials, "Trials per noise level")->check(CLI::PositiveNumber);
  noise->add_option("-o,--out", out, "CSV output (default stdout)");

  auto* compare = app.add_subcommand("compare", "Compare the A, AD and RM strategies");
  compare->add_option("-c,--config", config, "Run configuration (JSON)")->required();
  compare->add_option("-o,--out", out, "CSV output (default stdout)");

  auto* eigs = app.add_subcommand("eigs", "Print the lowest frequencies at given parameters");
  eigs->add_option("-c,--config", config, "Run configuration (JSON); default: arch");
  eigs->add_option("-p,--param", assignments, "NAME=VALUE in physical units");
  eigs->add_option("-s,--count", count, "Number of frequencies")->check(CLI::PositiveNumber);
  eigs->add_option("--tolerance", tolerance, "Lanczos tolerance")->check(CLI::PositiveNumber);

  auto* mesh = app.add_subcommand("mesh", "Write a generated benchmark mesh");
  mesh->add_option("-b,--benchmark", benchmark, "arch or vault");
  mesh->add_option("-c,--config", config, "Run configuration supplying the resolution");
  mesh->add_option("-o,--out", out, "Mesh output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kSuccess : kConfigError;
  }

  try {
    if (*update) return cmd_update(config, csv, summary, timings);
    if (*noise) return cmd_noise(config, deltas, trials, out);
    if (*compare) return cmd_compare(config, out);
    if (*eigs) return cmd_eigs(config, assignments, count, tolerance);
    if (*mesh) return cmd_mesh(benchmark, config, out);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNotConverged;
  }
  return kConfigError;
}
