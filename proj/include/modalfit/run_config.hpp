#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modalfit/fe.hpp"
#include "modalfit/objective.hpp"
#include "modalfit/trust_region.hpp"

namespace modalfit {

enum class Strategy { ReducedModel, FiniteDifference, Analytic };

std::string to_string(Strategy s);  // "RM", "A", "AD"

/// Overrides for one material region; unset fields keep the benchmark's values.
struct MaterialOverride {
  int region = 0;
  std::optional<double> youngs_modulus;  // MPa
  std::optional<double> density;
  std::optional<double> poisson;
  std::optional<std::pair<double, double>> modulus_bounds;  // present: E is free
  std::optional<std::pair<double, double>> density_bounds;  // present: rho is free
  bool fix_modulus = false;
  bool fix_density = false;
};

/// Parsed run configuration (JSON, "version": 1). See README for the schema.
struct RunConfig {
  std::string benchmark = "arch";  // arch | vault | mesh
  std::filesystem::path mesh_path;
  fe::ArchResolution arch;
  fe::VaultResolution vault;
  std::vector<MaterialOverride> materials;

  // Measured frequencies: either given, or generated at the material values.
  std::optional<Vector> frequencies;
  Index count = 5;  // default 10 for the vault
  double noise = 0.0;
  std::uint64_t noise_seed = 1;

  std::map<std::string, double> start;  // physical values by parameter name
  WeightMode weights = WeightMode::Relative;
  Vector custom_weights;
  double lanczos_tolerance = 1e-5;
  double criticality_tolerance = 1e-4;
  TrustRegionConfig trust_region;
  Strategy strategy = Strategy::ReducedModel;
  double fd_step = 1e-7;
  Index baseline_max_iterations = 500;
  std::uint64_t seed = 20180101;

  std::filesystem::path convergence_csv;
  std::filesystem::path summary;
};

/// Throws ConfigError naming the offending field (e.g. "trust_region.eta1").
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Bounds of the parameters a generated benchmark frees by default: E in MPa when
/// `modulus`, else rho in kg/m^3.
std::pair<double, double> default_bounds(const std::string& benchmark, bool modulus);

}  // namespace modalfit
