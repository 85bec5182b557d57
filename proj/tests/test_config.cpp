#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "modalfit/errors.hpp"
#include "modalfit/experiments.hpp"
#include "modalfit/run_config.hpp"

using namespace modalfit;

namespace {

std::string error_of(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const auto c = parse_config(R"({"version": 1})");
  CHECK(c.benchmark == "arch");
  CHECK(c.count == 5);
  CHECK(c.lanczos_tolerance == 1e-5);
  CHECK(c.criticality_tolerance == 1e-4);
  CHECK(c.weights == WeightMode::Relative);
  CHECK(c.strategy == Strategy::ReducedModel);
  CHECK(parse_config(R"({"version": 1, "benchmark": {"kind": "vault"}})").count == 10);
}

TEST_CASE("full config") {
  const auto c = parse_config(R"({
    "version": 1,
    "benchmark": {"kind": "arch", "resolution": {"radial": 2, "arc": 20, "pier_height": 3}},
    "materials": [{"region": 2, "E": 4000, "free": {"E": [1000, 9000]}, "fixed": ["rho"]}],
    "measured": {"frequencies": [1.0, 2.0, 3.5]},
    "start": {"E2": 3000},
    "weights": [1, 1, 2],
    "tolerances": {"lanczos": 1e-6, "criticality": 1e-5},
    "trust_region": {"eta1": 0.1, "initial_radius": 0.2},
    "strategy": "AD",
    "baseline": {"fd_step": 1e-6},
    "seed": 7,
    "output": {"convergence_csv": "c.csv", "summary": "s.txt"}
  })");
  CHECK(c.arch.arc == 20);
  REQUIRE(c.materials.size() == 1);
  CHECK(*c.materials[0].youngs_modulus == 4000);
  CHECK(c.materials[0].modulus_bounds->second == 9000);
  CHECK(c.materials[0].fix_density);
  CHECK(c.count == 3);
  CHECK(c.start.at("E2") == 3000);
  CHECK(c.weights == WeightMode::Custom);
  CHECK(c.lanczos_tolerance == 1e-6);
  CHECK(c.trust_region.eta1 == 0.1);
  CHECK(c.strategy == Strategy::Analytic);
  CHECK(c.seed == 7);
  CHECK(c.convergence_csv == "c.csv");
}

TEST_CASE("config errors name the field") {
  CHECK(error_of("{").find("JSON") != std::string::npos);
  CHECK(error_of(R"({})").find("version") != std::string::npos);
  CHECK(error_of(R"({"version": 2})").find("version") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "colour": 3})").find("colour") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "trust_region": {"eta1": 0.95}})").find("trust_region") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "materials": [{"region": 2, "free": {"E": [9000, 1000]}}]})")
            .find("materials[0].free.E") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "measured": {"frequencies": [2, 1]}})").find("measured.frequencies") !=
        std::string::npos);
  CHECK(error_of(R"({"version": 1, "measured": {"noise": -0.1}})").find("measured.noise") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "measured": {"frequencies": [1], "generate": true}})") != "");
  CHECK(error_of(R"({"version": 1, "weights": [1, 2]})").find("weights") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "weights": "absolute"})").find("weights") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "strategy": "BB"})").find("strategy") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "tolerances": {"lanczos": 0}})").find("tolerances.lanczos") !=
        std::string::npos);
  CHECK(error_of(R"({"version": 1, "benchmark": {"kind": "mesh"}})").find("path") != std::string::npos);
  CHECK(error_of(R"({"version": 1, "materials": [{"region": 2, "free": {"E": [1, 2]}, "fixed": ["E"]}]})") != "");
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("benchmark construction errors") {
  auto c = parse_config(R"({"version": 1, "materials": [{"region": 7, "E": 1000}]})");
  CHECK_THROWS_AS(make_benchmark(c), ConfigError);
  c = parse_config(R"({"version": 1, "materials": [{"region": 2, "fixed": ["E", "rho"]}, {"region": 3, "fixed": ["E"]}]})");
  CHECK_THROWS_AS(make_benchmark(c), ConfigError);
  c = parse_config(R"({"version": 1, "start": {"E9": 100}})");
  const auto bench = make_benchmark(c);
  CHECK_THROWS_AS(start_point(c, bench), ConfigError);
  c = parse_config(R"({"version": 1, "start": {"E2": 100}})");
  CHECK_THROWS_AS(start_point(c, bench), ConfigError);
}

TEST_CASE("arch benchmark defaults") {
  const auto bench = make_benchmark(parse_config(R"({"version": 1})"));
  CHECK(bench.pencil.param_count() == 3);
  CHECK(bench.reference[0] == 5000);
  CHECK(bench.reference[1] == 2200);
  CHECK(bench.reference[2] == 4800);
  CHECK(bench.box.lower[0] == 1000);
  CHECK(bench.box.upper[0] == 9000);
  CHECK(bench.box.lower[1] == 1000);
  CHECK(bench.box.upper[1] == 3000);
}

TEST_CASE("noise perturbation respects its bound and is seeded") {
  const Vector f = (Vector(4) << 1, 2, 3, 4).finished();
  const Vector a = perturb_frequencies(f, 0.01, 5);
  const Vector b = perturb_frequencies(f, 0.01, 5);
  CHECK(a == b);
  CHECK(perturb_frequencies(f, 0.0, 5) == f);
  for (Index i = 0; i < 4; ++i) CHECK(std::abs(a[i] - f[i]) <= 0.01 * f[i] + 1e-15);
  for (Index i = 1; i < 4; ++i) CHECK(a[i] >= a[i - 1]);
}

TEST_CASE("relative error metrics") {
  const Vector r = (Vector(2) << 10, 20).finished();
  const Vector x = (Vector(2) << 11, 20).finished();
  CHECK(max_relative_error(x, r) == doctest::Approx(0.1));
  CHECK(mean_relative_error(x, r) == doctest::Approx(0.05));
}

TEST_CASE("update run writes CSV and summary") {
  auto c = parse_config(R"({"version": 1, "start": {"E2": 4500, "rho2": 2000, "E3": 5200}})");
  const auto bench = make_benchmark(c);
  const auto out = run_update(c, bench);
  CHECK(out.solution.converged);
  CHECK(out.max_error <= 1e-4);

  std::ostringstream csv;
  write_convergence_csv(csv, out.solution, false);
  const std::string text = csv.str();
  CHECK(text.rfind("k,phi,f1,f2,f3,f4,f5,chi,radius,rho,accepted,factorizations\n", 0) == 0);
  CHECK(text.find("wall_time") == std::string::npos);
  const auto lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == static_cast<long>(out.solution.history.size()) + 1);
  std::ostringstream timed;
  write_convergence_csv(timed, out.solution, true);
  CHECK(timed.str().find(",wall_time\n") != std::string::npos);

  std::ostringstream summary;
  write_summary(summary, c, bench, out);
  CHECK(summary.str().find("1e-05") != std::string::npos);
  CHECK(summary.str().find("0.0001") != std::string::npos);
  CHECK(summary.str().find("E2") != std::string::npos);
}

TEST_CASE("noise study records every trial") {
  auto c = parse_config(R"({"version": 1, "measured": {"noise_seed": 3}})");
  const auto rows = run_noise_study(c, {0.0, 0.01}, 2);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].error <= 1e-4);
  for (const auto& r : rows) CHECK(r.converged);
  std::ostringstream csv;
  write_noise_csv(csv, rows);
  CHECK(csv.str().rfind("delta,trial,error", 0) == 0);
}
