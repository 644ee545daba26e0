#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathwise/experiments/config.hpp"
#include "pathwise/experiments/output.hpp"
#include "pathwise/experiments/runners.hpp"

using namespace pathwise;
using namespace pathwise::exp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("pathwise_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig quick() {
  ExperimentConfig cfg;
  cfg.simulation.dt = 1e-4;
  cfg.simulation.t_final = 0.5;
  cfg.figures.comparison_t_final = 0.5;
  cfg.simulation.record_stride = 10;
  cfg.controller.epsilon = 1e-3;
  cfg.workers = 1;
  return cfg;
}

std::vector<std::string> column(const std::string& csv, const std::string& name) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::istringstream h(line);
    for (std::string c; std::getline(h, c, ',');) header.push_back(c);
  }
  const auto idx = std::find(header.begin(), header.end(), name) - header.begin();
  std::vector<std::string> out;
  while (std::getline(in, line)) {
    std::istringstream r(line);
    std::string cell;
    for (long i = 0; i <= idx; ++i) std::getline(r, cell, ',');
    out.push_back(cell);
  }
  return out;
}

}  // namespace

TEST_CASE("config file overrides defaults", "[experiments]") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  const auto path = (dir / "c.ini").string();
  std::ofstream(path) << "[simulation]\ndt = 1e-5\nx0 = 0.1, 0, -0.1\nmode = x_space\n"
                         "[controller]\nfamily = zero_noise\nepsilon = none\npoles = -2, -5\n"
                         "[figures]\nseeds = 1, 2, 3\nepsilons = 1e-2, 1e-3\n"
                         "[output]\ndir = somewhere\nworkers = 2\n";
  auto cfg = ExperimentConfig::load(path);
  CHECK(cfg.simulation.dt == 1e-5);
  CHECK(cfg.simulation.x0[0] == 0.1);
  CHECK(cfg.simulation.x0[2] == -0.1);
  CHECK(cfg.simulation.mode == CoordinateMode::x_space);
  CHECK(cfg.controller.family == "zero_noise");
  CHECK_FALSE(cfg.controller.epsilon);
  CHECK(cfg.controller.poles == std::vector<double>{-2, -5});
  CHECK(cfg.figures.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(cfg.output_dir == "somewhere");
  CHECK(cfg.workers == 2);
  // untouched keys keep their defaults
  CHECK(cfg.reference.omega == 5.0);
  CHECK(cfg.simulation.t_final == 5.0);
}

TEST_CASE("bad config values are reported", "[experiments]") {
  const auto dir = scratch("badconfig");
  fs::create_directories(dir);
  const auto path = (dir / "c.ini").string();
  std::ofstream(path) << "[simulation]\ndt = fast\n";
  CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
  std::ofstream(path) << "[simulation]\nmode = polar\n";
  CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
  std::ofstream(path) << "[figures]\nseeds = 1.5\n";
  CHECK_THROWS_AS(ExperimentConfig::load(path), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::load((dir / "missing.ini").string()), ConfigError);
  ExperimentConfig cfg;
  cfg.simulation.x0 = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("fast profile", "[experiments]") {
  ExperimentConfig cfg;
  cfg.apply_fast_profile();
  CHECK(cfg.fast);
  CHECK(cfg.tolerance_scale == 10.0);
  CHECK(cfg.simulation.dt == 1e-5);
  CHECK(cfg.figures.epsilons == std::vector<double>{1e-2, 1e-3, 1e-4});
  for (double e : cfg.estimator.epsilons) CHECK(e >= 1e-4);
}

TEST_CASE("list parsing", "[experiments]") {
  CHECK(parse_list("1e-3, 2 ,3") == std::vector<double>{1e-3, 2, 3});
  CHECK(parse_list("").empty());
  CHECK(parse_vector("1,2").size() == 2);
  CHECK_THROWS_AS(parse_list("1, x"), ConfigError);
}

TEST_CASE("reruns reproduce CSV output byte for byte", "[experiments]") {
  auto cfg = quick();
  cfg.output_dir = scratch("rerun_a").string();
  const auto a = run_simulate(cfg);
  cfg.output_dir = scratch("rerun_b").string();
  const auto b = run_simulate(cfg);
  REQUIRE_FALSE(a.metrics.csv.empty());
  const auto sa = slurp(a.metrics.csv);
  CHECK(sa.size() > 1000);
  CHECK(sa == slurp(b.metrics.csv));
  CHECK(sa.rfind("t,x1,x2,x3,z1,z2,z3,u,y,y_ref,W,jump\n", 0) == 0);
}

TEST_CASE("comparison group shares one path", "[experiments]") {
  auto cfg = quick();
  cfg.figures.epsilons = {1e-2, 1e-3};
  cfg.output_dir = scratch("group").string();
  const auto rep = run_fig2_fig3(cfg);
  REQUIRE(rep.groups.size() == 1);
  const auto& g = rep.groups[0];
  REQUIRE(g.runs.size() == 4);
  const auto w0 = column(slurp(g.runs[0].csv), "W");
  const auto t0 = column(slurp(g.runs[0].csv), "t");
  CHECK(w0.size() == 501);
  for (const auto& r : g.runs) {
    CHECK(column(slurp(r.csv), "W") == w0);
    CHECK(column(slurp(r.csv), "t") == t0);
    CHECK(r.status == "completed");
  }
  CHECK(g.runs[0].controller == "idealistic/track");
  CHECK(g.runs[1].controller == "zero_noise/track");
}

TEST_CASE("regulation to zero", "[experiments]") {
  auto cfg = quick();
  // slowest mode e^{-3t}: by T/2 = 2.5 the error is about 1e-4
  cfg.simulation.t_final = 5.0;
  cfg.reference.alpha = 0.0;
  cfg.reference.beta = 0.0;
  cfg.simulation.x0 = Eigen::Vector3d(0.05, 0.0, 0.0);
  const auto rep = run_fig1(cfg);
  CHECK(rep.deterministic);
  CHECK(rep.converged);
  for (const auto& tr : rep.trajectories) CHECK(std::abs(tr.y.back()) < 1e-3);
}

TEST_CASE("analysis summary of the benchmark", "[experiments]") {
  ExperimentConfig cfg;
  const auto rep = run_analyze(cfg, false);
  REQUIRE(rep.relative_degree.defined());
  CHECK(*rep.relative_degree.r == 2);
  CHECK(rep.b == Catch::Approx(-2.0));
  CHECK(rep.zd_verdict.stable);
  REQUIRE(rep.closed_form_gap);
  CHECK(*rep.closed_form_gap < 1e-8);
  CHECK(rep.controllability.invertible);
  CHECK_FALSE(rep.probe);
  const auto j = rep.to_json();
  CHECK(j["relative_degree"] == 2);
  CHECK(j["zero_dynamics"]["as_stable"] == true);
  CHECK(rep.to_text().find("relative degree: 2") != std::string::npos);
}

TEST_CASE("analysis rejects control in the diffusion", "[experiments]") {
  ExperimentConfig cfg;
  cfg.analysis.system = "example_m";
  CHECK_THROWS_AS(run_analyze(cfg, false), UnsupportedSystem);
}

TEST_CASE("analysis surfaces a singular chart", "[experiments]") {
  ExperimentConfig cfg;
  // x2 = pi/2: cos x2 = 0 and the fields themselves are singular
  cfg.analysis.point = Eigen::Vector3d(0.0, 1.5707963267948966, 0.0);
  CHECK_THROWS_AS(run_analyze(cfg, false), Error);
}

TEST_CASE("output helpers", "[experiments]") {
  CHECK(join_path("a", "b.csv") == (fs::path("a") / "b.csv").string());
  CHECK(version_string().find("pathwise") == 0);
  const auto dir = scratch("mk") / "x" / "y";
  ensure_directory(dir.string());
  CHECK(fs::is_directory(dir));
}
