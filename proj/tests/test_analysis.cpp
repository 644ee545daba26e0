#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pathwise/analysis/stability.hpp"
#include "pathwise/experiments/runners.hpp"
#include "pathwise/models/example.hpp"
#include "pathwise/transform/transform.hpp"

using namespace pathwise;

namespace {

bool partitions(const StabilityProbe& p) {
  return p.bounded + p.escaped + p.non_finite == static_cast<int>(p.paths.size());
}

}  // namespace

TEST_CASE("benchmark zero dynamics are bounded and contracting", "[analysis]") {
  ProbeOptions opt;
  opt.dt = 1e-3;
  auto p = probe_zero_dynamics(example::zero_dynamics(), 0.2, 20, 5.0, opt);
  CHECK(partitions(p));
  CHECK(p.all_bounded());
  REQUIRE(p.lyapunov);
  CHECK(*p.lyapunov < 0.0);
}

TEST_CASE("unstable linear scalar dynamics escape", "[analysis]") {
  ProbeOptions opt;
  opt.dt = 1e-3;
  auto p = probe_zero_dynamics(linear_scalar_sde(1.0, 0.0), 0.2, 10, 5.0, opt);
  CHECK(partitions(p));
  CHECK(p.escaped > p.bounded);
  REQUIRE(p.lyapunov);
  CHECK(*p.lyapunov > 0.0);
}

TEST_CASE("a zero start stays at zero", "[analysis]") {
  auto p = probe_zero_dynamics(example::zero_dynamics(), 0.0, 3, 1.0);
  CHECK(p.all_bounded());
  for (const auto& r : p.paths) {
    CHECK(r.initial_norm == 0.0);
    CHECK(r.max_norm == 0.0);
  }
  CHECK_FALSE(p.lyapunov);
}

TEST_CASE("probe outcomes are reproducible", "[analysis]") {
  ProbeOptions opt;
  opt.dt = 1e-3;
  auto a = probe_zero_dynamics(example::zero_dynamics(), 0.2, 5, 2.0, opt);
  auto b = probe_zero_dynamics(example::zero_dynamics(), 0.2, 5, 2.0, opt);
  for (std::size_t i = 0; i < a.paths.size(); ++i) {
    CHECK(a.paths[i].final_norm == b.paths[i].final_norm);
    CHECK(a.paths[i].outcome == b.paths[i].outcome);
  }
}

TEST_CASE("estimated exponent sign follows the linear criterion", "[analysis]") {
  // (A, F) pairs on both sides of A - F^2/2 = 0, well away from it
  const std::vector<std::pair<double, double>> cases{{-2, 3}, {-1, 0.5}, {0.5, 2}, {1, 0.5}, {0.3, 0.0}};
  for (auto [A, F] : cases) {
    const bool stable = as_linear_scalar_stability(A, F).stable;
    int agree = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      ProbeOptions opt;
      opt.dt = 1e-3;
      opt.base_seed = seed * 100;
      auto p = probe_zero_dynamics(linear_scalar_sde(A, F), 0.2, 1, 20.0, opt);
      REQUIRE(p.lyapunov);
      if ((*p.lyapunov < 0.0) == stable) ++agree;
    }
    INFO("A = " << A << ", F = " << F);
    CHECK(agree >= 9);
  }
}

TEST_CASE("idealistic tracking is bounded under perturbation", "[analysis]") {
  exp::ExperimentConfig cfg;
  cfg.simulation.dt = 1e-4;
  cfg.simulation.t_final = 2.0;
  const auto ex = exp::example_setup(cfg);
  ControllerSpec spec;
  spec.family = ControllerFamily::idealistic;
  spec.poles = ex.poles;
  const auto scn = exp::make_scenario(cfg, ex, spec, 1, "probe");
  auto p = probe_closed_loop(scn, 20, 0.05);
  CHECK(partitions(p));
  CHECK(p.all_bounded());
}

TEST_CASE("zero-noise stabilisation probe runs and reports", "[analysis]") {
  exp::ExperimentConfig cfg;
  cfg.simulation.dt = 1e-4;
  cfg.simulation.t_final = 2.0;
  cfg.reference.beta = 0.0;
  cfg.reference.alpha = 0.0;
  const auto ex = exp::example_setup(cfg);
  ControllerSpec spec;
  spec.family = ControllerFamily::zero_noise;
  spec.poles = ex.poles;
  const auto scn = exp::make_scenario(cfg, ex, spec, 1, "zn");
  auto p = probe_closed_loop(scn, 5, 0.05);
  CHECK(partitions(p));
  CHECK(p.paths.size() == 5);
}

TEST_CASE("no perturbation and no noise is trivially bounded", "[analysis]") {
  exp::ExperimentConfig cfg;
  cfg.simulation.dt = 1e-3;
  cfg.simulation.t_final = 1.0;
  cfg.reference.beta = 0.0;
  cfg.reference.alpha = 0.0;
  auto ex = exp::example_setup(cfg);
  // silence the noise
  auto builtin = ex.builtin;
  builtin.system.l = ad::VectorField::zero(3);
  ControllerSpec spec;
  spec.family = ControllerFamily::zero_noise;
  spec.poles = ex.poles;
  auto scn = exp::make_scenario(cfg, ex, spec, 1, "quiet");
  scn.plant = Plant::x_space(builtin.system, ex.nf);
  auto p = probe_closed_loop(scn, 3, 0.0);
  CHECK(p.all_bounded());
  for (const auto& r : p.paths) CHECK(r.max_norm < 1e-12);
}
