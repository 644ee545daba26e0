#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pathwise/estimator/estimator.hpp"
#include "pathwise/experiments/runners.hpp"
#include "pathwise/simulate/integrate.hpp"

using namespace pathwise;
using Catch::Approx;

namespace {

// dx = F dt + L dW with constant F and L.
SystemDef additive(const Eigen::Vector2d& F, const Eigen::Vector2d& L) {
  SystemDef s;
  s.name = "additive";
  s.n = 2;
  s.f = ad::VectorField::constant(F);
  s.g = ad::VectorField::zero(2);
  s.l = ad::VectorField::constant(L);
  s.h = ad::ScalarField::coordinate(2, 0);
  return s;
}

}  // namespace

TEST_CASE("pseudo-inverse estimate of one increment", "[estimator]") {
  const Eigen::Vector2d F(0.3, -1.0), L(2.0, 1.0);
  const double eps = 1e-3, dw = 0.0123;
  const Eigen::Vector2d s0(0.1, 0.2);
  const Eigen::Vector2d s1 = s0 + F * eps + L * dw;
  auto est = estimate_increment(s0, s1, F, L, eps);
  CHECK_FALSE(est.skipped);
  CHECK(est.dw_hat == Approx(dw).epsilon(1e-13));
  CHECK(est.l_norm == Approx(std::sqrt(5.0)));
  CHECK(est.residual < 1e-15);
  // a component orthogonal to L shows up in the residual, not the estimate
  const Eigen::Vector2d perp(-1.0, 2.0);
  est = estimate_increment(s0, s1 + 1e-3 * perp, F, L, eps);
  CHECK(est.dw_hat == Approx(dw).epsilon(1e-12));
  CHECK(est.residual == Approx(1e-3 * std::sqrt(5.0)));
}

TEST_CASE("windows without excitation are skipped", "[estimator]") {
  const Eigen::Vector2d s(0, 0);
  auto est = estimate_increment(s, s, Eigen::Vector2d::Zero(), Eigen::Vector2d(1e-7, 0), 1e-3);
  CHECK(est.skipped);
  CHECK(est.dw_hat == 0.0);
  est = estimate_increment(s, s, Eigen::Vector2d::Zero(), Eigen::Vector2d(1e-7, 0), 1e-3, 1e-8);
  CHECK_FALSE(est.skipped);
}

TEST_CASE("additive noise with zero drift is recovered exactly", "[estimator]") {
  const auto sys = additive(Eigen::Vector2d::Zero(), Eigen::Vector2d(0.5, -1.5));
  Scenario s;
  s.plant = Plant::x_space(sys);
  s.dt = 1e-4;
  s.t_final = 0.5;
  s.seed = 9;
  s.x0 = Eigen::Vector2d(0.2, 0.1);
  s.record_stride = 10;
  const auto path = scenario_path(s);
  const auto traj = integrate(s, path);
  for (double eps : {1e-3, 1e-2}) {
    const auto est = estimate_sequence(traj, sys, eps);
    const auto w = static_cast<std::int64_t>(std::llround(eps / s.dt));
    REQUIRE(static_cast<std::int64_t>(est.size()) == path.steps() / w);
    double worst = 0.0;
    for (std::size_t k = 0; k < est.size(); ++k)
      worst = std::max(worst, std::abs(est[k].dw_hat - path.increment_sum(static_cast<std::int64_t>(k) * w, w)));
    CHECK(worst < 1e-14);
  }
}

TEST_CASE("estimate_sequence needs aligned records", "[estimator]") {
  const auto sys = additive(Eigen::Vector2d::Zero(), Eigen::Vector2d(1, 0));
  Scenario s;
  s.plant = Plant::x_space(sys);
  s.dt = 1e-3;
  s.t_final = 0.1;
  s.x0 = Eigen::Vector2d::Zero();
  s.record_stride = 3;
  const auto traj = integrate(s, scenario_path(s));
  CHECK_THROWS_AS(estimate_sequence(traj, sys, 1e-2), ConfigError);
  CHECK_THROWS_AS(estimate_sequence(traj, sys, 1.5e-3), ConfigError);
}

TEST_CASE("estimator error shrinks with the window on the benchmark", "[estimator]") {
  exp::ExperimentConfig cfg;
  cfg.estimator.dt = 1e-5;
  cfg.estimator.epsilons = {1e-2, 1e-3, 1e-4};
  cfg.estimator.seeds = {1, 2};
  cfg.workers = 1;
  const auto study = exp::run_estimator_study(cfg);
  REQUIRE(study.rows.size() == 6);
  CHECK(study.has_verdict);
  CHECK(study.pass());
}

TEST_CASE("estimator study edge cases", "[estimator]") {
  exp::ExperimentConfig cfg;
  cfg.estimator.dt = 1e-5;
  cfg.estimator.seeds = {};
  auto empty = exp::run_estimator_study(cfg);
  CHECK(empty.rows.empty());
  cfg.estimator.seeds = {1};
  cfg.estimator.epsilons = {1e-3};
  auto single = exp::run_estimator_study(cfg);
  CHECK(single.rows.size() == 1);
  CHECK_FALSE(single.has_verdict);
  CHECK(single.decay.empty());
}
