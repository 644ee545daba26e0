#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pathwise/models/example.hpp"
#include "pathwise/models/registry.hpp"
#include "pathwise/operators/operators.hpp"
#include "support.hpp"

using namespace pathwise;
using Catch::Approx;

namespace {

// Itô generator by finite differences: grad(phi) F + 1/2 L^T H L.
double ito_oracle(const ad::ScalarField& phi, const ad::VectorField& F, const ad::VectorField& L,
                  const Eigen::VectorXd& x) {
  testing::Fn f = [&](const Eigen::VectorXd& y) { return phi(y); };
  const Eigen::VectorXd g = testing::fd_gradient(f, x);
  const Eigen::MatrixXd H = testing::fd_hessian(f, x);
  const Eigen::VectorXd l = L(x);
  return g.dot(F(x)) + 0.5 * l.dot(H * l);
}

SystemDef scalar_system(double a, double b) {
  SystemDef s;
  s.name = "gbm";
  s.n = 1;
  s.f = ad::VectorField(1, [a](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::array<T, 1>{a * x[0]};
  });
  s.g = ad::VectorField::constant(Eigen::VectorXd::Ones(1));
  s.l = ad::VectorField(1, [b](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::array<T, 1>{b * x[0]};
  });
  s.h = ad::ScalarField::coordinate(1, 0);
  return s;
}

}  // namespace

TEST_CASE("stochastic Lie derivative matches the Itô generator", "[operators]") {
  const auto sys = example::system();
  const auto phi = ad::ScalarField(3, [](auto x) {
    using std::cos;
    return x[0] * x[1] + cos(x[2]) * x[0];
  });
  const auto S = ops::stochastic_lie(phi, sys);
  for (const auto& x : testing::random_points(3, 30, 0.3, 11)) {
    CHECK(testing::rel_gap(S.deterministic(x), ito_oracle(phi, sys.f, sys.l, x)) < 1e-7);
    testing::Fn f = [&](const Eigen::VectorXd& y) { return phi(y); };
    CHECK(testing::rel_gap(S.noise_coeff(x), testing::fd_gradient(f, x).dot(sys.l(x))) < 1e-9);
  }
}

TEST_CASE("geometric Brownian motion generator is analytic", "[operators]") {
  const double a = -0.7, b = 0.4;
  const auto sys = scalar_system(a, b);
  auto sq = sys.h * sys.h;
  const auto S = ops::stochastic_lie(sq, sys);
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 1.3);
  CHECK(S.deterministic(x) == Approx((2 * a + b * b) * 1.69));
  CHECK(S.noise_coeff(x) == Approx(2 * b * 1.69));
  CHECK(ops::stochastic_lie(sys.h, sys).deterministic(x) == Approx(a * 1.3));
}

TEST_CASE("Lie derivative, second Lie derivative and bracket", "[operators]") {
  const auto sys = example::system();
  const auto Lf = ops::lie(sys.h, sys.f);
  const auto L2 = ops::lie2(sys.h, sys.l, sys.l);
  const auto br = ops::lie_bracket(sys.f, sys.g);
  const auto rb = ops::lie_bracket(sys.g, sys.f);
  for (const auto& x : testing::random_points(3, 20, 0.3, 5)) {
    testing::Fn h = [&](const Eigen::VectorXd& y) { return sys.h(y); };
    CHECK(testing::rel_gap(Lf(x), testing::fd_gradient(h, x).dot(sys.f(x))) < 1e-9);
    const Eigen::VectorXd l = sys.l(x);
    CHECK(testing::rel_gap(L2(x), l.dot(testing::fd_hessian(h, x) * l)) < 1e-6);
    auto F = [&](const Eigen::VectorXd& y) { return sys.f(y); };
    auto G = [&](const Eigen::VectorXd& y) { return sys.g(y); };
    const Eigen::VectorXd expect = testing::fd_jacobian(G, x) * sys.f(x) - testing::fd_jacobian(F, x) * sys.g(x);
    CHECK(testing::rel_gap(br(x), expect) < 1e-8);
    CHECK((br(x) + rb(x)).lpNorm<Eigen::Infinity>() < 1e-14);
  }
}

TEST_CASE("Stratonovich drift", "[operators]") {
  const auto sys = example::system();
  const auto fs = ops::stratonovich_drift(sys);
  const Eigen::Vector3d x(0.1, 0.2, -0.1);
  auto L = [&](const Eigen::VectorXd& y) { return sys.l(y); };
  const Eigen::VectorXd expect = sys.f(x) - 0.5 * testing::fd_jacobian(L, x) * sys.l(x);
  CHECK(testing::rel_gap(fs(x), expect) < 1e-9);
}

TEST_CASE("relative degree of the benchmark", "[operators]") {
  const auto sys = example::system();
  const auto rep = ops::relative_degree(sys, Eigen::Vector3d::Zero(), 0.2, -1, 200);
  REQUIRE(rep.defined());
  CHECK(*rep.r == 2);
  CHECK(rep.rd_value == Approx(-2.0));
  CHECK(rep.noise_at_order_r);
  CHECK(rep.gradient_rank == 2);
  REQUIRE(rep.orders.size() >= 2);
  CHECK(rep.orders[0].max_noise < 1e-9);
  CHECK(rep.orders[0].max_control < 1e-9);
}

TEST_CASE("relative degree of other systems", "[operators]") {
  const auto integ = builtin_system("integrator").system;
  auto rep = ops::relative_degree(integ, Eigen::Vector2d::Zero());
  REQUIRE(rep.defined());
  CHECK(*rep.r == 2);
  CHECK(rep.rd_value == Approx(1.0));

  const auto gbm = scalar_system(-1.0, 0.5);
  rep = ops::relative_degree(gbm, Eigen::VectorXd::Zero(1));
  REQUIRE(rep.defined());
  CHECK(*rep.r == 1);

  // noise in the output itself: (ND) fails at order 0
  SystemDef bad = integ;
  bad.l = ad::VectorField::constant(Eigen::Vector2d(1.0, 0.0));
  rep = ops::relative_degree(bad, Eigen::Vector2d::Zero());
  CHECK_FALSE(rep.defined());
  CHECK_FALSE(rep.reason.empty());
  // S h itself is still the Ito drift; going past it needs L_l h = 0
  CHECK_NOTHROW(ops::iterate_stochastic_lie(bad, 1, {Eigen::Vector2d::Zero(), 0.2, 50}));
  CHECK_THROWS_AS(ops::iterate_stochastic_lie(bad, 2, {Eigen::Vector2d::Zero(), 0.2, 50}), NoiseDecouplingViolation);
  try {
    ops::iterate_stochastic_lie(bad, 2, {Eigen::Vector2d::Zero(), 0.2, 50});
  } catch (const NoiseDecouplingViolation& e) {
    CHECK(e.order() == 0);
    CHECK(e.magnitude() == Approx(1.0));
  }

  // control never reaches the output
  SystemDef blind = integ;
  blind.g = ad::VectorField::zero(2);
  rep = ops::relative_degree(blind, Eigen::Vector2d::Zero());
  CHECK_FALSE(rep.defined());
}

TEST_CASE("control in the diffusion is rejected", "[operators]") {
  const auto m = builtin_system("example_m").system;
  CHECK_THROWS_AS(ops::relative_degree(m, Eigen::Vector3d::Zero()), UnsupportedSystem);
}

TEST_CASE("A operator", "[operators]") {
  const auto sys = example::system();
  const auto A = ops::a_operator(sys.h, sys);
  const Eigen::Vector3d x(0.1, 0.05, -0.2);
  CHECK(A.deterministic(x) == Approx(ops::lie(sys.h, sys.g)(x)));
  CHECK(A.noise_coeff(x) == 0.0);
}

TEST_CASE("numerical rank", "[operators]") {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 2, 4, 6;
  CHECK(ops::numerical_rank(m) == 1);
  m(1, 0) = 0;
  CHECK(ops::numerical_rank(m) == 2);
}

TEST_CASE("controllability of the benchmark at the origin", "[operators]") {
  const auto rep = ops::controllability_matrix(example::system(), Eigen::Vector3d::Zero());
  CHECK(rep.invertible);
  CHECK(rep.matrix.cols() == 3);
  CHECK(rep.singular_values.minCoeff() > 0.1);
}
