#include "pathwise/models/registry.hpp"

#include <array>

#include "pathwise/errors.hpp"
#include "pathwise/models/example.hpp"

namespace pathwise {

std::vector<std::string> builtin_system_ids() { return {"example", "integrator", "example_m"}; }

BuiltinSystem builtin_system(const std::string& id) {
  BuiltinSystem b;
  if (id == "example") {
    b.system = example::system();
    b.completions = std::vector<ad::ScalarField>{ad::ScalarField(3, [](auto x) { return x[0] - x[2]; })};
    b.normal_form = example::normal_form();
    b.zero_dynamics = example::zero_dynamics();
    b.description = "three-state benchmark, y = x1 + sin x2 - x3";
    return b;
  }
  if (id == "integrator") {
    SystemDef s;
    s.name = "integrator";
    s.n = 2;
    s.f = ad::VectorField(2, [](auto x) {
      using T = std::decay_t<decltype(x[0])>;
      return std::array<T, 2>{x[1], T(0.0)};
    });
    s.g = ad::VectorField::constant(Eigen::Vector2d(0.0, 1.0));
    s.l = ad::VectorField::constant(Eigen::Vector2d(0.0, 1.0));
    s.h = ad::ScalarField::coordinate(2, 0);
    b.system = std::move(s);
    b.completions = std::vector<ad::ScalarField>{};
    b.description = "double integrator with additive noise on the input channel";
    return b;
  }
  if (id == "example_m") {
    b.system = example::system();
    b.system.name = "example_m";
    b.system.m = ad::VectorField(3, [](auto x) {
      using T = std::decay_t<decltype(x[0])>;
      return std::array<T, 3>{x[0] + 0.1, T(0.0), T(0.0)};
    });
    b.description = "the benchmark with a control-dependent diffusion m = (x1 + 0.1, 0, 0)";
    return b;
  }
  throw ConfigError("unknown system '" + id + "'");
}

}  // namespace pathwise
