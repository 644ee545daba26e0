#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathwise/autodiff/field.hpp"
#include "pathwise/models/normal_form.hpp"
#include "pathwise/models/scalar_sde.hpp"
#include "pathwise/models/system.hpp"

namespace pathwise {

struct BuiltinSystem {
  SystemDef system;
  /// Completion functions giving L_g phi_j = 0, when known.
  std::optional<std::vector<ad::ScalarField>> completions;
  /// Closed-form normal form, when known.
  std::optional<NormalFormDef> normal_form;
  /// Closed-form zero dynamics, when known.
  std::optional<ScalarSde> zero_dynamics;
  std::string description;
};

/// "example", "integrator" (dx1 = x2 dt, dx2 = u dt + dW, y = x1) or
/// "example_m" (the example with m = (x1 + 0.1, 0, 0), which is rejected).
BuiltinSystem builtin_system(const std::string& id);
std::vector<std::string> builtin_system_ids();

}  // namespace pathwise
