#pragma once

#include "pathwise/models/coordinates.hpp"
#include "pathwise/models/normal_form.hpp"
#include "pathwise/models/scalar_sde.hpp"
#include "pathwise/models/system.hpp"

namespace pathwise::example {

// Three-state benchmark with output y = x1 + sin x2 - x3:
//   f = (sin x2 (1 + x1), -2 tan x2, 2 x3 + x1 sin x2 - 2 sin x2 x1^2 / cos^2 x2)
//   g = (e^x3, 0, e^x3)
//   l = (x1, -2 x1 / cos x2, -x1)
// It has stochastic relative degree 2 at the origin.

SystemDef system();

/// Phi(x) = (x1 + sin x2 - x3, -sin x2 - 2 x3, x1 - x3).
CoordinateChange phi();

/// Closed-form normal form in the Phi chart.
NormalFormDef normal_form();

/// d eta = (-2 eta + 9 eta^3 / (2 (eta^2 - 1))) dt + 3 eta dW, |eta| < 1.
ScalarSde zero_dynamics();

/// The x with Phi(x) = (0, 0, eta).
Eigen::VectorXd zero_dynamics_point(double eta);

}  // namespace pathwise::example
