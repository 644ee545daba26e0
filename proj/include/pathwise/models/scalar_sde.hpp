#pragma once

#include <functional>
#include <limits>

namespace pathwise {

/// d eta = drift(eta) dt + diffusion(eta) dW on |eta| < domain_limit, with its
/// linearisation d eta = A eta dt + F eta dW at the origin.
struct ScalarSde {
  std::function<double(double)> drift;
  std::function<double(double)> diffusion;
  double drift_slope = 0.0;
  double diffusion_slope = 0.0;
  double domain_limit = std::numeric_limits<double>::infinity();
};

/// Linear scalar SDE d eta = A eta dt + F eta dW.
ScalarSde linear_scalar_sde(double A, double F);

}  // namespace pathwise
