#include "pathwise/models/scalar_sde.hpp"

namespace pathwise {

ScalarSde linear_scalar_sde(double A, double F) {
  ScalarSde sde;
  sde.drift = [A](double eta) { return A * eta; };
  sde.diffusion = [F](double eta) { return F * eta; };
  sde.drift_slope = A;
  sde.diffusion_slope = F;
  return sde;
}

}  // namespace pathwise
