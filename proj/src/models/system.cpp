#include "pathwise/models/system.hpp"

#include <algorithm>

#include "pathwise/errors.hpp"

namespace pathwise {

void SystemDef::validate() const {
  if (n <= 0) throw DimensionError("system dimension must be positive");
  if (!f.valid() || !g.valid() || !l.valid() || !h.valid())
    throw DimensionError("system '" + name + "' is missing a field");
  if (f.dim() != n || g.dim() != n || l.dim() != n || h.dim() != n || (m && m->dim() != n))
    throw DimensionError("system '" + name + "': every field must live on R^n");
}

double SystemDef::max_control_diffusion(const Eigen::VectorXd& center, double radius, int samples) const {
  if (!m) return 0.0;
  double worst = 0.0;
  for (const auto& x : sample_ball(center, radius, samples))
    worst = std::max(worst, (*m)(x).cwiseAbs().maxCoeff());
  return worst;
}

void SystemDef::require_no_control_diffusion(const Eigen::VectorXd& center, double radius) const {
  const double worst = max_control_diffusion(center, radius);
  if (worst > 1e-12)
    throw UnsupportedSystem(
        "system '" + name +
        "': the control enters the diffusion (m != 0); the resulting normal form is quadratic "
        "in u and its noise compensation is not affine in the noise, which is not supported");
}

}  // namespace pathwise
