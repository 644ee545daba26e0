#include "pathwise/models/coordinates.hpp"

#include <cmath>

#include "pathwise/autodiff/derivatives.hpp"
#include "pathwise/errors.hpp"

namespace pathwise {

CoordinateChange::CoordinateChange(std::vector<ad::ScalarField> components, int relative_degree,
                                   Eigen::VectorXd anchor, NewtonOptions newton)
    : components_(std::move(components)),
      map_(ad::VectorField::from_components(components_)),
      relative_degree_(relative_degree),
      anchor_(std::move(anchor)),
      newton_(newton) {
  if (anchor_.size() != dim()) throw DimensionError("chart anchor has the wrong dimension");
}

Eigen::MatrixXd CoordinateChange::jacobian(const Eigen::VectorXd& x) const {
  return ad::jacobian(map_, x);
}

Eigen::VectorXd CoordinateChange::inverse(const Eigen::VectorXd& z, const Eigen::VectorXd& guess) const {
  const double tol = newton_.tolerance * std::max(1.0, z.cwiseAbs().maxCoeff());
  Eigen::VectorXd x = guess;
  Eigen::VectorXd residual = map_(x) - z;
  double norm = residual.cwiseAbs().maxCoeff();
  int it = 0;
  for (; it < newton_.max_iterations && !(norm <= tol); ++it) {
    Eigen::VectorXd step = jacobian(x).partialPivLu().solve(residual);
    double alpha = 1.0;
    Eigen::VectorXd trial;
    Eigen::VectorXd trial_residual;
    double trial_norm = 0.0;
    for (int halvings = 0; halvings < 30; ++halvings) {
      trial = x - alpha * step;
      trial_residual = map_(trial) - z;
      trial_norm = trial_residual.cwiseAbs().maxCoeff();
      if (trial_norm < norm) break;
      alpha *= 0.5;
    }
    if (!(trial_norm < norm)) break;  // no descent: stalled at round-off or diverging
    x = std::move(trial);
    residual = std::move(trial_residual);
    norm = trial_norm;
  }
  if (!(norm <= tol)) throw NewtonFailure(norm, it);
  return x;
}

}  // namespace pathwise
