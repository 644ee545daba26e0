#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathwise/models/coordinates.hpp"
#include "pathwise/models/normal_form.hpp"
#include "pathwise/models/scalar_sde.hpp"
#include "pathwise/models/system.hpp"
#include "pathwise/operators/operators.hpp"

namespace pathwise {

struct TransformOptions {
  double radius = 0.2;
  int samples = 200;
  NewtonOptions newton;
};

/// A chart Phi = (h, S h, ..., S^{r-1} h, completions) plus its diagnostics.
struct Transform {
  CoordinateChange chart;
  ops::RelativeDegreeReport relative_degree;
  /// max |L_g phi_j| over the samples, one entry per completion.
  std::vector<double> completion_control;
  /// Set when some completion has L_g phi_j != 0: the internal dynamics would
  /// then depend on u and the normal form does not apply.
  bool input_dependent_internal = false;
  /// True when the completions came from the Gram-Schmidt fallback.
  bool auto_completed = false;
  Eigen::VectorXd jacobian_singular_values;
  std::vector<std::string> warnings;
};

/// Builds the chart with user-supplied completions (n - r of them).
/// Throws SingularJacobian when Phi is not a local diffeomorphism at the point.
Transform build_transform(const SystemDef& sys, const Eigen::VectorXd& point,
                          const std::vector<ad::ScalarField>& completions, const TransformOptions& opt = {});

/// Fallback: completes the chart with linear coordinates orthogonal to the
/// gradients of the first r components. Jacobian is invertible by
/// construction, but L_g phi_j generally does not vanish.
Transform build_transform_auto(const SystemDef& sys, const Eigen::VectorXd& point, const TransformOptions& opt = {});

/// Normal-form coefficients from the order-r operator calculus:
/// c_d = S^r h, c_s = L_l S^{r-1} h, b = L_g S^{r-1} h, p_d = S phi_j, p_s = L_l phi_j.
NormalFormDef normal_form(const Transform& t, const SystemDef& sys);

/// Internal dynamics restricted to zeta = 0, deta = p_d(0, eta) dt + p_s(0, eta) dW,
/// with its linearisation at eta = 0.
struct ZeroDynamics {
  int dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> diffusion;
  Eigen::MatrixXd drift_jacobian;
  Eigen::MatrixXd diffusion_jacobian;

  /// Scalar view; requires dim == 1.
  ScalarSde as_scalar() const;
};

ZeroDynamics zero_dynamics(const NormalFormDef& nf);

struct ScalarStabilityVerdict {
  double A = 0.0;
  double F = 0.0;
  double exponent = 0.0;  // A - F^2 / 2
  bool stable = false;
};

/// d eta = A eta dt + F eta dW is a.s. asymptotically stable iff A - F^2/2 < 0.
ScalarStabilityVerdict as_linear_scalar_stability(double A, double F);

}  // namespace pathwise
