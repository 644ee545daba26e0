#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "pathwise/autodiff/field.hpp"
#include "pathwise/models/sampling.hpp"

namespace pathwise {

/// dx = (f(x) + g(x) u) dt + (l(x) + m(x) u) dW,  y = h(x).
struct SystemDef {
  std::string name;
  int n = 0;
  ad::VectorField f;
  ad::VectorField g;
  ad::VectorField l;
  std::optional<ad::VectorField> m;
  ad::ScalarField h;

  /// Infinity-norm radius around the origin inside which the model is trusted.
  double working_radius = 0.5;
  /// Returns a diagnostic when x approaches a singularity of the fields.
  std::function<std::optional<std::string>(const Eigen::VectorXd&)> guard;

  /// Checks that every field lives on R^n.
  void validate() const;

  /// max |m(x)|_inf over `samples` points of the ball; 0 when m is absent.
  double max_control_diffusion(const Eigen::VectorXd& center, double radius, int samples = 100) const;

  /// Throws UnsupportedSystem unless m vanishes (tol 1e-12) near `center`.
  void require_no_control_diffusion(const Eigen::VectorXd& center, double radius) const;

  std::optional<std::string> check_guard(const Eigen::VectorXd& x) const {
    return guard ? guard(x) : std::nullopt;
  }
};

}  // namespace pathwise
