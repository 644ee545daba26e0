#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pathwise/autodiff/field.hpp"

namespace pathwise {

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

/// z = Phi(x) built from n scalar fields, with a damped-Newton inverse.
class CoordinateChange {
 public:
  CoordinateChange() = default;
  CoordinateChange(std::vector<ad::ScalarField> components, int relative_degree,
                   Eigen::VectorXd anchor, NewtonOptions newton = {});

  int dim() const { return static_cast<int>(components_.size()); }
  int relative_degree() const { return relative_degree_; }
  const Eigen::VectorXd& anchor() const { return anchor_; }
  const std::vector<ad::ScalarField>& components() const { return components_; }
  const ad::VectorField& map() const { return map_; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const { return map_(x); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  /// Solves Phi(x) = z starting from `guess`; throws NewtonFailure.
  Eigen::VectorXd inverse(const Eigen::VectorXd& z, const Eigen::VectorXd& guess) const;
  Eigen::VectorXd inverse(const Eigen::VectorXd& z) const { return inverse(z, anchor_); }

 private:
  std::vector<ad::ScalarField> components_;
  ad::VectorField map_;
  int relative_degree_ = 0;
  Eigen::VectorXd anchor_;
  NewtonOptions newton_;
};

}  // namespace pathwise
