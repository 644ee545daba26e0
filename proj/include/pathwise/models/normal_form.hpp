#pragma once

#include <vector>

#include <Eigen/Dense>

#include "pathwise/autodiff/field.hpp"
#include "pathwise/models/coordinates.hpp"
#include "pathwise/models/sampling.hpp"

namespace pathwise {

/// Normal-form coefficients at one point, with the point in both charts.
struct NormalFormCoefficients {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  double c_d = 0.0;
  double c_s = 0.0;
  double b = 0.0;
  Eigen::VectorXd p_d;
  Eigen::VectorXd p_s;
};

/// Coefficients expressed as fields of the original state x; the z-space
/// coefficient is the x-space one composed with the inverse chart.
struct NormalFormFields {
  ad::ScalarField c_d;
  ad::ScalarField c_s;
  ad::ScalarField b;
  std::vector<ad::ScalarField> p_d;
  std::vector<ad::ScalarField> p_s;
};

/// dz_i = z_{i+1} dt (i < r),  dz_r = (c_d + b u) dt + c_s dW,
/// deta = p_d dt + p_s dW.
class NormalFormDef {
 public:
  NormalFormDef() = default;
  NormalFormDef(CoordinateChange chart, NormalFormFields fields);

  int r() const { return chart_.relative_degree(); }
  int n() const { return chart_.dim(); }
  const CoordinateChange& chart() const { return chart_; }
  const NormalFormFields& fields() const { return fields_; }

  NormalFormCoefficients at_x(const Eigen::VectorXd& x) const;
  NormalFormCoefficients at_z(const Eigen::VectorXd& z, const Eigen::VectorXd& guess) const;
  NormalFormCoefficients at_z(const Eigen::VectorXd& z) const { return at_z(z, chart_.anchor()); }

  double c_d(const Eigen::VectorXd& z) const { return at_z(z).c_d; }
  double c_s(const Eigen::VectorXd& z) const { return at_z(z).c_s; }
  double b(const Eigen::VectorXd& z) const { return at_z(z).b; }

  /// z-space drift (z_2, ..., z_r, c_d + b u, p_d).
  Eigen::VectorXd drift(const NormalFormCoefficients& c, double u) const;
  /// z-space diffusion (0, ..., 0, c_s, p_s).
  Eigen::VectorXd diffusion(const NormalFormCoefficients& c) const;

  /// Smallest |b| over the sampled neighbourhood (in x).
  double min_abs_b(const Neighbourhood& nbhd) const;
  /// Throws SingularControl if |b| <= 1e-9 anywhere on the samples.
  void validate(const Neighbourhood& nbhd) const;

 private:
  CoordinateChange chart_;
  NormalFormFields fields_;
};

}  // namespace pathwise
