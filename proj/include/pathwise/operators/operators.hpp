#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathwise/autodiff/field.hpp"
#include "pathwise/models/sampling.hpp"
#include "pathwise/models/system.hpp"

namespace pathwise::ops {

/// Tolerance used for "vanishes on the neighbourhood" checks.
inline constexpr double kVanishTol = 1e-9;

/// L_F phi = (d phi / dx) F.
ad::ScalarField lie(const ad::ScalarField& phi, const ad::VectorField& F);

/// L^2_{F,G} phi = G^T (d^2 phi / dx^2) F.
ad::ScalarField lie2(const ad::ScalarField& phi, const ad::VectorField& F, const ad::VectorField& G);

/// ad_F G = (dG/dx) F - (dF/dx) G.
ad::VectorField lie_bracket(const ad::VectorField& F, const ad::VectorField& G);

/// Drift part plus white-noise coefficient of a stochastic derivative.
struct StochasticDerivative {
  ad::ScalarField deterministic;
  ad::ScalarField noise_coeff;
  int order = 0;
};

/// S phi = L_f phi + 1/2 L^2_{l,l} phi, with noise coefficient L_l phi.
StochasticDerivative stochastic_lie(const ad::ScalarField& phi, const SystemDef& sys);

/// Order-k iterate S^k h. Every lower-order noise coefficient must vanish on
/// the sampled neighbourhood, otherwise NoiseDecouplingViolation.
StochasticDerivative iterate_stochastic_lie(const SystemDef& sys, int k, const Neighbourhood& nbhd);

/// A phi = L_g phi + L^2_{l,m} phi, with noise coefficient L_m phi.
StochasticDerivative a_operator(const ad::ScalarField& phi, const SystemDef& sys);

/// f_S = f - 1/2 (dl/dx) l.
ad::VectorField stratonovich_drift(const SystemDef& sys);

/// max |phi| over the points.
double max_abs(const ad::ScalarField& phi, const std::vector<Eigen::VectorXd>& points);

/// Rank of a set of row vectors: number of singular values above rel_tol * sigma_max.
int numerical_rank(const Eigen::MatrixXd& rows, double rel_tol = 1e-9);

struct OrderDiagnostics {
  int k = 0;
  double max_noise = 0.0;    // max |L_l S^k h| over the samples
  double max_control = 0.0;  // max |L_g S^k h| over the samples
  double control_at_point = 0.0;
};

struct RelativeDegreeReport {
  std::optional<int> r;
  Eigen::VectorXd point;
  double radius = 0.0;
  int samples = 0;
  std::vector<OrderDiagnostics> orders;
  /// L_g S^{r-1} h at the point (0 when r is undefined).
  double rd_value = 0.0;
  /// Whether the white noise appears in the r-th derivative.
  bool noise_at_order_r = false;
  /// Rank of {dh, dS h, ..., dS^{r-1} h} at the point.
  int gradient_rank = 0;
  std::vector<double> gradient_singular_values;
  std::string reason;

  bool defined() const { return r.has_value(); }
};

/// Smallest r <= max_order such that (ND) and (CD) hold below order r - 1
/// on the sampled ball and L_g S^{r-1} h(point) != 0.
RelativeDegreeReport relative_degree(const SystemDef& sys, const Eigen::VectorXd& point, double radius = 0.2,
                                     int max_order = -1, int samples = 200);

struct ControllabilityReport {
  Eigen::MatrixXd matrix;  // columns g, ad_{f_S} g, ..., ad^{n-1}_{f_S} g
  Eigen::VectorXd singular_values;
  bool invertible = false;
};

ControllabilityReport controllability_matrix(const SystemDef& sys, const Eigen::VectorXd& point);

}  // namespace pathwise::ops
