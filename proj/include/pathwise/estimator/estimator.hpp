#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "pathwise/models/system.hpp"
#include "pathwise/simulate/trajectory.hpp"

namespace pathwise {

inline constexpr double kDefaultDeltaThreshold = 1e-6;

struct IncrementEstimate {
  std::int64_t k = 0;
  double t_k = 0.0;
  double dw_hat = 0.0;
  /// |L| <= delta: no excitation, the window is not compensated.
  bool skipped = false;
  double l_norm = 0.0;
  /// |ds - F eps - L dw_hat|, the part of the increment L cannot explain.
  double residual = 0.0;
};

/// dW_hat = L^+ (s_curr - s_prev - F eps) with L^+ = L^T / (L^T L), for any
/// coordinates in which the drift F and diffusion L were evaluated.
IncrementEstimate estimate_increment(const Eigen::VectorXd& s_prev, const Eigen::VectorXd& s_curr,
                                     const Eigen::VectorXd& F, const Eigen::VectorXd& L, double eps,
                                     double delta_threshold = kDefaultDeltaThreshold);

/// x-space version: F = f(x_prev) + g(x_prev) u_prev, L = l(x_prev).
IncrementEstimate estimate_increment(const Eigen::VectorXd& x_prev, const Eigen::VectorXd& x_curr, double u_prev,
                                     const SystemDef& sys, double eps,
                                     double delta_threshold = kDefaultDeltaThreshold);

/// One estimate per complete window of a recorded trajectory, in x. Window
/// ends use pre-jump states, window starts post-jump states.
std::vector<IncrementEstimate> estimate_sequence(const HybridTrajectory& traj, const SystemDef& sys, double eps,
                                                 double delta_threshold = kDefaultDeltaThreshold);

}  // namespace pathwise
