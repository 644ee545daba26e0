#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "pathwise/models/reference.hpp"
#include "pathwise/simulate/brownian.hpp"
#include "pathwise/simulate/controller.hpp"
#include "pathwise/simulate/plant.hpp"
#include "pathwise/simulate/trajectory.hpp"

namespace pathwise {

struct Scenario {
  std::string name;
  Plant plant;
  /// Empty: open loop, u = 0.
  ControllerFactory controller;
  std::string controller_label = "open_loop";
  double dt = 1e-6;
  double t_final = 5.0;
  /// Compensation period; a positive multiple of dt.
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  /// Initial state in original coordinates.
  Eigen::VectorXd x0;
  double delta_threshold = 1e-6;
  /// Only used to fill the y_ref column.
  std::optional<ReferenceSignal> reference;
  /// Keep every stride-th step (the last step is always kept).
  int record_stride = 1;
  bool keep_jump_records = true;
  std::string output_path;

  std::int64_t steps() const;
  /// epsilon / dt, or 0 without epsilon.
  std::int64_t window_steps() const;
  void validate() const;
};

struct StepRecord {
  std::int64_t step = 0;
  double t = 0.0;
  const PlantPoint* point = nullptr;
  double u = 0.0;
  double W = 0.0;
  bool jumped = false;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// Hybrid Euler-Maruyama on the scenario grid. Between jumps
///   s_{i+1} = s_i + drift(s_i, u_i) dt + diffusion(s_i) dW_i;
/// at t_k = k epsilon the controller's jump hook may move z_r. Failures
/// (non-finite state, guard, inverse chart) end the run early and are
/// reported in the trajectory status. The observer sees every step,
/// regardless of the record stride.
HybridTrajectory integrate(const Scenario& scn, const BrownianPath& path, const StepObserver& observer = {});

/// A Brownian path covering the scenario.
BrownianPath scenario_path(const Scenario& scn);

}  // namespace pathwise
