#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathwise/simulate/plant.hpp"

namespace pathwise {

enum class TerminationStatus { completed, non_finite, guard_violation, solver_failure };

const char* to_string(TerminationStatus s);

struct JumpRecord {
  std::int64_t k = 0;
  std::int64_t step = 0;
  double t = 0.0;
  Eigen::VectorXd state_pre;
  Eigen::VectorXd state_post;
  Eigen::VectorXd x_pre;  // original coordinates, whatever the mode
  double u_star = 0.0;
  double dz_r = 0.0;  // applied change of z_r
  double dw_hat = 0.0;
};

/// Recorded samples plus jump records. States are stored row by row in flat
/// arrays; rows are the post-jump states.
class HybridTrajectory {
 public:
  CoordinateMode mode = CoordinateMode::x_space;
  int n = 0;
  bool has_z = false;
  double dt = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  std::vector<std::int64_t> step;
  std::vector<double> t;
  std::vector<double> x_data;
  std::vector<double> z_data;
  std::vector<double> u;
  std::vector<double> y;
  std::vector<double> y_ref;
  std::vector<double> W;
  std::vector<char> jump;

  std::vector<JumpRecord> jumps;
  std::int64_t jump_count = 0;
  std::int64_t skipped_windows = 0;
  /// Steps whose end point fell outside the chart and were bisected.
  std::int64_t refined_steps = 0;
  /// Sum of all applied z_r changes.
  double total_compensation = 0.0;

  TerminationStatus status = TerminationStatus::completed;
  std::string message;
  std::int64_t failed_step = -1;

  std::size_t size() const { return t.size(); }
  Eigen::Map<const Eigen::VectorXd> x(std::size_t row) const {
    return {x_data.data() + row * static_cast<std::size_t>(n), n};
  }
  Eigen::Map<const Eigen::VectorXd> z(std::size_t row) const {
    return {z_data.data() + row * static_cast<std::size_t>(n), n};
  }
  /// Row in the plant's own coordinates.
  Eigen::VectorXd state(std::size_t row) const {
    return mode == CoordinateMode::normal_form ? Eigen::VectorXd(z(row)) : Eigen::VectorXd(x(row));
  }
  bool ok() const { return status == TerminationStatus::completed; }

  void reserve(std::size_t rows);
  void append(std::int64_t step, double t, const PlantPoint& p, double u, double y_ref, double W, bool jumped);
};

/// Rows 0, stride, 2 stride, ... and always the last row; jump records kept.
HybridTrajectory resample(const HybridTrajectory& traj, std::size_t stride);

}  // namespace pathwise
