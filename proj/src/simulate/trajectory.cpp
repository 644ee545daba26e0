#include "pathwise/simulate/trajectory.hpp"

namespace pathwise {

const char* to_string(TerminationStatus s) {
  switch (s) {
    case TerminationStatus::completed: return "completed";
    case TerminationStatus::non_finite: return "non_finite";
    case TerminationStatus::guard_violation: return "guard_violation";
    case TerminationStatus::solver_failure: return "solver_failure";
  }
  return "unknown";
}

void HybridTrajectory::reserve(std::size_t rows) {
  const auto nn = static_cast<std::size_t>(n);
  step.reserve(rows);
  t.reserve(rows);
  x_data.reserve(rows * nn);
  if (has_z) z_data.reserve(rows * nn);
  u.reserve(rows);
  y.reserve(rows);
  y_ref.reserve(rows);
  W.reserve(rows);
  jump.reserve(rows);
}

void HybridTrajectory::append(std::int64_t step_index, double time, const PlantPoint& p, double u_value,
                              double y_ref_value, double w, bool jumped) {
  step.push_back(step_index);
  t.push_back(time);
  x_data.insert(x_data.end(), p.x.data(), p.x.data() + p.x.size());
  if (has_z) z_data.insert(z_data.end(), p.z.data(), p.z.data() + p.z.size());
  u.push_back(u_value);
  y.push_back(p.y);
  y_ref.push_back(y_ref_value);
  W.push_back(w);
  jump.push_back(jumped ? 1 : 0);
}

HybridTrajectory resample(const HybridTrajectory& traj, std::size_t stride) {
  if (stride < 1) stride = 1;
  HybridTrajectory out;
  out.mode = traj.mode;
  out.n = traj.n;
  out.has_z = traj.has_z;
  out.dt = traj.dt;
  out.epsilon = traj.epsilon;
  out.seed = traj.seed;
  out.jumps = traj.jumps;
  out.jump_count = traj.jump_count;
  out.skipped_windows = traj.skipped_windows;
  out.total_compensation = traj.total_compensation;
  out.status = traj.status;
  out.message = traj.message;
  out.failed_step = traj.failed_step;
  const std::size_t rows = traj.size();
  if (rows == 0) return out;
  const auto nn = static_cast<std::size_t>(traj.n);
  auto copy_row = [&](std::size_t i) {
    out.step.push_back(traj.step[i]);
    out.t.push_back(traj.t[i]);
    out.x_data.insert(out.x_data.end(), traj.x_data.begin() + static_cast<std::ptrdiff_t>(i * nn),
                      traj.x_data.begin() + static_cast<std::ptrdiff_t>((i + 1) * nn));
    if (traj.has_z)
      out.z_data.insert(out.z_data.end(), traj.z_data.begin() + static_cast<std::ptrdiff_t>(i * nn),
                        traj.z_data.begin() + static_cast<std::ptrdiff_t>((i + 1) * nn));
    out.u.push_back(traj.u[i]);
    out.y.push_back(traj.y[i]);
    out.y_ref.push_back(traj.y_ref[i]);
    out.W.push_back(traj.W[i]);
    out.jump.push_back(traj.jump[i]);
  };
  for (std::size_t i = 0; i < rows; i += stride) copy_row(i);
  if ((rows - 1) % stride != 0) copy_row(rows - 1);
  return out;
}

}  // namespace pathwise
