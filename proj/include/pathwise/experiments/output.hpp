#pragma once

#include <string>

#include <json.hpp>

#include "pathwise/analysis/stability.hpp"
#include "pathwise/simulate/brownian.hpp"
#include "pathwise/simulate/integrate.hpp"
#include "pathwise/simulate/trajectory.hpp"

namespace pathwise::exp {

/// Library version plus the git revision it was built from.
std::string version_string();

/// Columns t, x1..xn, [z1..zn,] u, y, y_ref, W, jump; numbers printed with
/// 17 significant digits so runs diff byte for byte.
void write_trajectory_csv(const HybridTrajectory& traj, const std::string& path);

/// Seed, dt, epsilon, controller, generator and version of one run.
nlohmann::json run_metadata(const Scenario& scn, const BrownianPath& path, const HybridTrajectory& traj);

/// One row per path: seed,initial_norm,final_norm,max_norm,t_end,outcome,converged.
void write_probe_csv(const StabilityProbe& probe, const std::string& path);

void write_json(const nlohmann::json& j, const std::string& path);

/// Creates the directory (and parents) when missing; "" means "no output".
void ensure_directory(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& file);

}  // namespace pathwise::exp
