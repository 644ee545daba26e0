#include "pathwise/experiments/output.hpp"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>

#include "pathwise/errors.hpp"

#ifndef PATHWISE_VERSION
#define PATHWISE_VERSION "0.1.0"
#endif
#ifndef PATHWISE_GIT_REVISION
#define PATHWISE_GIT_REVISION "unknown"
#endif

namespace pathwise::exp {

std::string version_string() { return fmt::format("pathwise {} ({})", PATHWISE_VERSION, PATHWISE_GIT_REVISION); }

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

void write_trajectory_csv(const HybridTrajectory& traj, const std::string& path) {
  auto out = fmt::output_file(path);
  std::string header = "t";
  for (int i = 1; i <= traj.n; ++i) header += fmt::format(",x{}", i);
  if (traj.has_z)
    for (int i = 1; i <= traj.n; ++i) header += fmt::format(",z{}", i);
  header += ",u,y,y_ref,W,jump\n";
  out.print("{}", header);
  for (std::size_t r = 0; r < traj.size(); ++r) {
    out.print("{:.17g}", traj.t[r]);
    const auto x = traj.x(r);
    for (int i = 0; i < traj.n; ++i) out.print(",{:.17g}", x[i]);
    if (traj.has_z) {
      const auto z = traj.z(r);
      for (int i = 0; i < traj.n; ++i) out.print(",{:.17g}", z[i]);
    }
    out.print(",{:.17g},{:.17g},{:.17g},{:.17g},{}\n", traj.u[r], traj.y[r], traj.y_ref[r], traj.W[r],
              static_cast<int>(traj.jump[r]));
  }
}

nlohmann::json run_metadata(const Scenario& scn, const BrownianPath& path, const HybridTrajectory& traj) {
  nlohmann::json j;
  j["name"] = scn.name;
  j["version"] = version_string();
  j["seed"] = scn.seed;
  j["dt"] = scn.dt;
  j["t_final"] = scn.t_final;
  j["epsilon"] = scn.epsilon ? nlohmann::json(*scn.epsilon) : nlohmann::json(nullptr);
  j["delta_threshold"] = scn.delta_threshold;
  j["controller"] = scn.controller_label;
  j["mode"] = to_string(scn.plant.mode());
  j["x0"] = std::vector<double>(scn.x0.data(), scn.x0.data() + scn.x0.size());
  j["record_stride"] = scn.record_stride;
  j["brownian"] = path.metadata();
  j["status"] = to_string(traj.status);
  if (!traj.ok()) j["message"] = traj.message;
  j["jumps"] = traj.jump_count;
  j["skipped_windows"] = traj.skipped_windows;
  j["refined_steps"] = traj.refined_steps;
  return j;
}

void write_probe_csv(const StabilityProbe& probe, const std::string& path) {
  auto f = fmt::output_file(path);
  f.print("seed,initial_norm,final_norm,max_norm,t_end,outcome,converged\n");
  for (const auto& p : probe.paths)
    f.print("{},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n", p.seed, p.initial_norm, p.final_norm, p.max_norm, p.t_end,
            to_string(p.outcome), p.converged ? 1 : 0);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace pathwise::exp
