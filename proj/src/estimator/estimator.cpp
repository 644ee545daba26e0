#include "pathwise/estimator/estimator.hpp"

#include <cmath>
#include <unordered_map>

#include "pathwise/errors.hpp"

namespace pathwise {

IncrementEstimate estimate_increment(const Eigen::VectorXd& s_prev, const Eigen::VectorXd& s_curr,
                                     const Eigen::VectorXd& F, const Eigen::VectorXd& L, double eps,
                                     double delta_threshold) {
  if (!(eps > 0.0)) throw DomainError("estimation window must be positive");
  if (s_prev.size() != s_curr.size() || F.size() != s_prev.size() || L.size() != s_prev.size())
    throw DimensionError("estimate_increment: inconsistent dimensions");
  if (!s_prev.allFinite() || !s_curr.allFinite() || !F.allFinite() || !L.allFinite())
    throw DomainError("estimate_increment: non-finite input");
  IncrementEstimate est;
  est.l_norm = L.norm();
  const Eigen::VectorXd innovation = s_curr - s_prev - F * eps;
  if (est.l_norm <= delta_threshold) {
    est.skipped = true;
    est.residual = innovation.norm();
    return est;
  }
  est.dw_hat = L.dot(innovation) / L.squaredNorm();
  est.residual = (innovation - L * est.dw_hat).norm();
  return est;
}

IncrementEstimate estimate_increment(const Eigen::VectorXd& x_prev, const Eigen::VectorXd& x_curr, double u_prev,
                                     const SystemDef& sys, double eps, double delta_threshold) {
  Eigen::VectorXd F = sys.f(x_prev);
  if (u_prev != 0.0) F += sys.g(x_prev) * u_prev;
  return estimate_increment(x_prev, x_curr, F, sys.l(x_prev), eps, delta_threshold);
}

std::vector<IncrementEstimate> estimate_sequence(const HybridTrajectory& traj, const SystemDef& sys, double eps,
                                                 double delta_threshold) {
  std::vector<IncrementEstimate> out;
  if (traj.size() == 0) return out;
  const double q = eps / traj.dt;
  const auto w = static_cast<std::int64_t>(std::llround(q));
  if (w < 1 || std::abs(static_cast<double>(w) - q) > 1e-6)
    throw ConfigError("estimation window is not a multiple of the trajectory step");

  std::unordered_map<std::int64_t, std::size_t> row_of;
  row_of.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) row_of.emplace(traj.step[i], i);
  std::unordered_map<std::int64_t, const JumpRecord*> jump_at;
  for (const auto& j : traj.jumps) jump_at.emplace(j.step, &j);
  if (traj.jump_count > static_cast<std::int64_t>(traj.jumps.size()))
    throw ConfigError("trajectory was recorded without its jump records");

  const std::int64_t last = traj.step.back();
  for (std::int64_t k = 1; k * w <= last; ++k) {
    auto a = row_of.find((k - 1) * w);
    auto b = row_of.find(k * w);
    if (a == row_of.end() || b == row_of.end())
      throw ConfigError("trajectory is not recorded at every window boundary");
    Eigen::VectorXd x_end = traj.x(b->second);
    if (auto j = jump_at.find(k * w); j != jump_at.end()) x_end = j->second->x_pre;
    auto est = estimate_increment(Eigen::VectorXd(traj.x(a->second)), x_end, traj.u[a->second], sys, eps,
                                  delta_threshold);
    est.k = k;
    est.t_k = static_cast<double>(k * w) * traj.dt;
    out.push_back(est);
  }
  return out;
}

}  // namespace pathwise
