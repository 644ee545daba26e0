#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathwise/models/scalar_sde.hpp"
#include "pathwise/simulate/brownian.hpp"
#include "pathwise/simulate/integrate.hpp"

namespace pathwise {

enum class PathOutcome { bounded, escaped, non_finite };

const char* to_string(PathOutcome o);

struct PathResult {
  std::uint64_t seed = 0;
  double initial_norm = 0.0;
  double final_norm = 0.0;
  double max_norm = 0.0;
  double t_end = 0.0;
  PathOutcome outcome = PathOutcome::bounded;
  /// final |.| below the convergence threshold
  bool converged = false;
  std::string note;
};

/// "Bounded" means never leaving the ball of radius 10x the initial
/// perturbation during the horizon, the perturbation being the radius of the
/// ball the initial conditions are drawn from (or the actual initial error,
/// when that is larger).
struct StabilityProbe {
  std::string subject;
  double horizon = 0.0;
  double dt = 0.0;
  double radius = 0.0;
  std::vector<PathResult> paths;
  int bounded = 0;
  int escaped = 0;
  int non_finite = 0;
  /// Paths whose excursion exceeded 10x their own initial norm. Reported
  /// only; a path with a tiny start can do this without leaving the ball.
  int exceeded_own_ball = 0;
  double converged_fraction = 0.0;
  /// (1/T) mean log |eta_T / eta_0|, scalar probes with a nonzero start only.
  std::optional<double> lyapunov;

  bool all_bounded() const { return bounded == static_cast<int>(paths.size()); }
};

inline constexpr double kEscapeFactor = 10.0;

struct ProbeOptions {
  double dt = 1e-4;
  std::uint64_t base_seed = 1;
  double converge_tol = 1e-3;
};

/// Simulates `paths` seeds of the scalar SDE from eta_0 uniform in [-radius, radius].
StabilityProbe probe_zero_dynamics(const ScalarSde& zd, double radius, int paths, double horizon,
                                   const ProbeOptions& opt = {});

/// Perturbs the scenario's initial state uniformly in the inf-ball of
/// `radius` and tracks |(zeta - zeta_R, eta)|_inf along each run (seeds
/// scn.seed, scn.seed + 1, ...).
StabilityProbe probe_closed_loop(const Scenario& scn, int paths, double radius, double converge_tol = 1e-3);

}  // namespace pathwise
