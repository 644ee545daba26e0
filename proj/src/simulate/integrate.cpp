#include "pathwise/simulate/integrate.hpp"

#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "pathwise/errors.hpp"

namespace pathwise {

namespace {

std::int64_t grid_ratio(double a, double dt, const char* what) {
  const double q = a / dt;
  const auto k = static_cast<std::int64_t>(std::llround(q));
  if (k < 1 || std::abs(static_cast<double>(k) - q) > 1e-6)
    throw ConfigError(fmt::format("{} = {:g} is not a positive multiple of dt = {:g}", what, a, dt));
  return k;
}

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

constexpr std::uint64_t kBridgeSalt = 0x632be59bd9b4e019ULL;
constexpr int kMaxRefine = 20;

}  // namespace

std::int64_t Scenario::steps() const { return grid_ratio(t_final, dt, "t_final"); }

std::int64_t Scenario::window_steps() const { return epsilon ? grid_ratio(*epsilon, dt, "epsilon") : 0; }

void Scenario::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (plant.n() == 0) throw ConfigError("scenario has no plant");
  if (x0.size() != plant.n()) throw ConfigError("initial state has the wrong dimension");
  if (record_stride < 1) throw ConfigError("record stride must be at least 1");
  steps();
  window_steps();
}

BrownianPath scenario_path(const Scenario& scn) { return BrownianPath::generate(scn.seed, scn.dt, scn.steps()); }

HybridTrajectory integrate(const Scenario& scn, const BrownianPath& path, const StepObserver& observer) {
  scn.validate();
  const std::int64_t N = scn.steps();
  const std::int64_t window = scn.window_steps();
  if (path.steps() < N) throw ConfigError("Brownian path is shorter than the horizon");
  if (std::abs(path.dt() - scn.dt) > 1e-12 * scn.dt) throw ConfigError("Brownian path and scenario dt differ");

  const Plant& plant = scn.plant;
  std::unique_ptr<Controller> ctrl = scn.controller ? scn.controller() : nullptr;
  const bool noise_access = ctrl && ctrl->needs_noise();
  const bool jumps_on = ctrl && ctrl->wants_jumps();
  if (jumps_on && window == 0) throw ConfigError("controller compensates at t_k = k epsilon but epsilon is unset");
  if (jumps_on && !plant.has_chart()) throw ConfigError("compensating controller needs a normal-form chart");

  HybridTrajectory traj;
  traj.mode = plant.mode();
  traj.n = plant.n();
  traj.has_z = plant.has_chart();
  traj.dt = scn.dt;
  traj.epsilon = scn.epsilon.value_or(0.0);
  traj.seed = path.seed();
  const auto stride = static_cast<std::int64_t>(scn.record_stride);
  traj.reserve(static_cast<std::size_t>(N / stride + 2));

  auto fail = [&](TerminationStatus s, std::int64_t i, std::string msg) {
    traj.status = s;
    traj.failed_step = i;
    traj.message = fmt::format("step {} (t = {:.9g}): {}", i, static_cast<double>(i) * scn.dt, msg);
  };

  PlantPoint point;
  PlantPoint window_start;
  double u_start = 0.0;
  double u = 0.0;
  Eigen::VectorXd state;
  try {
    state = plant.initial_state(scn.x0);
    point = plant.evaluate(state, scn.x0);
  } catch (const Error& e) {
    fail(TerminationStatus::solver_failure, 0, e.what());
    return traj;
  }

  for (std::int64_t i = 0; i <= N; ++i) {
    const double t = static_cast<double>(i) * scn.dt;
    bool jumped = false;
    try {
      if (!finite(point.state) || !finite(point.x)) {
        fail(TerminationStatus::non_finite, i, "state is not finite");
        break;
      }
      if (auto g = plant.guard(point)) {
        fail(TerminationStatus::guard_violation, i, *g);
        break;
      }

      if (jumps_on && i > 0 && i % window == 0) {
        JumpContext jc;
        jc.k = i / window;
        jc.step = i;
        jc.t = t;
        jc.epsilon = *scn.epsilon;
        jc.plant = &plant;
        jc.start = &window_start;
        jc.u_start = u_start;
        jc.end = &point;
        if (auto d = ctrl->jump(jc)) {
          if (d->skipped) {
            ++traj.skipped_windows;
          } else if (d->u_star != 0.0) {
            const double dz = point.coeffs->b * d->u_star;
            Eigen::VectorXd post = plant.jump_state(point, dz);
            PlantPoint post_point = plant.evaluate(post, point.x);
            if (scn.keep_jump_records)
              traj.jumps.push_back({jc.k, i, t, point.state, post_point.state, point.x, d->u_star, dz, d->dw_hat});
            ++traj.jump_count;
            traj.total_compensation += dz;
            point = std::move(post_point);
            state = point.state;
            jumped = true;
          }
        }
      }

      if (i == N) {
        // last row repeats the last applied input
      } else {
        StepContext sc;
        sc.step = i;
        sc.t = t;
        sc.plant = &plant;
        sc.point = &point;
        if (noise_access) sc.xi = path.increment(i) / scn.dt;
        u = ctrl ? ctrl->control(sc) : 0.0;
      }
      if (jumps_on && i % window == 0) {
        window_start = point;
        u_start = u;
      }

      if (i % stride == 0 || i == N) {
        const double yref = scn.reference ? scn.reference->value(t) : 0.0;
        traj.append(i, t, point, u, yref, path.W(i), jumped);
      }
      if (observer) observer(StepRecord{i, t, &point, u, path.W(i), jumped});
      if (i == N) break;

      const double dw = path.increment(i);
      state = point.state + plant.drift(point, u) * scn.dt + plant.diffusion(point) * dw;
      try {
        point = plant.evaluate(state, point.x);
      } catch (const NewtonFailure&) {
        // The Euler step left the image of the chart. Retry on a finer grid,
        // splitting the increment with the Brownian bridge; the control is
        // recomputed at every substep.
        PolarNormal bridge(path.seed() ^ kBridgeSalt ^ static_cast<std::uint64_t>(i));
        std::function<PlantPoint(const PlantPoint&, double, double, double, int)> advance =
            [&](const PlantPoint& p, double t0, double h, double dwh, int depth) -> PlantPoint {
          StepContext c;
          c.step = i;
          c.t = t0;
          c.plant = &plant;
          c.point = &p;
          if (noise_access) c.xi = dwh / h;
          const double uh = ctrl ? ctrl->control(c) : 0.0;
          const Eigen::VectorXd s = p.state + plant.drift(p, uh) * h + plant.diffusion(p) * dwh;
          try {
            return plant.evaluate(s, p.x);
          } catch (const NewtonFailure&) {
            if (depth >= kMaxRefine) throw;
          }
          const double dw1 = 0.5 * dwh + std::sqrt(0.25 * h) * bridge();
          const PlantPoint mid = advance(p, t0, 0.5 * h, dw1, depth + 1);
          return advance(mid, t0 + 0.5 * h, 0.5 * h, dwh - dw1, depth + 1);
        };
        const double dw1 = 0.5 * dw + std::sqrt(0.25 * scn.dt) * bridge();
        const PlantPoint mid = advance(point, t, 0.5 * scn.dt, dw1, 1);
        point = advance(mid, t + 0.5 * scn.dt, 0.5 * scn.dt, dw - dw1, 1);
        state = point.state;
        ++traj.refined_steps;
      }
    } catch (const NewtonFailure& e) {
      fail(TerminationStatus::solver_failure, i + 1, e.what());
      break;
    } catch (const SingularControl& e) {
      fail(TerminationStatus::solver_failure, i, e.what());
      break;
    } catch (const DomainError& e) {
      fail(TerminationStatus::solver_failure, i, e.what());
      break;
    }
  }
  return traj;
}

}  // namespace pathwise
