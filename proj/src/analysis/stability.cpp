#include "pathwise/analysis/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "pathwise/errors.hpp"

namespace pathwise {

const char* to_string(PathOutcome o) {
  switch (o) {
    case PathOutcome::bounded: return "bounded";
    case PathOutcome::escaped: return "escaped";
    case PathOutcome::non_finite: return "non_finite";
  }
  return "?";
}

namespace {

// Uniform in [-1, 1], independent of the Brownian stream of the same seed.
double symmetric_uniform(std::mt19937_64& gen) {
  return 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
}

constexpr std::uint64_t kInitialStateSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kBridgeSalt = 0xd1b54a32d192ed03ULL;
constexpr int kMaxRefine = 30;

// One Euler-Maruyama step of size h with increment dw. A step that lands
// outside the domain is split in two, the midpoint of the Brownian path
// drawn from the bridge; the drift of the example zero dynamics blows up at
// the domain edge, so the exact solution never reaches it.
double refined_step(const ScalarSde& zd, double eta, double h, double dw, PolarNormal& bridge, int depth) {
  const double next = eta + zd.drift(eta) * h + zd.diffusion(eta) * dw;
  if (std::abs(next) < zd.domain_limit || !std::isfinite(next)) return next;
  if (depth >= kMaxRefine)
    throw DomainError(fmt::format("step leaves |eta| < {} after {} bisections", zd.domain_limit, kMaxRefine));
  const double dw1 = 0.5 * dw + std::sqrt(0.25 * h) * bridge();
  const double mid = refined_step(zd, eta, 0.5 * h, dw1, bridge, depth + 1);
  if (!std::isfinite(mid)) return mid;
  return refined_step(zd, mid, 0.5 * h, dw - dw1, bridge, depth + 1);
}

void tally(StabilityProbe& probe, double converge_tol) {
  int converged = 0;
  for (auto& p : probe.paths) {
    p.converged = p.outcome != PathOutcome::non_finite && p.final_norm < converge_tol;
    if (p.converged) ++converged;
    switch (p.outcome) {
      case PathOutcome::bounded: ++probe.bounded; break;
      case PathOutcome::escaped: ++probe.escaped; break;
      case PathOutcome::non_finite: ++probe.non_finite; break;
    }
  }
  probe.converged_fraction = probe.paths.empty() ? 0.0 : static_cast<double>(converged) / probe.paths.size();
}

}  // namespace

StabilityProbe probe_zero_dynamics(const ScalarSde& zd, double radius, int paths, double horizon,
                                   const ProbeOptions& opt) {
  StabilityProbe probe;
  probe.subject = "zero_dynamics";
  probe.horizon = horizon;
  probe.dt = opt.dt;
  probe.radius = radius;
  const auto steps = static_cast<std::int64_t>(std::llround(horizon / opt.dt));
  double log_sum = 0.0;
  int log_count = 0;

  for (int p = 0; p < paths; ++p) {
    const std::uint64_t seed = opt.base_seed + static_cast<std::uint64_t>(p);
    std::mt19937_64 gen(seed ^ kInitialStateSalt);
    const double eta0 = radius * symmetric_uniform(gen);
    const auto path = BrownianPath::generate(seed, opt.dt, steps);

    PathResult res;
    res.seed = seed;
    res.initial_norm = std::abs(eta0);
    const double ball = kEscapeFactor * std::max(radius, res.initial_norm);
    PolarNormal bridge(seed ^ kBridgeSalt);
    double eta = eta0;
    double max_norm = std::abs(eta0);
    std::int64_t i = 0;
    for (; i < steps; ++i) {
      try {
        eta = refined_step(zd, eta, opt.dt, path.increment(i), bridge, 0);
      } catch (const DomainError& e) {
        res.outcome = PathOutcome::escaped;
        res.note = e.what();
        break;
      }
      if (!std::isfinite(eta)) {
        res.outcome = PathOutcome::non_finite;
        break;
      }
      max_norm = std::max(max_norm, std::abs(eta));
      if (max_norm > ball) res.outcome = PathOutcome::escaped;
    }
    res.max_norm = max_norm;
    res.final_norm = std::abs(eta);
    res.t_end = static_cast<double>(i) * opt.dt;
    if (res.initial_norm > 0.0 && res.t_end > 0.0 && res.outcome != PathOutcome::non_finite) {
      log_sum += std::log(std::max(res.final_norm, 1e-300) / res.initial_norm) / res.t_end;
      ++log_count;
    }
    probe.paths.push_back(std::move(res));
  }
  if (log_count > 0) probe.lyapunov = log_sum / log_count;
  tally(probe, opt.converge_tol);
  return probe;
}

StabilityProbe probe_closed_loop(const Scenario& scn, int paths, double radius, double converge_tol) {
  scn.validate();
  const Plant& plant = scn.plant;
  if (!plant.has_chart()) throw ConfigError("closed-loop probe needs a normal-form chart");
  const int r = plant.r();
  const int n = plant.n();

  StabilityProbe probe;
  probe.subject = scn.name.empty() ? scn.controller_label : scn.name;
  probe.horizon = scn.t_final;
  probe.dt = scn.dt;
  probe.radius = radius;

  auto error_norm = [&](const PlantPoint& p, double t) {
    std::vector<double> ref = scn.reference ? (*scn.reference)(t) : std::vector<double>(static_cast<std::size_t>(r) + 1, 0.0);
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = i < r ? p.z[i] - ref[static_cast<std::size_t>(i)] : p.z[i];
      m = std::max(m, std::abs(e));
    }
    return m;
  };

  for (int k = 0; k < paths; ++k) {
    Scenario run = scn;
    run.seed = scn.seed + static_cast<std::uint64_t>(k);
    run.record_stride = static_cast<int>(std::max<std::int64_t>(1, scn.steps()));
    run.keep_jump_records = false;
    std::mt19937_64 gen(run.seed ^ kInitialStateSalt);
    for (int i = 0; i < n; ++i) run.x0[i] += radius * symmetric_uniform(gen);

    PathResult res;
    res.seed = run.seed;
    bool first = true;
    double ball = 0.0;
    double last = 0.0;
    const auto path = scenario_path(run);
    auto traj = integrate(run, path, [&](const StepRecord& s) {
      const double e = error_norm(*s.point, s.t);
      if (first) {
        res.initial_norm = e;
        ball = kEscapeFactor * std::max(radius, e);
        first = false;
      }
      res.max_norm = std::max(res.max_norm, e);
      if (res.max_norm > ball) res.outcome = PathOutcome::escaped;
      last = e;
      res.t_end = s.t;
    });
    res.final_norm = last;
    if (!traj.ok()) {
      res.outcome = traj.status == TerminationStatus::non_finite ? PathOutcome::non_finite : PathOutcome::escaped;
      res.note = fmt::format("{}: {}", to_string(traj.status), traj.message);
    }
    probe.paths.push_back(std::move(res));
  }
  tally(probe, converge_tol);
  return probe;
}

}  // namespace pathwise
