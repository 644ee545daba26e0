#include "pathwise/experiments/runners.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/os.h>

#include "pathwise/errors.hpp"
#include "pathwise/estimator/estimator.hpp"
#include "pathwise/experiments/output.hpp"

namespace pathwise::exp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Runs jobs on at most `workers` threads; results keep the job order.
template <class T>
std::vector<T> run_parallel(std::vector<std::function<T()>> jobs, unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::optional<T>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) slots[i].emplace(jobs[i]());
  };
  std::vector<std::future<void>> running;
  for (unsigned w = 0; w < workers; ++w) running.push_back(std::async(std::launch::async, worker));
  for (auto& f : running) f.get();
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string eps_tag(double eps) { return fmt::format("{:g}", eps); }

// Tail statistics of y - y_R and, optionally, deviation of z_2 from a
// stored idealistic run, at every integration step.
struct StepStats {
  double tail_start = 0.0;
  const std::vector<double>* ideal_z2 = nullptr;
  std::vector<double>* store_z = nullptr;  // z_1, z_2 interleaved
  const ReferenceSignal* reference = nullptr;

  double sum_sq = 0.0;
  std::int64_t count = 0;
  double tail_max = 0.0;
  double deviation = 0.0;

  void operator()(const StepRecord& s) {
    const PlantPoint& p = *s.point;
    if (s.t >= tail_start - 1e-12) {
      const double e = p.y - (reference ? reference->value(s.t) : 0.0);
      sum_sq += e * e;
      ++count;
      tail_max = std::max(tail_max, std::abs(e));
    }
    if (ideal_z2) {
      const double d = std::abs(p.z[1] - (*ideal_z2)[static_cast<std::size_t>(s.step)]);
      if (!(d <= deviation)) deviation = d;
    }
    if (store_z) {
      store_z->push_back(p.z[0]);
      store_z->push_back(p.z[1]);
    }
  }
  double rms() const { return count ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0; }
};

RunMetrics metrics_of(const Scenario& scn, const HybridTrajectory& traj, const StepStats& st, double runtime) {
  RunMetrics m;
  m.name = scn.name;
  m.controller = scn.controller_label;
  m.epsilon = scn.epsilon;
  m.seed = scn.seed;
  m.status = to_string(traj.status);
  m.message = traj.message;
  m.tail_rms = st.rms();
  m.tail_max = st.tail_max;
  m.jumps = traj.jump_count;
  m.skipped_windows = traj.skipped_windows;
  m.runtime = runtime;
  if (!traj.ok()) {
    m.tail_rms = std::numeric_limits<double>::infinity();
    m.tail_max = std::numeric_limits<double>::infinity();
  }
  return m;
}

struct RunResult {
  RunMetrics metrics;
  HybridTrajectory traj;
};

RunResult run_one(const ExperimentConfig& cfg, const Scenario& scn, const BrownianPath& path, StepStats stats) {
  stats.tail_start = 0.5 * scn.t_final;
  if (scn.reference) stats.reference = &*scn.reference;
  const auto t0 = Clock::now();
  HybridTrajectory traj = integrate(scn, path, std::ref(stats));
  RunResult res{metrics_of(scn, traj, stats, seconds_since(t0)), std::move(traj)};
  if (stats.ideal_z2) res.metrics.sup_dev_idealistic = res.traj.ok() ? stats.deviation : std::numeric_limits<double>::infinity();
  if (!cfg.output_dir.empty()) {
    ensure_directory(cfg.output_dir);
    res.metrics.csv = join_path(cfg.output_dir, scn.name + ".csv");
    write_trajectory_csv(res.traj, res.metrics.csv);
    auto meta = run_metadata(scn, path, res.traj);
    meta["metrics"] = res.metrics.to_json();
    write_json(meta, join_path(cfg.output_dir, scn.name + ".json"));
  }
  return res;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::vector<double> descending(std::vector<double> eps) {
  std::sort(eps.begin(), eps.end(), std::greater<>());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
  return eps;
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

ExampleSetup example_setup(const ExperimentConfig& cfg) {
  auto builtin = builtin_system("example");
  NormalFormDef nf = *builtin.normal_form;
  Plant plant = cfg.simulation.mode == CoordinateMode::normal_form ? Plant::normal_form(nf, builtin.system)
                                                                   : Plant::x_space(builtin.system, nf);
  const int r = nf.r();
  auto ref = cosine_reference(cfg.reference.beta, cfg.reference.alpha, cfg.reference.omega, r);
  auto poles = place_poles(cfg.controller.poles);
  return ExampleSetup{std::move(builtin), std::move(nf), std::move(plant), std::move(ref), std::move(poles)};
}

ControllerSpec controller_spec(const ExperimentConfig& cfg, const ExampleSetup& ex) {
  ControllerSpec spec;
  spec.family = parse_family(cfg.controller.family);
  spec.task = parse_task(cfg.controller.task);
  spec.poles = ex.poles;
  spec.epsilon = cfg.controller.epsilon;
  spec.delta_threshold = cfg.controller.delta_threshold;
  if (spec.family != ControllerFamily::hybrid) spec.epsilon.reset();
  return spec;
}

Scenario make_scenario(const ExperimentConfig& cfg, const ExampleSetup& ex, const ControllerSpec& spec,
                       std::uint64_t seed, std::string name) {
  Scenario s;
  s.name = std::move(name);
  s.plant = ex.plant;
  s.controller = bind(spec, ex.nf, ex.reference, cfg.simulation.dt);
  s.controller_label = spec.label();
  s.dt = cfg.simulation.dt;
  s.t_final = cfg.simulation.t_final;
  if (spec.family == ControllerFamily::hybrid) s.epsilon = spec.epsilon;
  s.seed = seed;
  s.x0 = cfg.simulation.x0;
  s.delta_threshold = spec.delta_threshold;
  s.reference = ex.reference;
  s.record_stride = cfg.simulation.record_stride;
  s.keep_jump_records = false;
  s.validate();
  return s;
}

nlohmann::json RunMetrics::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["controller"] = controller;
  j["epsilon"] = opt_json(epsilon);
  j["seed"] = seed;
  j["status"] = status;
  if (!message.empty()) j["message"] = message;
  j["tail_rms"] = tail_rms;
  j["tail_max"] = tail_max;
  j["sup_dev_idealistic"] = opt_json(sup_dev_idealistic);
  j["jumps"] = jumps;
  j["skipped_windows"] = skipped_windows;
  j["runtime_s"] = runtime;
  if (!csv.empty()) j["csv"] = csv;
  return j;
}

// ---------------------------------------------------------------- fig 1

Fig1Report run_fig1(const ExperimentConfig& cfg) {
  const auto ex = example_setup(cfg);
  ControllerSpec spec;
  spec.family = ControllerFamily::idealistic;
  spec.task = ControllerTask::track;
  spec.poles = ex.poles;

  Fig1Report rep;
  rep.seed_a = cfg.simulation.seed;
  rep.seed_b = cfg.figures.fig1_second_seed;
  rep.determinism_tol = 1e-8 * cfg.tolerance_scale;
  rep.tail_tol = 1e-3 * cfg.tolerance_scale;

  const auto sa = make_scenario(cfg, ex, spec, rep.seed_a, fmt::format("fig1_seed{}", rep.seed_a));
  const auto sb = make_scenario(cfg, ex, spec, rep.seed_b, fmt::format("fig1_seed{}", rep.seed_b));

  std::vector<double> zeta_a;
  zeta_a.reserve(static_cast<std::size_t>(2 * (sa.steps() + 1)));
  StepStats st_a;
  st_a.store_z = &zeta_a;
  auto ra = run_one(cfg, sa, scenario_path(sa), st_a);

  std::vector<double> zeta_b;
  zeta_b.reserve(zeta_a.size());
  StepStats st_b;
  st_b.store_z = &zeta_b;
  auto rb = run_one(cfg, sb, scenario_path(sb), st_b);

  double diff = zeta_a.size() == zeta_b.size() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < std::min(zeta_a.size(), zeta_b.size()); ++i)
    diff = std::max(diff, std::abs(zeta_a[i] - zeta_b[i]));
  rep.zeta_seed_diff = diff;
  rep.tail_abs_error = std::max(ra.metrics.tail_max, rb.metrics.tail_max);
  rep.deterministic = ra.traj.ok() && rb.traj.ok() && diff < rep.determinism_tol;
  rep.converged = ra.traj.ok() && rb.traj.ok() && rep.tail_abs_error < rep.tail_tol;
  rep.runs = {ra.metrics, rb.metrics};
  rep.trajectories.push_back(std::move(ra.traj));
  rep.trajectories.push_back(std::move(rb.traj));
  return rep;
}

nlohmann::json Fig1Report::to_json() const {
  nlohmann::json j;
  j["seeds"] = {seed_a, seed_b};
  for (const auto& r : runs) j["runs"].push_back(r.to_json());
  j["zeta_seed_diff"] = zeta_seed_diff;
  j["determinism_tol"] = determinism_tol;
  j["tail_abs_error"] = tail_abs_error;
  j["tail_tol"] = tail_tol;
  j["deterministic"] = deterministic;
  j["converged"] = converged;
  j["pass"] = pass();
  return j;
}

// ---------------------------------------------------------------- figs 2, 3

Fig23Report run_fig2_fig3(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  cfg.simulation.t_final = base.figures.comparison_t_final;
  const auto ex = example_setup(cfg);
  const auto ladder = descending(cfg.figures.epsilons);

  std::vector<std::function<Fig23Group()>> jobs;
  for (auto seed : cfg.figures.seeds) {
    jobs.push_back([&cfg, &ex, ladder, seed]() {
      Fig23Group g;
      g.seed = seed;
      g.epsilons = ladder;

      ControllerSpec ideal;
      ideal.family = ControllerFamily::idealistic;
      ideal.poles = ex.poles;
      const auto s_ideal = make_scenario(cfg, ex, ideal, seed, fmt::format("fig2_seed{}_idealistic", seed));
      const BrownianPath path = scenario_path(s_ideal);

      std::vector<double> z_store;
      z_store.reserve(static_cast<std::size_t>(2 * (s_ideal.steps() + 1)));
      StepStats st;
      st.store_z = &z_store;
      auto r_ideal = run_one(cfg, s_ideal, path, st);
      std::vector<double> ideal_z2(z_store.size() / 2);
      for (std::size_t i = 0; i < ideal_z2.size(); ++i) ideal_z2[i] = z_store[2 * i + 1];
      z_store = {};
      r_ideal.metrics.sup_dev_idealistic = 0.0;
      g.idealistic_rms = r_ideal.metrics.tail_rms;
      const bool ideal_ok = r_ideal.traj.ok();
      g.runs.push_back(r_ideal.metrics);

      auto compare = [&](const ControllerSpec& spec, const std::string& name) {
        const auto s = make_scenario(cfg, ex, spec, seed, name);
        StepStats stats;
        if (ideal_ok) stats.ideal_z2 = &ideal_z2;
        return run_one(cfg, s, path, stats).metrics;
      };

      ControllerSpec zn;
      zn.family = ControllerFamily::zero_noise;
      zn.poles = ex.poles;
      auto m_zn = compare(zn, fmt::format("fig2_seed{}_zero_noise", seed));
      g.zero_noise_rms = m_zn.tail_rms;
      g.runs.push_back(m_zn);

      for (double eps : ladder) {
        ControllerSpec hy;
        hy.family = ControllerFamily::hybrid;
        hy.poles = ex.poles;
        hy.epsilon = eps;
        hy.delta_threshold = cfg.controller.delta_threshold;
        auto m = compare(hy, fmt::format("fig2_seed{}_hybrid_eps{}", seed, eps_tag(eps)));
        g.deviation.push_back(m.sup_dev_idealistic.value_or(std::numeric_limits<double>::infinity()));
        g.hybrid_rms.push_back(m.tail_rms);
        g.runs.push_back(m);
      }

      g.ladder_decreasing = ideal_ok && strictly_decreasing(g.deviation);
      std::vector<double> chain{g.zero_noise_rms};
      chain.insert(chain.end(), g.hybrid_rms.begin(), g.hybrid_rms.end());
      g.rms_ordered = strictly_decreasing(chain);
      g.improvement = !g.hybrid_rms.empty() && g.hybrid_rms.back() < 0.5 * g.zero_noise_rms;
      return g;
    });
  }
  Fig23Report rep;
  rep.groups = run_parallel(std::move(jobs), cfg.workers);
  return rep;
}

nlohmann::json Fig23Group::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["epsilons"] = epsilons;
  j["sup_dev_idealistic"] = deviation;
  j["hybrid_tail_rms"] = hybrid_rms;
  j["zero_noise_tail_rms"] = zero_noise_rms;
  j["idealistic_tail_rms"] = idealistic_rms;
  j["ladder_decreasing"] = ladder_decreasing;
  j["rms_ordered"] = rms_ordered;
  j["improvement"] = improvement;
  for (const auto& r : runs) j["runs"].push_back(r.to_json());
  return j;
}

bool Fig23Report::pass() const {
  return !groups.empty() && std::all_of(groups.begin(), groups.end(), [](const auto& g) { return g.pass(); });
}

nlohmann::json Fig23Report::to_json() const {
  nlohmann::json j;
  for (const auto& g : groups) j["groups"].push_back(g.to_json());
  j["pass"] = pass();
  return j;
}

// ---------------------------------------------------------------- simulate

SimulateReport run_simulate(const ExperimentConfig& cfg) {
  const auto ex = example_setup(cfg);
  const auto spec = controller_spec(cfg, ex);
  std::string name = fmt::format("simulate_seed{}_{}", cfg.simulation.seed, to_string(spec.family));
  if (spec.family == ControllerFamily::hybrid && spec.epsilon) name += "_eps" + eps_tag(*spec.epsilon);
  const auto scn = make_scenario(cfg, ex, spec, cfg.simulation.seed, name);
  auto res = run_one(cfg, scn, scenario_path(scn), StepStats{});
  return SimulateReport{std::move(res.metrics), std::move(res.traj)};
}

// ---------------------------------------------------------------- analyze

AnalyzeReport run_analyze(const ExperimentConfig& cfg, bool stability) {
  const auto builtin = builtin_system(cfg.analysis.system);
  const SystemDef& sys = builtin.system;
  const Eigen::VectorXd point = cfg.analysis.point.size() == sys.n ? cfg.analysis.point : Eigen::VectorXd::Zero(sys.n);

  AnalyzeReport rep;
  rep.system = sys.name;
  rep.relative_degree = ops::relative_degree(sys, point, cfg.analysis.radius, sys.n, cfg.analysis.samples);
  rep.controllability = ops::controllability_matrix(sys, point);
  if (!rep.relative_degree.defined()) return rep;

  TransformOptions topt;
  topt.radius = cfg.analysis.radius;
  topt.samples = cfg.analysis.samples;
  const Transform t = builtin.completions ? build_transform(sys, point, *builtin.completions, topt)
                                          : build_transform_auto(sys, point, topt);
  rep.warnings = t.warnings;
  if (t.input_dependent_internal) return rep;

  const NormalFormDef nf = normal_form(t, sys);
  rep.has_normal_form = true;
  const auto c0 = nf.at_x(point);
  rep.c_d = c0.c_d;
  rep.c_s = c0.c_s;
  rep.b = c0.b;

  if (builtin.normal_form) {
    const auto& cf = builtin.normal_form->fields();
    double gap = 0.0;
    for (const auto& x : sample_ball(point, 0.3, 100)) {
      auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
      gap = std::max({gap, rel(nf.fields().c_d(x), cf.c_d(x)), rel(nf.fields().c_s(x), cf.c_s(x)),
                      rel(nf.fields().b(x), cf.b(x))});
    }
    rep.closed_form_gap = gap;
  }

  if (nf.r() < nf.n()) {
    const auto zd = zero_dynamics(nf);
    rep.has_zero_dynamics = true;
    if (zd.dim == 1) {
      rep.zd_A = zd.drift_jacobian(0, 0);
      rep.zd_F = zd.diffusion_jacobian(0, 0);
      rep.zd_verdict = as_linear_scalar_stability(rep.zd_A, rep.zd_F);
      if (stability) {
        ProbeOptions po;
        po.dt = cfg.analysis.stability_dt;
        po.base_seed = cfg.analysis.stability_seed;
        // the operator-built zero dynamics costs a Newton solve per step; use the
        // closed form when the system ships one
        const ScalarSde sde = builtin.zero_dynamics ? *builtin.zero_dynamics : zd.as_scalar();
        rep.probe = probe_zero_dynamics(sde, cfg.analysis.stability_radius, cfg.analysis.stability_paths,
                                        cfg.analysis.stability_horizon, po);
      }
    }
    rep.stabilisation = check_stabilisation_hypotheses(nf);
  }
  return rep;
}

nlohmann::json AnalyzeReport::to_json() const {
  nlohmann::json j;
  const auto& rd = relative_degree;
  j["system"] = system;
  j["point"] = std::vector<double>(rd.point.data(), rd.point.data() + rd.point.size());
  j["relative_degree"] = rd.r ? nlohmann::json(*rd.r) : nlohmann::json("undefined");
  j["radius"] = rd.radius;
  j["samples"] = rd.samples;
  if (!rd.reason.empty()) j["reason"] = rd.reason;
  for (const auto& o : rd.orders)
    j["orders"].push_back({{"k", o.k},
                           {"max_abs_Ll_Sk_h", o.max_noise},
                           {"max_abs_Lg_Sk_h", o.max_control},
                           {"Lg_Sk_h_at_point", o.control_at_point}});
  j["rd_value"] = rd.rd_value;
  j["noise_at_order_r"] = rd.noise_at_order_r;
  j["gradient_rank"] = rd.gradient_rank;
  j["gradient_singular_values"] = rd.gradient_singular_values;
  j["warnings"] = warnings;
  if (has_normal_form) {
    j["normal_form"] = {{"c_d", c_d}, {"c_s", c_s}, {"b", b}};
    if (closed_form_gap) j["normal_form"]["closed_form_gap"] = *closed_form_gap;
  }
  if (has_zero_dynamics) {
    j["zero_dynamics"] = {{"A", zd_A},
                          {"F", zd_F},
                          {"A_minus_half_F2", zd_verdict.exponent},
                          {"as_stable", zd_verdict.stable}};
  }
  j["controllability"] = {
      {"singular_values",
       std::vector<double>(controllability.singular_values.data(),
                           controllability.singular_values.data() + controllability.singular_values.size())},
      {"invertible", controllability.invertible}};
  if (stabilisation)
    j["zero_noise_stabilisation_hypotheses"] = {{"max_abs_cs_on_zero_manifold", stabilisation->max_cs_on_zero_manifold},
                                                {"cs_zeta_gradient_norm", stabilisation->cs_zeta_gradient_norm},
                                                {"hold", stabilisation->hold()}};
  if (probe) {
    j["stability_probe"] = {{"paths", probe->paths.size()},
                            {"bounded", probe->bounded},
                            {"escaped", probe->escaped},
                            {"non_finite", probe->non_finite},
                            {"exceeded_own_initial_ball", probe->exceeded_own_ball},
                            {"converged_fraction", probe->converged_fraction},
                            {"lyapunov", opt_json(probe->lyapunov)},
                            {"horizon", probe->horizon},
                            {"radius", probe->radius}};
  }
  return j;
}

std::string AnalyzeReport::to_text() const {
  std::ostringstream o;
  const auto& rd = relative_degree;
  o << "system: " << system << "\n";
  o << "point: (";
  for (Eigen::Index i = 0; i < rd.point.size(); ++i) o << (i ? ", " : "") << rd.point[i];
  o << ")  radius " << rd.radius << ", " << rd.samples << " samples\n";
  for (const auto& d : rd.orders)
    o << fmt::format("  k={}  max|L_l S^k h| = {:.3e}  max|L_g S^k h| = {:.3e}  L_g S^k h(point) = {:.6g}\n", d.k,
                     d.max_noise, d.max_control, d.control_at_point);
  if (rd.r) {
    o << "relative degree: " << *rd.r << "  (L_g S^{r-1} h = " << rd.rd_value << ", noise "
      << (rd.noise_at_order_r ? "enters" : "does not enter") << " at order r)\n";
    o << "gradient rank: " << rd.gradient_rank << " of " << *rd.r << "\n";
  } else {
    o << "relative degree: undefined (" << rd.reason << ")\n";
  }
  for (const auto& w : warnings) o << "warning: " << w << "\n";
  if (has_normal_form) {
    o << fmt::format("normal form at point: c_d = {:.6g}, c_s = {:.6g}, b = {:.6g}\n", c_d, c_s, b);
    if (closed_form_gap) o << fmt::format("  closed-form agreement: max relative gap {:.2e}\n", *closed_form_gap);
  }
  if (has_zero_dynamics)
    o << fmt::format("zero dynamics linearisation: A = {:.6g}, F = {:.6g}, A - F^2/2 = {:.6g} -> {}\n", zd_A, zd_F,
                     zd_verdict.exponent, zd_verdict.stable ? "a.s. stable" : "not a.s. stable");
  o << "controllability matrix: " << (controllability.invertible ? "invertible" : "singular") << " (sigma = "
    << controllability.singular_values.transpose() << ")\n";
  if (stabilisation)
    o << fmt::format("zero-noise stabilisation hypotheses: max|c_s(0,eta)| = {:.3e}, |dc_s/dzeta| = {:.3e} -> {}\n",
                     stabilisation->max_cs_on_zero_manifold, stabilisation->cs_zeta_gradient_norm,
                     stabilisation->hold() ? "hold" : "do not hold");
  if (probe)
    o << fmt::format("stability probe: {}/{} bounded, {:.0f}% converged, lyapunov estimate {}\n", probe->bounded,
                     probe->paths.size(), 100.0 * probe->converged_fraction,
                     probe->lyapunov ? fmt::format("{:.4g}", *probe->lyapunov) : std::string("n/a"));
  return o.str();
}

// ---------------------------------------------------------------- estimator

EstimatorStudy run_estimator_study(const ExperimentConfig& cfg) {
  const auto builtin = builtin_system("example");
  const auto ladder = descending(cfg.estimator.epsilons);
  const double dt = cfg.estimator.dt;

  struct SeedResult {
    std::vector<EstimatorRow> rows;
  };
  std::vector<std::function<SeedResult()>> jobs;
  for (auto seed : cfg.estimator.seeds) {
    jobs.push_back([&, seed]() {
      Scenario s;
      s.name = fmt::format("estimate_seed{}", seed);
      s.plant = Plant::x_space(builtin.system, builtin.normal_form);
      s.dt = dt;
      s.t_final = cfg.estimator.horizon;
      s.seed = seed;
      s.x0 = cfg.estimator.x0;
      s.keep_jump_records = false;
      // record exactly at the finest window boundaries
      std::int64_t stride = 0;
      for (double e : ladder) {
        const auto w = static_cast<std::int64_t>(std::llround(e / dt));
        stride = stride == 0 ? w : std::gcd(stride, w);
      }
      s.record_stride = static_cast<int>(std::max<std::int64_t>(1, stride));
      s.validate();
      const auto path = scenario_path(s);
      const auto& cs = builtin.normal_form->fields().c_s;
      double weighted_true = 0.0;
      auto traj = integrate(s, path, [&](const StepRecord& r) {
        if (r.step < path.steps()) weighted_true += r.point->coeffs->c_s * path.increment(r.step);
      });

      SeedResult out;
      for (double eps : ladder) {
        EstimatorRow row;
        row.seed = seed;
        row.epsilon = eps;
        const auto w = static_cast<std::int64_t>(std::llround(eps / dt));
        if (!traj.ok()) {
          row.max_error = row.weighted_error = std::numeric_limits<double>::infinity();
          out.rows.push_back(row);
          continue;
        }
        const auto est = estimate_sequence(traj, builtin.system, eps, cfg.controller.delta_threshold);
        double weighted_hat = 0.0;
        std::vector<double> truth(est.size());
        std::size_t row_index = 0;
        for (std::size_t k = 0; k < est.size(); ++k) {
          truth[k] = path.increment_sum(static_cast<std::int64_t>(k) * w, w);
          if (est[k].skipped) {
            ++row.skipped;
            continue;
          }
          row.max_error = std::max(row.max_error, std::abs(est[k].dw_hat - truth[k]));
          // window-start row: step (k) * w
          while (row_index < traj.size() && traj.step[row_index] < static_cast<std::int64_t>(k) * w) ++row_index;
          weighted_hat += cs(Eigen::VectorXd(traj.x(row_index))) * est[k].dw_hat;
        }
        row.windows = static_cast<std::int64_t>(est.size());
        row.weighted_error = std::abs(weighted_hat - weighted_true);
        if (!cfg.output_dir.empty()) {
          ensure_directory(cfg.output_dir);
          row.csv = join_path(cfg.output_dir, fmt::format("estimate_seed{}_eps{}.csv", seed, eps_tag(eps)));
          auto f = fmt::output_file(row.csv);
          f.print("k,t_k,dW_hat,dW_true,err,skipped\n");
          for (std::size_t k = 0; k < est.size(); ++k)
            f.print("{},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", est[k].k, est[k].t_k, est[k].dw_hat, truth[k],
                    est[k].skipped ? 0.0 : est[k].dw_hat - truth[k], est[k].skipped ? 1 : 0);
        }
        out.rows.push_back(row);
      }
      return out;
    });
  }
  EstimatorStudy study;
  study.has_verdict = ladder.size() >= 2;
  for (auto& res : run_parallel(std::move(jobs), cfg.workers)) {
    std::vector<double> e, we;
    for (const auto& r : res.rows) {
      e.push_back(r.max_error);
      we.push_back(r.weighted_error);
    }
    if (!res.rows.empty() && study.has_verdict) {
      study.decay.emplace_back(res.rows.front().seed, strictly_decreasing(e));
      study.weighted_decay.emplace_back(res.rows.front().seed, strictly_decreasing(we));
    }
    study.rows.insert(study.rows.end(), res.rows.begin(), res.rows.end());
  }
  return study;
}

bool EstimatorStudy::pass() const {
  return std::all_of(decay.begin(), decay.end(), [](const auto& d) { return d.second; });
}

nlohmann::json EstimatorStudy::to_json() const {
  nlohmann::json j;
  for (const auto& r : rows) {
    nlohmann::json row = {{"seed", r.seed},         {"epsilon", r.epsilon},   {"windows", r.windows},
                          {"skipped", r.skipped},   {"max_error", r.max_error}, {"weighted_error", r.weighted_error}};
    if (!r.csv.empty()) row["csv"] = r.csv;
    j["rows"].push_back(row);
  }
  for (const auto& [seed, ok] : decay) j["decay"][std::to_string(seed)] = ok;
  for (const auto& [seed, ok] : weighted_decay) j["weighted_decay"][std::to_string(seed)] = ok;
  j["has_verdict"] = has_verdict;
  j["pass"] = pass();
  return j;
}

}  // namespace pathwise::exp
