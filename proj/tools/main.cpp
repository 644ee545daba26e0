#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pathwise/errors.hpp"
#include "pathwise/experiments/config.hpp"
#include "pathwise/experiments/output.hpp"
#include "pathwise/experiments/runners.hpp"

using namespace pathwise;
using namespace pathwise::exp;

namespace {

// Flags shared by every subcommand. Unset values leave the config alone.
struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::string eps;
  std::optional<double> t_final;
  std::string out;
  bool fast = false;
  std::optional<unsigned> workers;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "INI scenario file")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "Brownian seed (replaces the seed list)");
    app->add_option("--dt", dt, "integration step");
    app->add_option("--eps", eps, "jump period, or a comma-separated ladder (figures, estimate); 'none' disables");
    app->add_option("--t-final", t_final, "horizon");
    app->add_option("--out", out, "output directory for CSV and JSON");
    app->add_flag("--fast", fast, "dt = 1e-5, eps >= 1e-4, tolerances x10");
    app->add_option("--workers", workers, "concurrent scenario groups (0 = all cores)");
  }

  ExperimentConfig load() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : ExperimentConfig::load(config);
    if (fast) cfg.apply_fast_profile();
    if (seed) {
      cfg.simulation.seed = *seed;
      cfg.figures.seeds = {*seed};
      cfg.estimator.seeds = {*seed};
      cfg.analysis.stability_seed = *seed;
    }
    if (dt) {
      cfg.simulation.dt = *dt;
      cfg.estimator.dt = *dt;
      cfg.analysis.stability_dt = *dt;
    }
    if (t_final) {
      cfg.simulation.t_final = *t_final;
      cfg.figures.comparison_t_final = *t_final;
      cfg.estimator.horizon = *t_final;
      cfg.analysis.stability_horizon = *t_final;
    }
    if (!eps.empty()) {
      if (eps == "none") {
        cfg.controller.epsilon.reset();
      } else {
        auto ladder = parse_list(eps);
        if (ladder.empty()) throw ConfigError("--eps is empty");
        cfg.controller.epsilon = ladder.front();
        cfg.figures.epsilons = ladder;
        cfg.estimator.epsilons = ladder;
      }
    }
    if (!out.empty()) cfg.output_dir = out;
    if (workers) cfg.workers = *workers;
    cfg.validate();
    return cfg;
  }
};

void save_report(const ExperimentConfig& cfg, const nlohmann::json& j, const std::string& name) {
  if (cfg.output_dir.empty()) return;
  ensure_directory(cfg.output_dir);
  auto report = j;
  report["version"] = version_string();
  report["fast"] = cfg.fast;
  write_json(report, join_path(cfg.output_dir, name));
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

void print_run(const RunMetrics& m) {
  fmt::print("  {:<34} {:<10} tail_rms {:.4e}  tail_max {:.4e}", m.name, m.status, m.tail_rms, m.tail_max);
  if (m.sup_dev_idealistic) fmt::print("  sup|dz2| {:.4e}", *m.sup_dev_idealistic);
  if (m.jumps) fmt::print("  jumps {}", m.jumps);
  fmt::print("  {:.1f}s\n", m.runtime);
  if (!m.message.empty()) fmt::print("    {}\n", m.message);
}

int cmd_analyze(const Common& c, bool stability, const std::string& system, const std::string& point) {
  auto cfg = c.load();
  if (!system.empty()) cfg.analysis.system = system;
  if (!point.empty()) cfg.analysis.point = parse_vector(point);
  const auto rep = run_analyze(cfg, stability);
  std::cout << rep.to_text();
  save_report(cfg, rep.to_json(), "analyze.json");
  if (rep.probe && !cfg.output_dir.empty()) write_probe_csv(*rep.probe, join_path(cfg.output_dir, "stability_paths.csv"));

  bool ok = rep.relative_degree.defined();
  if (rep.closed_form_gap) ok = ok && *rep.closed_form_gap < 1e-8;
  if (rep.probe) ok = ok && rep.probe->all_bounded() && rep.probe->lyapunov && *rep.probe->lyapunov < 0.0;
  fmt::print("{}\n", verdict(ok));
  return ok ? 0 : 1;
}

int cmd_simulate(const Common& c, const std::string& family, const std::string& mode) {
  auto cfg = c.load();
  if (!family.empty()) cfg.controller.family = family;
  if (!mode.empty()) cfg.simulation.mode = parse_coordinate_mode(mode);
  auto rep = run_simulate(cfg);
  print_run(rep.metrics);
  save_report(cfg, rep.metrics.to_json(), "simulate.json");
  const bool ok = rep.trajectory.ok();
  fmt::print("{}\n", verdict(ok));
  return ok ? 0 : 1;
}

int cmd_figures(const Common& c, const std::string& which) {
  auto cfg = c.load();
  bool ok = true;
  nlohmann::json j;
  if (which == "fig1" || which == "all") {
    const auto r = run_fig1(cfg);
    fmt::print("fig1 (idealistic tracking, seeds {} and {})\n", r.seed_a, r.seed_b);
    for (const auto& m : r.runs) print_run(m);
    fmt::print("  zeta seed difference {:.3e} (tol {:.0e}) {}\n", r.zeta_seed_diff, r.determinism_tol,
               verdict(r.deterministic));
    fmt::print("  tail |y - y_ref|     {:.3e} (tol {:.0e}) {}\n", r.tail_abs_error, r.tail_tol, verdict(r.converged));
    ok = ok && r.pass();
    j["fig1"] = r.to_json();
  }
  if (which == "fig2" || which == "fig3" || which == "all") {
    const auto r = run_fig2_fig3(cfg);
    for (const auto& g : r.groups) {
      fmt::print("fig2/fig3 group, seed {}\n", g.seed);
      for (const auto& m : g.runs) print_run(m);
      fmt::print("  sup deviation strictly decreasing in eps: {}\n", verdict(g.ladder_decreasing));
      fmt::print("  tail RMS ordered (zero-noise > hybrid ladder): {}\n", verdict(g.rms_ordered));
      fmt::print("  smallest-eps hybrid below half of zero-noise: {}\n", verdict(g.improvement));
    }
    ok = ok && r.pass();
    j["fig2_fig3"] = r.to_json();
  }
  if (j.empty()) throw ConfigError("figures: expected fig1, fig2, fig3 or all, got '" + which + "'");
  save_report(cfg, j, "figures.json");
  fmt::print("{}\n", verdict(ok));
  return ok ? 0 : 1;
}

int cmd_estimate(const Common& c) {
  auto cfg = c.load();
  const auto s = run_estimator_study(cfg);
  fmt::print("{:>6} {:>10} {:>8} {:>8} {:>12} {:>12}\n", "seed", "eps", "windows", "skipped", "max_err", "weighted");
  for (const auto& r : s.rows)
    fmt::print("{:>6} {:>10g} {:>8} {:>8} {:>12.4e} {:>12.4e}\n", r.seed, r.epsilon, r.windows, r.skipped,
               r.max_error, r.weighted_error);
  for (const auto& [seed, dec] : s.decay) fmt::print("seed {}: max error strictly decreasing {}\n", seed, verdict(dec));
  if (!s.has_verdict) fmt::print("single epsilon: no decay verdict\n");
  save_report(cfg, s.to_json(), "estimate.json");
  fmt::print("{}\n", verdict(s.pass()));
  return s.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Normal-form analysis and feedback control of nonlinear SDEs"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  Common c_an, c_sim, c_fig, c_est;

  auto* analyze = app.add_subcommand("analyze", "relative degree, normal form and zero dynamics of a built-in system");
  c_an.attach(analyze);
  bool stability = false;
  std::string system, point;
  analyze->add_flag("--stability", stability, "also probe the zero dynamics by simulation");
  analyze->add_option("--system", system, "built-in system id");
  analyze->add_option("--point", point, "analysis point, comma separated");

  auto* simulate = app.add_subcommand("simulate", "one closed-loop run of the example");
  c_sim.attach(simulate);
  std::string family, mode;
  simulate->add_option("--controller", family, "idealistic | zero_noise | hybrid");
  simulate->add_option("--mode", mode, "normal_form | x_space");

  auto* figures = app.add_subcommand("figures", "reproduce the tracking figures");
  c_fig.attach(figures);
  std::string which = "all";
  figures->add_option("which", which, "fig1 | fig2 | fig3 | all");

  auto* estimate = app.add_subcommand("estimate", "Brownian increment estimator study");
  c_est.attach(estimate);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(c_an, stability, system, point);
    if (simulate->parsed()) return cmd_simulate(c_sim, family, mode);
    if (figures->parsed()) return cmd_figures(c_fig, which);
    if (estimate->parsed()) return cmd_estimate(c_est);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 2;
}
