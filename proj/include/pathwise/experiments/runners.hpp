#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathwise/analysis/stability.hpp"
#include "pathwise/control/control.hpp"
#include "pathwise/experiments/config.hpp"
#include "pathwise/models/registry.hpp"
#include "pathwise/operators/operators.hpp"
#include "pathwise/simulate/integrate.hpp"
#include "pathwise/transform/transform.hpp"

namespace pathwise::exp {

/// The built-in example wired to the configured reference and poles.
struct ExampleSetup {
  BuiltinSystem builtin;
  NormalFormDef nf;
  Plant plant;
  ReferenceSignal reference;
  PolePlacement poles;
};

ExampleSetup example_setup(const ExperimentConfig& cfg);

/// Scenario for one controller on the example, from the config's simulation block.
Scenario make_scenario(const ExperimentConfig& cfg, const ExampleSetup& ex, const ControllerSpec& spec,
                       std::uint64_t seed, std::string name);

ControllerSpec controller_spec(const ExperimentConfig& cfg, const ExampleSetup& ex);

struct RunMetrics {
  std::string name;
  std::string controller;
  std::optional<double> epsilon;
  std::uint64_t seed = 0;
  std::string status;
  std::string message;
  /// RMS and max of y - y_R over t in [T/2, T], every integration step.
  double tail_rms = 0.0;
  double tail_max = 0.0;
  /// sup_t |z_2 - z_2(idealistic)| on the same path.
  std::optional<double> sup_dev_idealistic;
  std::int64_t jumps = 0;
  std::int64_t skipped_windows = 0;
  double runtime = 0.0;
  std::string csv;

  nlohmann::json to_json() const;
};

struct Fig1Report {
  std::uint64_t seed_a = 0;
  std::uint64_t seed_b = 0;
  std::vector<RunMetrics> runs;
  /// Recorded (resampled) trajectories, seed_a first.
  std::vector<HybridTrajectory> trajectories;
  double zeta_seed_diff = 0.0;
  double tail_abs_error = 0.0;
  double determinism_tol = 1e-8;
  double tail_tol = 1e-3;
  bool deterministic = false;
  bool converged = false;

  bool pass() const { return deterministic && converged; }
  nlohmann::json to_json() const;
};

/// Idealistic tracking on two seeds: zeta identical across seeds and y -> y_R.
Fig1Report run_fig1(const ExperimentConfig& cfg);

struct Fig23Group {
  std::uint64_t seed = 0;
  std::vector<RunMetrics> runs;  // idealistic, zero-noise, hybrid per epsilon
  std::vector<double> epsilons;  // descending
  std::vector<double> deviation;
  std::vector<double> hybrid_rms;
  double zero_noise_rms = 0.0;
  double idealistic_rms = 0.0;
  bool ladder_decreasing = false;
  bool rms_ordered = false;
  bool improvement = false;  // hybrid(smallest eps) < 0.5 zero-noise

  bool pass() const { return ladder_decreasing && rms_ordered && improvement; }
  nlohmann::json to_json() const;
};

struct Fig23Report {
  std::vector<Fig23Group> groups;
  bool pass() const;
  nlohmann::json to_json() const;
};

/// Zero-noise, hybrid at each epsilon and idealistic tracking, all on one
/// shared path per seed. Seeds run concurrently.
Fig23Report run_fig2_fig3(const ExperimentConfig& cfg);

struct SimulateReport {
  RunMetrics metrics;
  HybridTrajectory trajectory;  // as recorded
};

SimulateReport run_simulate(const ExperimentConfig& cfg);

struct AnalyzeReport {
  std::string system;
  ops::RelativeDegreeReport relative_degree;
  std::vector<std::string> warnings;
  bool has_normal_form = false;
  double c_d = 0.0, c_s = 0.0, b = 0.0;
  /// max relative gap between operator-computed and closed-form coefficients
  std::optional<double> closed_form_gap;
  bool has_zero_dynamics = false;
  double zd_A = 0.0, zd_F = 0.0;
  ScalarStabilityVerdict zd_verdict;
  ops::ControllabilityReport controllability;
  std::optional<StabilisationHypotheses> stabilisation;
  std::optional<StabilityProbe> probe;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

/// Relative degree, normal form and zero-dynamics summary of a registered
/// system. UnsupportedSystem propagates for m != 0.
AnalyzeReport run_analyze(const ExperimentConfig& cfg, bool stability);

struct EstimatorRow {
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::int64_t windows = 0;
  std::int64_t skipped = 0;
  /// max_k |dW_hat(k) - dW(k)| over non-skipped windows
  double max_error = 0.0;
  /// |sum_k c_s(t_{k-1}) dW_hat(k) - sum_i c_s(t_i) dW_i|
  double weighted_error = 0.0;
  std::string csv;
};

struct EstimatorStudy {
  std::vector<EstimatorRow> rows;
  /// per seed: max_error strictly decreasing along the (descending) ladder
  std::vector<std::pair<std::uint64_t, bool>> decay;
  std::vector<std::pair<std::uint64_t, bool>> weighted_decay;
  bool has_verdict = false;

  bool pass() const;
  nlohmann::json to_json() const;
};

/// Open-loop example runs in x, windowed estimates against the true increments.
EstimatorStudy run_estimator_study(const ExperimentConfig& cfg);

}  // namespace pathwise::exp
