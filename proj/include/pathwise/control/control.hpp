#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pathwise/estimator/estimator.hpp"
#include "pathwise/models/normal_form.hpp"
#include "pathwise/models/reference.hpp"
#include "pathwise/simulate/controller.hpp"

namespace pathwise {

/// Below this |b| a linearising control is rejected.
inline constexpr double kSingularB = 1e-9;

/// Monic s^r + d_{r-1} s^{r-1} + ... + d_0 with the given roots.
struct PolePlacement {
  int r = 0;
  std::vector<double> d;  // d_0 ... d_{r-1}
  std::vector<std::complex<double>> roots;
  bool stable = false;

  /// max over roots of |p(root)|.
  double reconstruction_error() const;
};

PolePlacement place_poles(const std::vector<std::complex<double>>& roots);
PolePlacement place_poles(const std::vector<double>& roots);

/// Companion matrix whose characteristic polynomial is s^r + ... + d_0.
Eigen::MatrixXd companion_matrix(const std::vector<double>& d);

/// v = y_R^(r) - sum_i d_{i-1} (zeta_i - y_R^(i-1)); `ref` holds y_R^(0..r).
double tracking_v(const Eigen::VectorXd& zeta, const std::vector<double>& ref, const PolePlacement& poles);

/// u = (-c_d - c_s xi + v) / b.
double idealistic_control(const NormalFormCoefficients& c, double xi, double v);
double idealistic_control(const NormalFormDef& nf, const Eigen::VectorXd& z, double xi, double v);

/// u = (-c_d + v) / b.
double zero_noise_control(const NormalFormCoefficients& c, double v);
double zero_noise_control(const NormalFormDef& nf, const Eigen::VectorXd& z, double v);

struct HybridJump {
  double u_star = 0.0;
  double dz_r = 0.0;  // -c_s(start) dW_hat
};

/// u*(k) = -c_s(start) dW_hat / b(end), start post-jump, end pre-jump.
/// A skipped estimate yields no jump.
HybridJump hybrid_jump(const NormalFormCoefficients& start, const NormalFormCoefficients& end,
                       const IncrementEstimate& est);
HybridJump hybrid_jump(const NormalFormDef& nf, const Eigen::VectorXd& z_start, const Eigen::VectorXd& z_end,
                       const IncrementEstimate& est);

enum class ControllerFamily { idealistic, zero_noise, hybrid };
enum class ControllerTask { linearise, track };

const char* to_string(ControllerFamily f);
const char* to_string(ControllerTask t);
ControllerFamily parse_family(const std::string& s);
ControllerTask parse_task(const std::string& s);

struct ControllerSpec {
  ControllerFamily family = ControllerFamily::zero_noise;
  ControllerTask task = ControllerTask::track;
  PolePlacement poles;
  /// External input v(t) for the linearise task.
  std::function<double(double)> v_input;
  std::optional<double> epsilon;
  double delta_threshold = kDefaultDeltaThreshold;

  std::string label() const;
};

/// Controllers keep a running sum of the z_r changes they requested.
class CompensatingController : public Controller {
 public:
  virtual double compensation() const = 0;
  virtual std::int64_t skipped() const = 0;
};

/// Integrator-ready controller factory. Throws ConfigError for an
/// inconsistent spec (hybrid without epsilon, epsilon not a multiple of dt,
/// pole count not equal to r, tracking without a reference of order r).
ControllerFactory bind(const ControllerSpec& spec, const NormalFormDef& nf, const ReferenceSignal& ref, double dt);

/// Checks of the hypotheses under which zero-noise stabilisation is known to
/// work: c_s(0, eta) = 0 near eta = 0 and dc_s/dzeta(0, 0) = 0.
struct StabilisationHypotheses {
  double max_cs_on_zero_manifold = 0.0;
  double eta_radius = 0.0;
  double cs_zeta_gradient_norm = 0.0;
  bool cs_vanishes = false;
  bool gradient_vanishes = false;
  bool hold() const { return cs_vanishes && gradient_vanishes; }
};

StabilisationHypotheses check_stabilisation_hypotheses(const NormalFormDef& nf, double eta_radius = 0.2,
                                                       int samples = 200);

}  // namespace pathwise
