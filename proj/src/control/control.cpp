#include "pathwise/control/control.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pathwise/autodiff/derivatives.hpp"
#include "pathwise/errors.hpp"
#include "pathwise/models/sampling.hpp"

namespace pathwise {

double PolePlacement::reconstruction_error() const {
  double worst = 0.0;
  for (const auto& rho : roots) {
    std::complex<double> p(1.0, 0.0);
    for (int i = r - 1; i >= 0; --i) p = p * rho + d[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::abs(p));
  }
  return worst;
}

PolePlacement place_poles(const std::vector<std::complex<double>>& roots) {
  if (roots.empty()) throw DomainError("pole placement needs at least one root");
  // conjugate pairing
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (!(roots[i].real() < 0.0))
      throw DomainError(fmt::format("root {}{:+}i does not have a negative real part", roots[i].real(),
                                    roots[i].imag()));
    if (roots[i].imag() == 0.0 || used[i]) continue;
    bool found = false;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i || used[j]) continue;
      if (std::abs(roots[j] - std::conj(roots[i])) <= 1e-12 * std::max(1.0, std::abs(roots[i]))) {
        used[i] = used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) throw DomainError("complex roots must come in conjugate pairs");
  }

  // coefficients of prod (s - rho), lowest degree first
  std::vector<std::complex<double>> c{1.0};
  for (const auto& rho : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= rho * c[i];
    }
    c = std::move(next);
  }
  PolePlacement p;
  p.r = static_cast<int>(roots.size());
  p.roots = roots;
  p.d.resize(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) p.d[i] = c[i].real();
  p.stable = true;
  if (p.reconstruction_error() > 1e-9 * std::max(1.0, *std::max_element(p.d.begin(), p.d.end())))
    throw DomainError("pole placement: polynomial does not reproduce its roots");
  return p;
}

PolePlacement place_poles(const std::vector<double>& roots) {
  std::vector<std::complex<double>> c(roots.begin(), roots.end());
  return place_poles(c);
}

Eigen::MatrixXd companion_matrix(const std::vector<double>& d) {
  const auto r = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(r, r);
  for (Eigen::Index i = 0; i + 1 < r; ++i) A(i, i + 1) = 1.0;
  for (Eigen::Index j = 0; j < r; ++j) A(r - 1, j) = -d[static_cast<std::size_t>(j)];
  return A;
}

double tracking_v(const Eigen::VectorXd& zeta, const std::vector<double>& ref, const PolePlacement& poles) {
  const int r = poles.r;
  if (zeta.size() != r || static_cast<int>(ref.size()) < r + 1)
    throw DimensionError("tracking_v: zeta and reference must match the pole count");
  double v = ref[static_cast<std::size_t>(r)];
  for (int i = 0; i < r; ++i) {
    const auto k = static_cast<std::size_t>(i);
    v -= poles.d[k] * (zeta[i] - ref[k]);
  }
  return v;
}

namespace {

void require_b(double b) {
  if (!(std::abs(b) > kSingularB))
    throw SingularControl(fmt::format("|b| = {:g} is below the admissibility threshold {:g}", std::abs(b), kSingularB));
}

}  // namespace

double idealistic_control(const NormalFormCoefficients& c, double xi, double v) {
  require_b(c.b);
  return (-c.c_d - c.c_s * xi + v) / c.b;
}

double idealistic_control(const NormalFormDef& nf, const Eigen::VectorXd& z, double xi, double v) {
  return idealistic_control(nf.at_z(z), xi, v);
}

double zero_noise_control(const NormalFormCoefficients& c, double v) {
  require_b(c.b);
  return (-c.c_d + v) / c.b;
}

double zero_noise_control(const NormalFormDef& nf, const Eigen::VectorXd& z, double v) {
  return zero_noise_control(nf.at_z(z), v);
}

HybridJump hybrid_jump(const NormalFormCoefficients& start, const NormalFormCoefficients& end,
                       const IncrementEstimate& est) {
  if (est.skipped) return {};
  require_b(end.b);
  HybridJump j;
  j.u_star = -start.c_s * est.dw_hat / end.b;
  j.dz_r = end.b * j.u_star;
  return j;
}

HybridJump hybrid_jump(const NormalFormDef& nf, const Eigen::VectorXd& z_start, const Eigen::VectorXd& z_end,
                       const IncrementEstimate& est) {
  const auto start = nf.at_z(z_start);
  return hybrid_jump(start, nf.at_z(z_end, start.x), est);
}

const char* to_string(ControllerFamily f) {
  switch (f) {
    case ControllerFamily::idealistic: return "idealistic";
    case ControllerFamily::zero_noise: return "zero_noise";
    case ControllerFamily::hybrid: return "hybrid";
  }
  return "?";
}

const char* to_string(ControllerTask t) { return t == ControllerTask::linearise ? "linearise" : "track"; }

ControllerFamily parse_family(const std::string& s) {
  if (s == "idealistic") return ControllerFamily::idealistic;
  if (s == "zero_noise" || s == "zero-noise") return ControllerFamily::zero_noise;
  if (s == "hybrid") return ControllerFamily::hybrid;
  throw ConfigError("unknown controller family '" + s + "' (idealistic, zero_noise, hybrid)");
}

ControllerTask parse_task(const std::string& s) {
  if (s == "linearise" || s == "linearize") return ControllerTask::linearise;
  if (s == "track" || s == "stabilise" || s == "stabilize") return ControllerTask::track;
  throw ConfigError("unknown controller task '" + s + "' (linearise, track, stabilise)");
}

std::string ControllerSpec::label() const {
  std::string s = fmt::format("{}/{}", to_string(family), to_string(task));
  if (family == ControllerFamily::hybrid && epsilon) s += fmt::format("/eps={:g}", *epsilon);
  return s;
}

namespace {

class BoundController final : public CompensatingController {
 public:
  BoundController(ControllerSpec spec, ReferenceSignal ref, int r)
      : spec_(std::move(spec)), ref_(std::move(ref)), r_(r) {}

  bool needs_noise() const override { return spec_.family == ControllerFamily::idealistic; }
  bool wants_jumps() const override { return spec_.family == ControllerFamily::hybrid; }

  double control(const StepContext& ctx) override {
    const PlantPoint& p = *ctx.point;
    if (!p.coeffs) throw ConfigError("controller needs normal-form coefficients from the plant");
    const double v = input(ctx.t, p.z.head(r_));
    if (spec_.family == ControllerFamily::idealistic) {
      if (!ctx.xi) throw ConfigError("idealistic control was not granted the noise");
      return idealistic_control(*p.coeffs, *ctx.xi, v);
    }
    return zero_noise_control(*p.coeffs, v);
  }

  std::optional<JumpDecision> jump(const JumpContext& jc) override {
    const PlantPoint& s = *jc.start;
    const PlantPoint& e = *jc.end;
    const auto est = estimate_increment(s.state, e.state, jc.plant->drift(s, jc.u_start), jc.plant->diffusion(s),
                                        jc.epsilon, spec_.delta_threshold);
    JumpDecision d;
    d.dw_hat = est.dw_hat;
    d.skipped = est.skipped;
    if (est.skipped) {
      ++skipped_;
      return d;
    }
    const auto j = hybrid_jump(*s.coeffs, *e.coeffs, est);
    d.u_star = j.u_star;
    if (j.u_star != 0.0) compensation_ += e.coeffs->b * j.u_star;
    return d;
  }

  double compensation() const override { return compensation_; }
  std::int64_t skipped() const override { return skipped_; }

 private:
  double input(double t, const Eigen::VectorXd& zeta) const {
    if (spec_.task == ControllerTask::linearise) return spec_.v_input ? spec_.v_input(t) : 0.0;
    return tracking_v(zeta, ref_(t), spec_.poles);
  }

  ControllerSpec spec_;
  ReferenceSignal ref_;
  int r_;
  double compensation_ = 0.0;
  std::int64_t skipped_ = 0;
};

}  // namespace

ControllerFactory bind(const ControllerSpec& spec, const NormalFormDef& nf, const ReferenceSignal& ref, double dt) {
  const int r = nf.r();
  if (spec.task == ControllerTask::track) {
    if (spec.poles.r != r)
      throw ConfigError(fmt::format("tracking needs {} poles, got {}", r, spec.poles.r));
    if (ref.order() < r) throw ConfigError(fmt::format("reference must provide {} derivatives", r));
  }
  if (spec.family == ControllerFamily::hybrid) {
    if (!spec.epsilon) throw ConfigError("hybrid control needs epsilon");
    const double q = *spec.epsilon / dt;
    if (q < 1.0 - 1e-9 || std::abs(q - std::round(q)) > 1e-6)
      throw ConfigError(fmt::format("epsilon = {:g} is not a multiple of dt = {:g}", *spec.epsilon, dt));
  }
  return [spec, ref, r]() -> std::unique_ptr<Controller> { return std::make_unique<BoundController>(spec, ref, r); };
}

StabilisationHypotheses check_stabilisation_hypotheses(const NormalFormDef& nf, double eta_radius, int samples) {
  const int n = nf.n();
  const int r = nf.r();
  StabilisationHypotheses h;
  h.eta_radius = eta_radius;
  if (r < n) {
    Eigen::VectorXd guess = nf.chart().anchor();
    for (const auto& eta : sample_ball(Eigen::VectorXd::Zero(n - r), eta_radius, samples)) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      z.tail(n - r) = eta;
      const auto c = nf.at_z(z, guess);
      h.max_cs_on_zero_manifold = std::max(h.max_cs_on_zero_manifold, std::abs(c.c_s));
    }
  }
  const Eigen::VectorXd x0 = nf.chart().inverse(Eigen::VectorXd::Zero(n));
  const Eigen::MatrixXd dx = nf.chart().jacobian(x0).inverse().leftCols(r);
  h.cs_zeta_gradient_norm = (ad::gradient(nf.fields().c_s, x0) * dx).norm();
  h.cs_vanishes = h.max_cs_on_zero_manifold <= 1e-9;
  h.gradient_vanishes = h.cs_zeta_gradient_norm <= 1e-9;
  return h;
}

}  // namespace pathwise
