#include "pathwise/transform/transform.hpp"

#include <cmath>
#include <sstream>

#include "pathwise/autodiff/derivatives.hpp"
#include "pathwise/errors.hpp"

namespace pathwise {

namespace {

// h, S h, ..., S^{r-1} h (deterministic parts).
std::vector<ad::ScalarField> output_chain(const SystemDef& sys, int r) {
  std::vector<ad::ScalarField> chain{sys.h};
  for (int k = 1; k < r; ++k) chain.push_back(ops::stochastic_lie(chain.back(), sys).deterministic);
  return chain;
}

ops::RelativeDegreeReport require_relative_degree(const SystemDef& sys, const Eigen::VectorXd& point,
                                                  const TransformOptions& opt) {
  auto rep = ops::relative_degree(sys, point, opt.radius, sys.n, opt.samples);
  if (!rep.r) throw DomainError("relative degree undefined at the point: " + rep.reason);
  return rep;
}

Transform assemble(const SystemDef& sys, const Eigen::VectorXd& point, ops::RelativeDegreeReport rd,
                   std::vector<ad::ScalarField> comps, std::size_t first_completion, const TransformOptions& opt) {
  const int r = *rd.r;
  Transform t;
  t.relative_degree = std::move(rd);
  CoordinateChange chart(comps, r, point, opt.newton);

  const Eigen::MatrixXd J = chart.jacobian(point);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  t.jacobian_singular_values = svd.singularValues();
  const auto& s = t.jacobian_singular_values;
  if (!(s[0] > 0.0) || !(s[s.size() - 1] > 1e-9 * s[0])) {
    std::ostringstream msg;
    msg << "coordinate change is singular at the point (sigma_min / sigma_max = "
        << (s[0] > 0.0 ? s[s.size() - 1] / s[0] : 0.0) << ")";
    throw SingularJacobian(msg.str());
  }

  const auto points = sample_ball(point, opt.radius, opt.samples);
  for (std::size_t j = first_completion; j < comps.size(); ++j) {
    const double lg = ops::max_abs(ops::lie(comps[j], sys.g), points);
    t.completion_control.push_back(lg);
    if (!(lg <= ops::kVanishTol)) {
      t.input_dependent_internal = true;
      std::ostringstream msg;
      msg << "completion " << (j - first_completion + 1) << ": max |L_g phi| = " << lg
          << " on the neighbourhood; internal dynamics depend on u";
      t.warnings.push_back(msg.str());
    }
  }
  t.chart = std::move(chart);
  return t;
}

}  // namespace

Transform build_transform(const SystemDef& sys, const Eigen::VectorXd& point,
                          const std::vector<ad::ScalarField>& completions, const TransformOptions& opt) {
  auto rd = require_relative_degree(sys, point, opt);
  const int r = *rd.r;
  if (static_cast<int>(completions.size()) != sys.n - r) {
    std::ostringstream msg;
    msg << "expected " << sys.n - r << " completion functions, got " << completions.size();
    throw DimensionError(msg.str());
  }
  auto comps = output_chain(sys, r);
  for (const auto& c : completions) {
    if (c.dim() != sys.n) throw DimensionError("completion function has the wrong dimension");
    comps.push_back(c);
  }
  return assemble(sys, point, std::move(rd), std::move(comps), static_cast<std::size_t>(r), opt);
}

Transform build_transform_auto(const SystemDef& sys, const Eigen::VectorXd& point, const TransformOptions& opt) {
  auto rd = require_relative_degree(sys, point, opt);
  const int r = *rd.r;
  const int n = sys.n;
  auto comps = output_chain(sys, r);

  // Gram-Schmidt: orthonormalise the chain gradients, then extend with the
  // standard basis vectors that survive projection.
  std::vector<Eigen::VectorXd> basis;
  auto try_add = [&](Eigen::VectorXd v) {
    for (const auto& q : basis) v -= v.dot(q) * q;
    const double norm = v.norm();
    if (norm <= 1e-8) return false;
    basis.push_back(v / norm);
    return true;
  };
  for (const auto& c : comps) try_add(ad::gradient(c, point).transpose());
  for (int i = 0; i < n && static_cast<int>(basis.size()) < n; ++i) {
    const std::size_t before = basis.size();
    if (try_add(Eigen::VectorXd::Unit(n, i))) {
      const Eigen::VectorXd w = basis[before];
      const Eigen::VectorXd x0 = point;
      comps.push_back(ad::ScalarField(n, [w, x0](auto x) {
        using T = std::decay_t<decltype(x[0])>;
        T s(0.0);
        for (std::size_t k = 0; k < x.size(); ++k) s = s + (x[k] - x0[static_cast<Eigen::Index>(k)]) * w[static_cast<Eigen::Index>(k)];
        return s;
      }));
    }
  }
  auto t = assemble(sys, point, std::move(rd), std::move(comps), static_cast<std::size_t>(r), opt);
  t.auto_completed = true;
  t.warnings.push_back("completions generated by Gram-Schmidt; L_g phi_j = 0 is not guaranteed");
  return t;
}

NormalFormDef normal_form(const Transform& t, const SystemDef& sys) {
  if (t.input_dependent_internal)
    throw UnsupportedSystem("internal dynamics depend on the input (some L_g phi_j != 0); choose other completions");
  const int r = t.chart.relative_degree();
  const auto& comps = t.chart.components();
  const ad::ScalarField& last = comps[static_cast<std::size_t>(r - 1)];

  NormalFormFields fields;
  const auto top = ops::stochastic_lie(last, sys);
  fields.c_d = top.deterministic;
  fields.c_s = top.noise_coeff;
  fields.b = ops::a_operator(last, sys).deterministic;
  for (std::size_t j = static_cast<std::size_t>(r); j < comps.size(); ++j) {
    const auto sj = ops::stochastic_lie(comps[j], sys);
    fields.p_d.push_back(sj.deterministic);
    fields.p_s.push_back(sj.noise_coeff);
  }
  return NormalFormDef(t.chart, std::move(fields));
}

ScalarSde ZeroDynamics::as_scalar() const {
  if (dim != 1) throw DimensionError("zero dynamics is not scalar");
  ScalarSde out;
  auto d = drift;
  auto s = diffusion;
  out.drift = [d](double eta) { return d(Eigen::VectorXd::Constant(1, eta))[0]; };
  out.diffusion = [s](double eta) { return s(Eigen::VectorXd::Constant(1, eta))[0]; };
  out.drift_slope = drift_jacobian(0, 0);
  out.diffusion_slope = diffusion_jacobian(0, 0);
  return out;
}

ZeroDynamics zero_dynamics(const NormalFormDef& nf) {
  const int r = nf.r();
  const int n = nf.n();
  if (r >= n) throw DimensionError("no internal dynamics (r = n)");
  const int m = n - r;
  ZeroDynamics zd;
  zd.dim = m;
  auto lift = [r, n](const Eigen::VectorXd& eta) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    z.tail(n - r) = eta;
    return z;
  };
  zd.drift = [nf, lift](const Eigen::VectorXd& eta) { return nf.at_z(lift(eta)).p_d; };
  zd.diffusion = [nf, lift](const Eigen::VectorXd& eta) { return nf.at_z(lift(eta)).p_s; };

  // Chain rule through the inverse chart: d x / d eta = J_Phi^{-1} restricted
  // to the eta columns.
  const Eigen::VectorXd x0 = nf.chart().inverse(Eigen::VectorXd::Zero(n));
  const Eigen::MatrixXd dx = nf.chart().jacobian(x0).inverse().rightCols(m);
  zd.drift_jacobian.resize(m, m);
  zd.diffusion_jacobian.resize(m, m);
  for (int j = 0; j < m; ++j) {
    const auto J = static_cast<std::size_t>(j);
    zd.drift_jacobian.row(j) = ad::gradient(nf.fields().p_d[J], x0) * dx;
    zd.diffusion_jacobian.row(j) = ad::gradient(nf.fields().p_s[J], x0) * dx;
  }
  return zd;
}

ScalarStabilityVerdict as_linear_scalar_stability(double A, double F) {
  ScalarStabilityVerdict v;
  v.A = A;
  v.F = F;
  v.exponent = A - 0.5 * F * F;
  v.stable = v.exponent < 0.0;
  return v;
}

}  // namespace pathwise
