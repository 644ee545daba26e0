#include "pathwise/operators/operators.hpp"

#include <algorithm>
#include <cmath>

#include "pathwise/autodiff/derivatives.hpp"
#include "pathwise/errors.hpp"

namespace pathwise::ops {

using ad::Level;
using ad::Real;

namespace {

void same_dim(int a, int b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": fields of different dimension");
}

template <int L>
Real<L> dot(const std::vector<Real<L>>& a, const std::vector<Real<L>>& b) {
  Real<L> s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
  return s;
}

// sum_ij G_i H_ij F_j
template <int L>
Real<L> quadratic(const std::vector<Real<L>>& H, const std::vector<Real<L>>& F, const std::vector<Real<L>>& G) {
  const std::size_t n = F.size();
  Real<L> s(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Real<L> row(0.0);
    for (std::size_t j = 0; j < n; ++j) row = row + H[i * n + j] * F[j];
    s = s + G[i] * row;
  }
  return s;
}

}  // namespace

ad::ScalarField lie(const ad::ScalarField& phi, const ad::VectorField& F) {
  same_dim(phi.dim(), F.dim(), "lie");
  return ad::ScalarField::derived<1>(
      phi.dim(), std::min(phi.depth() - 1, F.depth()),
      [phi, F]<int L>(Level<L>, std::span<const Real<L>> x) {
        return dot<L>(ad::gradient_at<L>(phi, x), F.eval<L>(x));
      });
}

ad::ScalarField lie2(const ad::ScalarField& phi, const ad::VectorField& F, const ad::VectorField& G) {
  same_dim(phi.dim(), F.dim(), "lie2");
  same_dim(phi.dim(), G.dim(), "lie2");
  return ad::ScalarField::derived<2>(
      phi.dim(), std::min({phi.depth() - 2, F.depth(), G.depth()}),
      [phi, F, G]<int L>(Level<L>, std::span<const Real<L>> x) {
        return quadratic<L>(ad::hessian_at<L>(phi, x), F.eval<L>(x), G.eval<L>(x));
      });
}

ad::VectorField lie_bracket(const ad::VectorField& F, const ad::VectorField& G) {
  same_dim(F.dim(), G.dim(), "lie_bracket");
  const int n = F.dim();
  return ad::VectorField::derived<1>(
      n, std::min(F.depth(), G.depth()) - 1,
      [F, G, n]<int L>(Level<L>, std::span<const Real<L>> x) {
        const auto N = static_cast<std::size_t>(n);
        auto JF = ad::jacobian_at<L>(F, x);
        auto JG = ad::jacobian_at<L>(G, x);
        auto Fx = F.eval<L>(x);
        auto Gx = G.eval<L>(x);
        std::vector<Real<L>> out(N, Real<L>(0.0));
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t j = 0; j < N; ++j) out[i] = out[i] + JG[i * N + j] * Fx[j] - JF[i * N + j] * Gx[j];
        return out;
      });
}

StochasticDerivative stochastic_lie(const ad::ScalarField& phi, const SystemDef& sys) {
  same_dim(phi.dim(), sys.n, "stochastic_lie");
  const ad::VectorField f = sys.f;
  const ad::VectorField l = sys.l;
  StochasticDerivative out;
  // One twice-lifted evaluation yields both the gradient and the Hessian.
  out.deterministic = ad::ScalarField::derived<2>(
      phi.dim(), std::min({phi.depth() - 2, f.depth(), l.depth()}),
      [phi, f, l]<int L>(Level<L>, std::span<const Real<L>> x) {
        auto d = ad::second_order_at<L>(phi, x);
        auto lx = l.eval<L>(x);
        return Real<L>(dot<L>(d.gradient, f.eval<L>(x)) + quadratic<L>(d.hessian, lx, lx) * 0.5);
      });
  out.noise_coeff = lie(phi, l);
  out.order = 1;
  return out;
}

double max_abs(const ad::ScalarField& phi, const std::vector<Eigen::VectorXd>& points) {
  double worst = 0.0;
  for (const auto& x : points) {
    const double v = std::abs(phi(x));
    if (!(v <= worst)) worst = v;  // lets NaN win
  }
  return worst;
}

StochasticDerivative iterate_stochastic_lie(const SystemDef& sys, int k, const Neighbourhood& nbhd) {
  if (k < 0) throw DomainError("order must be non-negative");
  StochasticDerivative cur{sys.h, ad::ScalarField::constant(sys.n, 0.0), 0};
  if (k == 0) return cur;
  const auto points = nbhd.points();
  for (int j = 1; j <= k; ++j) {
    if (j > 1) {
      // cur.noise_coeff is L_l S^{j-2} h
      const double noise = max_abs(cur.noise_coeff, points);
      if (!(noise <= kVanishTol)) throw NoiseDecouplingViolation(j - 2, noise);
    }
    const int order = cur.order + 1;
    cur = stochastic_lie(cur.deterministic, sys);
    cur.order = order;
  }
  return cur;
}

StochasticDerivative a_operator(const ad::ScalarField& phi, const SystemDef& sys) {
  same_dim(phi.dim(), sys.n, "a_operator");
  StochasticDerivative out;
  out.order = 1;
  if (sys.m) {
    out.deterministic = lie(phi, sys.g) + lie2(phi, sys.l, *sys.m);
    out.noise_coeff = lie(phi, *sys.m);
  } else {
    out.deterministic = lie(phi, sys.g);
    out.noise_coeff = ad::ScalarField::constant(sys.n, 0.0);
  }
  return out;
}

ad::VectorField stratonovich_drift(const SystemDef& sys) {
  const ad::VectorField f = sys.f;
  const ad::VectorField l = sys.l;
  const int n = sys.n;
  return ad::VectorField::derived<1>(
      n, std::min(f.depth(), l.depth() - 1), [f, l, n]<int L>(Level<L>, std::span<const Real<L>> x) {
        const auto N = static_cast<std::size_t>(n);
        auto J = ad::jacobian_at<L>(l, x);
        auto lx = l.eval<L>(x);
        auto out = f.eval<L>(x);
        for (std::size_t i = 0; i < N; ++i) {
          Real<L> s(0.0);
          for (std::size_t j = 0; j < N; ++j) s = s + J[i * N + j] * lx[j];
          out[i] = out[i] - s * 0.5;
        }
        return out;
      });
}

int numerical_rank(const Eigen::MatrixXd& rows, double rel_tol) {
  if (rows.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || !(s[0] > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > rel_tol * s[0]) ++rank;
  return rank;
}

RelativeDegreeReport relative_degree(const SystemDef& sys, const Eigen::VectorXd& point, double radius,
                                     int max_order, int samples) {
  sys.validate();
  if (point.size() != sys.n) throw DimensionError("relative_degree: point has the wrong dimension");
  sys.require_no_control_diffusion(point, radius);
  if (max_order < 0) max_order = sys.n;

  RelativeDegreeReport rep;
  rep.point = point;
  rep.radius = radius;
  rep.samples = samples;
  const auto points = sample_ball(point, radius, samples);

  std::vector<ad::ScalarField> chain{sys.h};
  ad::ScalarField phi = sys.h;
  try {
    for (int k = 0; k < max_order; ++k) {
      OrderDiagnostics d;
      d.k = k;
      const ad::ScalarField noise = lie(phi, sys.l);
      const ad::ScalarField control = lie(phi, sys.g);
      d.max_noise = max_abs(noise, points);
      d.max_control = max_abs(control, points);
      d.control_at_point = control(point);
      rep.orders.push_back(d);

      if (std::abs(d.control_at_point) > kVanishTol) {
        rep.r = k + 1;
        rep.rd_value = d.control_at_point;
        rep.noise_at_order_r = d.max_noise > kVanishTol;
        break;
      }
      if (!(d.max_control <= kVanishTol)) {
        rep.reason = "L_g S^" + std::to_string(k) +
                     " h vanishes at the point but not on the neighbourhood (CD fails)";
        break;
      }
      if (!(d.max_noise <= kVanishTol)) {
        rep.reason = "L_l S^" + std::to_string(k) + " h does not vanish (ND fails) before the control appears";
        break;
      }
      phi = stochastic_lie(phi, sys).deterministic;
      chain.push_back(phi);
    }
  } catch (const DepthExhausted& e) {
    rep.reason = std::string("derivative depth exhausted: ") + e.what();
  }
  if (!rep.r && rep.reason.empty())
    rep.reason = "control does not appear up to order " + std::to_string(max_order);

  if (rep.r) {
    const int r = *rep.r;
    Eigen::MatrixXd rows(r, sys.n);
    for (int i = 0; i < r; ++i) rows.row(i) = ad::gradient(chain[static_cast<std::size_t>(i)], point);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
    const auto& s = svd.singularValues();
    rep.gradient_singular_values.assign(s.data(), s.data() + s.size());
    rep.gradient_rank = numerical_rank(rows);
  }
  return rep;
}

ControllabilityReport controllability_matrix(const SystemDef& sys, const Eigen::VectorXd& point) {
  sys.validate();
  const int n = sys.n;
  const ad::VectorField fs = stratonovich_drift(sys);
  ControllabilityReport rep;
  rep.matrix.resize(n, n);
  ad::VectorField col = sys.g;
  for (int i = 0; i < n; ++i) {
    rep.matrix.col(i) = col(point);
    if (i + 1 < n) col = lie_bracket(fs, col);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rep.matrix);
  rep.singular_values = svd.singularValues();
  const auto& s = rep.singular_values;
  rep.invertible = s.size() > 0 && s[0] > 0.0 && s[s.size() - 1] > 1e-9 * s[0];
  return rep;
}

}  // namespace pathwise::ops
