#pragma once

// Independent oracles shared by the unit tests and the acceptance runner:
// finite differences on plain double evaluations, random points, an
// adaptive ODE solve of the closed tracking loop.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

namespace testing {

using Fn = std::function<double(const Eigen::VectorXd&)>;

// Uniform points of the inf-ball; mt19937_64 bits mapped to [0, 1) by hand so
// every standard library gives the same points.
inline std::vector<Eigen::VectorXd> random_points(int n, int count, double radius, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = radius * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
    pts.push_back(x);
  }
  return pts;
}

// Fourth-order central difference of f along e_i.
inline double fd_partial(const Fn& f, const Eigen::VectorXd& x, int i, double h = 1e-3) {
  auto at = [&](double s) {
    Eigen::VectorXd y = x;
    y[i] += s;
    return f(y);
  };
  return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

inline Eigen::VectorXd fd_gradient(const Fn& f, const Eigen::VectorXd& x, double h = 1e-3) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) g[i] = fd_partial(f, x, i, h);
  return g;
}

// Differences of differences, fourth order in both directions; the raw
// (unsymmetrised) table.
inline Eigen::MatrixXd fd_hessian(const Fn& f, const Eigen::VectorXd& x, double h = 2e-3) {
  const auto n = x.size();
  Eigen::MatrixXd H(n, n);
  for (int j = 0; j < n; ++j) {
    Fn dj = [&, j](const Eigen::VectorXd& y) { return fd_partial(f, y, j, h); };
    for (int i = 0; i < n; ++i) H(i, j) = fd_partial(dj, x, i, h);
  }
  return H;
}

inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F,
                                   const Eigen::VectorXd& x, double h = 1e-3) {
  const auto n = x.size();
  Eigen::MatrixXd J(F(x).size(), n);
  for (int j = 0; j < n; ++j) {
    auto at = [&](double s) {
      Eigen::VectorXd y = x;
      y[j] += s;
      return F(y);
    };
    J.col(j) = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  }
  return J;
}

// Largest |a - b| / max(1, |b|) over the entries.
inline double rel_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
  return m;
}

inline double rel_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// |a - b| relative to the larger magnitude, no floor; 0 when both are 0.
inline double strict_rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Closed tracking loop with the noise cancelled exactly:
//   zeta1' = zeta2,  zeta2' = yR'' - d1 (zeta2 - yR') - d0 (zeta1 - yR),
// yR = beta + alpha cos(omega t), solved by adaptive Dormand-Prince.
// Returns zeta at the requested (increasing) times.
inline std::vector<std::array<double, 2>> tracking_ode(std::array<double, 2> zeta0, double beta, double alpha,
                                                        double omega, double d0, double d1,
                                                        const std::vector<double>& times) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  auto rhs = [=](const State& z, State& dz, double t) {
    const double c = std::cos(omega * t), s = std::sin(omega * t);
    const double y = beta + alpha * c, y1 = -alpha * omega * s, y2 = -alpha * omega * omega * c;
    dz[0] = z[1];
    dz[1] = y2 - d1 * (z[1] - y1) - d0 * (z[0] - y);
  };
  std::vector<State> out;
  out.reserve(times.size());
  State z = zeta0;
  auto stepper = ode::make_dense_output(1e-12, 1e-12, ode::runge_kutta_dopri5<State>());
  ode::integrate_times(stepper, rhs, z, times.begin(), times.end(), 1e-4,
                       [&](const State& v, double) { out.push_back(v); });
  return out;
}

}  // namespace testing
