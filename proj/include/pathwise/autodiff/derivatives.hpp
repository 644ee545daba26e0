#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pathwise/autodiff/field.hpp"

namespace pathwise::ad {

namespace detail {

template <int L>
std::vector<Real<L + 1>> lift_once(std::span<const Real<L>> x) {
  const std::size_t n = x.size();
  std::vector<Real<L + 1>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(Real<L + 1>::variable(x[i], i, n));
  return out;
}

template <int L>
std::vector<Real<L + 2>> lift_twice(std::span<const Real<L>> x) {
  const std::size_t n = x.size();
  std::vector<Real<L + 2>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(Real<L + 2>::variable(Real<L + 1>::variable(x[i], i, n), i, n));
  return out;
}

}  // namespace detail

/// Gradient of `phi` at a layer-L point, as layer-L scalars.
template <int L>
std::vector<Real<L>> gradient_at(const ScalarField& phi, std::span<const Real<L>> x) {
  static_assert(L + 1 <= kMaxLevel);
  auto lifted = detail::lift_once<L>(x);
  Real<L + 1> r = phi.eval<L + 1>(std::span<const Real<L + 1>>(lifted));
  std::vector<Real<L>> g;
  g.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g.push_back(r.partial(i));
  return g;
}

/// Hessian of `phi`, row-major n*n, symmetrised.
template <int L>
std::vector<Real<L>> hessian_at(const ScalarField& phi, std::span<const Real<L>> x) {
  static_assert(L + 2 <= kMaxLevel);
  const std::size_t n = x.size();
  auto lifted = detail::lift_twice<L>(x);
  Real<L + 2> r = phi.eval<L + 2>(std::span<const Real<L + 2>>(lifted));
  std::vector<Real<L>> raw(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    Real<L + 1> row = r.partial(i);
    for (std::size_t j = 0; j < n; ++j) raw[i * n + j] = row.partial(j);
  }
  std::vector<Real<L>> h(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    h[i * n + i] = raw[i * n + i];
    for (std::size_t j = i + 1; j < n; ++j) {
      Real<L> s = (raw[i * n + j] + raw[j * n + i]) * 0.5;
      h[i * n + j] = s;
      h[j * n + i] = s;
    }
  }
  return h;
}

/// Jacobian of `F`, row-major n*n: entry (i, j) is dF_i/dx_j.
template <int L>
std::vector<Real<L>> jacobian_at(const VectorField& F, std::span<const Real<L>> x) {
  static_assert(L + 1 <= kMaxLevel);
  const std::size_t n = x.size();
  auto lifted = detail::lift_once<L>(x);
  auto r = F.eval<L + 1>(std::span<const Real<L + 1>>(lifted));
  std::vector<Real<L>> J(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) J[i * n + j] = r[i].partial(j);
  return J;
}

/// Gradient and Hessian from a single twice-lifted evaluation.
template <int L>
struct SecondOrder {
  std::vector<Real<L>> gradient;
  std::vector<Real<L>> hessian;  // row-major, symmetrised
};

template <int L>
SecondOrder<L> second_order_at(const ScalarField& phi, std::span<const Real<L>> x) {
  static_assert(L + 2 <= kMaxLevel);
  const std::size_t n = x.size();
  auto lifted = detail::lift_twice<L>(x);
  Real<L + 2> r = phi.eval<L + 2>(std::span<const Real<L + 2>>(lifted));
  SecondOrder<L> out;
  out.gradient.resize(n);
  out.hessian.resize(n * n);
  std::vector<Real<L + 1>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows[i] = r.partial(i);
    out.gradient[i] = rows[i].value();
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.hessian[i * n + i] = rows[i].partial(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      Real<L> s = (rows[i].partial(j) + rows[j].partial(i)) * 0.5;
      out.hessian[i * n + j] = s;
      out.hessian[j * n + i] = s;
    }
  }
  return out;
}

Eigen::RowVectorXd gradient(const ScalarField& phi, const Eigen::VectorXd& x);
Eigen::MatrixXd hessian(const ScalarField& phi, const Eigen::VectorXd& x);
Eigen::MatrixXd jacobian(const VectorField& F, const Eigen::VectorXd& x);

}  // namespace pathwise::ad
