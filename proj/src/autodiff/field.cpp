#include "pathwise/autodiff/field.hpp"

#include <algorithm>
#include <sstream>

#include "pathwise/autodiff/derivatives.hpp"

namespace pathwise::ad {

namespace detail {

void check_dim(std::size_t got, int expected, const char* what) {
  if (static_cast<int>(got) != expected) {
    std::ostringstream msg;
    msg << what << ": expected dimension " << expected << ", got " << got;
    throw DimensionError(msg.str());
  }
}

void throw_depth(int level, int depth) {
  std::ostringstream msg;
  msg << "field supports derivative layers up to " << depth << ", layer " << level
      << " requested";
  throw DepthExhausted(msg.str());
}

}  // namespace detail

ScalarField ScalarField::constant(int dim, double c) {
  return ScalarField(dim, [c](auto) { return c; });
}

ScalarField ScalarField::coordinate(int dim, int index) {
  if (index < 0 || index >= dim) throw DimensionError("coordinate index out of range");
  return ScalarField(dim, [index](auto x) { return x[static_cast<std::size_t>(index)]; });
}

VectorField VectorField::zero(int dim) {
  return VectorField(dim, [dim](auto x) {
    using T = std::decay_t<decltype(x[0])>;
    return std::vector<T>(static_cast<std::size_t>(dim), T(0.0));
  });
}

VectorField VectorField::constant(const Eigen::VectorXd& value) {
  std::vector<double> v(value.data(), value.data() + value.size());
  return VectorField(static_cast<int>(v.size()), [v](auto) { return v; });
}

VectorField VectorField::from_components(const std::vector<ScalarField>& components) {
  if (components.empty()) throw DimensionError("vector field needs at least one component");
  const int dim = components.front().dim();
  int depth = kMaxLevel;
  for (const auto& c : components) {
    if (c.dim() != dim) throw DimensionError("vector field components of different dimension");
    depth = std::min(depth, c.depth());
  }
  if (static_cast<int>(components.size()) != dim)
    throw DimensionError("vector field must have as many components as inputs");
  return VectorField::derived<0>(dim, depth, [components]<int L>(Level<L>, std::span<const Real<L>> x) {
    std::vector<Real<L>> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.eval<L>(x));
    return out;
  });
}

Eigen::VectorXd VectorField::operator()(std::span<const double> x) const {
  auto v = eval<0>(x);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd VectorField::operator()(const Eigen::VectorXd& x) const {
  return (*this)(as_span(x));
}

ScalarField VectorField::component(int index) const {
  if (index < 0 || index >= dim()) throw DimensionError("component index out of range");
  VectorField self = *this;
  return ScalarField::derived<0>(dim(), depth(), [self, index]<int L>(Level<L>, std::span<const Real<L>> x) {
    return self.eval<L>(x)[static_cast<std::size_t>(index)];
  });
}

namespace {

void require_same_dim(int a, int b) {
  if (a != b) throw DimensionError("fields of different dimension");
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_dim(a.dim(), b.dim());
  return ScalarField::derived<0>(a.dim(), std::min(a.depth(), b.depth()),
                                 [a, b]<int L>(Level<L>, std::span<const Real<L>> x) {
                                   return a.eval<L>(x) + b.eval<L>(x);
                                 });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_dim(a.dim(), b.dim());
  return ScalarField::derived<0>(a.dim(), std::min(a.depth(), b.depth()),
                                 [a, b]<int L>(Level<L>, std::span<const Real<L>> x) {
                                   return a.eval<L>(x) - b.eval<L>(x);
                                 });
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_dim(a.dim(), b.dim());
  return ScalarField::derived<0>(a.dim(), std::min(a.depth(), b.depth()),
                                 [a, b]<int L>(Level<L>, std::span<const Real<L>> x) {
                                   return a.eval<L>(x) * b.eval<L>(x);
                                 });
}

ScalarField operator*(double s, const ScalarField& a) {
  return ScalarField::derived<0>(a.dim(), a.depth(),
                                 [s, a]<int L>(Level<L>, std::span<const Real<L>> x) {
                                   return Real<L>(a.eval<L>(x) * s);
                                 });
}

namespace {

template <class Op>
VectorField elementwise(const VectorField& a, const VectorField& b, Op op) {
  require_same_dim(a.dim(), b.dim());
  return VectorField::derived<0>(a.dim(), std::min(a.depth(), b.depth()),
                                 [a, b, op]<int L>(Level<L>, std::span<const Real<L>> x) {
                                   auto va = a.eval<L>(x);
                                   auto vb = b.eval<L>(x);
                                   for (std::size_t i = 0; i < va.size(); ++i) va[i] = op(va[i], vb[i]);
                                   return va;
                                 });
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  return elementwise(a, b, [](const auto& u, const auto& v) { return u + v; });
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return elementwise(a, b, [](const auto& u, const auto& v) { return u - v; });
}

VectorField operator*(double s, const VectorField& a) {
  return VectorField::derived<0>(a.dim(), a.depth(),
                                 [s, a]<int L>(Level<L>, std::span<const Real<L>> x) {
                                   auto v = a.eval<L>(x);
                                   for (auto& vi : v) vi = vi * s;
                                   return v;
                                 });
}

Eigen::RowVectorXd gradient(const ScalarField& phi, const Eigen::VectorXd& x) {
  auto g = gradient_at<0>(phi, as_span(x));
  return Eigen::Map<const Eigen::RowVectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
}

Eigen::MatrixXd hessian(const ScalarField& phi, const Eigen::VectorXd& x) {
  const auto n = x.size();
  auto h = hessian_at<0>(phi, as_span(x));
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      h.data(), n, n);
}

Eigen::MatrixXd jacobian(const VectorField& F, const Eigen::VectorXd& x) {
  const auto n = x.size();
  auto J = jacobian_at<0>(F, as_span(x));
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      J.data(), n, n);
}

}  // namespace pathwise::ad
