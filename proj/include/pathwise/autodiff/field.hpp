#pragma once

// Scalar and vector fields over R^n, evaluable at every layer of the dual
// tower. A field built from a generic lambda is instantiated once per layer;
// a field derived from other fields (a Lie derivative, say) evaluates its
// parents one or two layers higher, so each derivation consumes depth.

#include <concepts>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pathwise/autodiff/dual.hpp"
#include "pathwise/errors.hpp"

namespace pathwise::ad {

/// Deepest layer of the tower. Layer L carries exact partials up to order L.
inline constexpr int kMaxLevel = 6;

template <int L>
struct level_scalar {
  using type = Dual<typename level_scalar<L - 1>::type>;
};
template <>
struct level_scalar<0> {
  using type = double;
};

template <int L>
using Real = typename level_scalar<L>::type;

template <int L>
using Level = std::integral_constant<int, L>;

template <int L>
using ScalarFn = std::function<Real<L>(std::span<const Real<L>>)>;
template <int L>
using VectorFn = std::function<std::vector<Real<L>>(std::span<const Real<L>>)>;

namespace detail {

template <template <int> class Fn, class Seq>
struct level_table;
template <template <int> class Fn, int... L>
struct level_table<Fn, std::integer_sequence<int, L...>> {
  using type = std::tuple<Fn<L>...>;
};

using Levels = std::make_integer_sequence<int, kMaxLevel + 1>;

template <class F, int... L>
void for_each_level(F&& f, std::integer_sequence<int, L...>) {
  (f(Level<L>{}), ...);
}

void check_dim(std::size_t got, int expected, const char* what);
[[noreturn]] void throw_depth(int level, int depth);

}  // namespace detail

template <class F>
concept GenericScalarFn = std::invocable<F&, std::span<const double>>;

class ScalarField {
 public:
  ScalarField() = default;

  /// Field from a generic callable `(std::span<const T>) -> T`.
  template <GenericScalarFn F>
  ScalarField(int dim, F fn) {
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->depth = kMaxLevel;
    detail::for_each_level(
        [&]<int L>(Level<L>) {
          std::get<L>(impl->fns) = [fn](std::span<const Real<L>> x) -> Real<L> {
            return static_cast<Real<L>>(fn(x));
          };
        },
        detail::Levels{});
    impl_ = std::move(impl);
  }

  /// Field whose layer-L evaluator needs its inputs up to layer L + Offset.
  /// `fn(Level<L>, span<const Real<L>>) -> Real<L>`.
  template <int Offset, class F>
  static ScalarField derived(int dim, int depth, F fn) {
    if (depth < 0) throw DepthExhausted("derived field has no usable derivative layer");
    ScalarField out;
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->depth = std::min(depth, kMaxLevel - Offset);
    detail::for_each_level(
        [&]<int L>(Level<L>) {
          if constexpr (L + Offset <= kMaxLevel) {
            std::get<L>(impl->fns) = [fn](std::span<const Real<L>> x) -> Real<L> {
              return fn(Level<L>{}, x);
            };
          }
        },
        detail::Levels{});
    out.impl_ = std::move(impl);
    return out;
  }

  static ScalarField constant(int dim, double c);
  static ScalarField coordinate(int dim, int index);

  bool valid() const { return static_cast<bool>(impl_); }
  int dim() const { return impl_->dim; }
  /// Highest tower layer this field can be evaluated at.
  int depth() const { return impl_->depth; }

  template <int L>
  Real<L> eval(std::span<const Real<L>> x) const {
    detail::check_dim(x.size(), impl_->dim, "scalar field");
    if (L > impl_->depth) detail::throw_depth(L, impl_->depth);
    return std::get<L>(impl_->fns)(x);
  }

  double operator()(std::span<const double> x) const { return eval<0>(x); }
  double operator()(const Eigen::VectorXd& x) const {
    return eval<0>(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

 private:
  struct Impl {
    int dim = 0;
    int depth = 0;
    typename detail::level_table<ScalarFn, detail::Levels>::type fns;
  };
  std::shared_ptr<const Impl> impl_;
};

template <class F>
concept GenericVectorFn = std::invocable<F&, std::span<const double>>;

class VectorField {
 public:
  VectorField() = default;

  /// Field from a generic callable `(std::span<const T>) -> range of T` with
  /// `dim` entries.
  template <GenericVectorFn F>
  VectorField(int dim, F fn) {
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->depth = kMaxLevel;
    detail::for_each_level(
        [&]<int L>(Level<L>) {
          std::get<L>(impl->fns) = [fn](std::span<const Real<L>> x) -> std::vector<Real<L>> {
            auto r = fn(x);
            std::vector<Real<L>> out;
            out.reserve(r.size());
            for (auto& ri : r) out.push_back(static_cast<Real<L>>(ri));
            return out;
          };
        },
        detail::Levels{});
    impl_ = std::move(impl);
  }

  template <int Offset, class F>
  static VectorField derived(int dim, int depth, F fn) {
    if (depth < 0) throw DepthExhausted("derived field has no usable derivative layer");
    VectorField out;
    auto impl = std::make_shared<Impl>();
    impl->dim = dim;
    impl->depth = std::min(depth, kMaxLevel - Offset);
    detail::for_each_level(
        [&]<int L>(Level<L>) {
          if constexpr (L + Offset <= kMaxLevel) {
            std::get<L>(impl->fns) = [fn](std::span<const Real<L>> x) -> std::vector<Real<L>> {
              return fn(Level<L>{}, x);
            };
          }
        },
        detail::Levels{});
    out.impl_ = std::move(impl);
    return out;
  }

  static VectorField zero(int dim);
  static VectorField constant(const Eigen::VectorXd& value);
  static VectorField from_components(const std::vector<ScalarField>& components);

  bool valid() const { return static_cast<bool>(impl_); }
  int dim() const { return impl_->dim; }
  int depth() const { return impl_->depth; }

  template <int L>
  std::vector<Real<L>> eval(std::span<const Real<L>> x) const {
    detail::check_dim(x.size(), impl_->dim, "vector field input");
    if (L > impl_->depth) detail::throw_depth(L, impl_->depth);
    auto out = std::get<L>(impl_->fns)(x);
    detail::check_dim(out.size(), impl_->dim, "vector field output");
    return out;
  }

  Eigen::VectorXd operator()(std::span<const double> x) const;
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;

  ScalarField component(int index) const;

 private:
  struct Impl {
    int dim = 0;
    int depth = 0;
    typename detail::level_table<VectorFn, detail::Levels>::type fns;
  };
  std::shared_ptr<const Impl> impl_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);

inline std::span<const double> as_span(const Eigen::VectorXd& x) {
  return {x.data(), static_cast<std::size_t>(x.size())};
}

}  // namespace pathwise::ad
