#pragma once

// Nested forward-mode dual numbers.
//
// Dual<T> carries a value of type T and a gradient with one entry per seed
// direction. Nesting Dual<Dual<double>> etc. yields exact higher-order
// partials: each layer owns its own perturbation, so derivatives taken at an
// inner layer never leak into an outer one. An empty gradient means "all
// partials are zero"; constants never allocate.

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "pathwise/errors.hpp"

namespace pathwise::ad {

template <class T>
class Dual;

namespace detail {

template <class T>
struct gradient_storage {
  using type = std::vector<T>;
};

// The innermost layer is by far the hottest; keep small gradients inline.
template <>
struct gradient_storage<double> {
  using type = boost::container::small_vector<double, 4>;
};

}  // namespace detail

template <class S>
concept Arithmetic = std::is_arithmetic_v<S>;

template <class T>
class Dual {
 public:
  using value_type = T;
  using Gradient = typename detail::gradient_storage<T>::type;

  Dual() : value_(0.0) {}
  Dual(double constant) : value_(constant) {}  // NOLINT: constants lift implicitly
  explicit Dual(const T& value)
    requires(!std::is_same_v<T, double>)
      : value_(value) {}
  Dual(T value, Gradient gradient) : value_(std::move(value)), grad_(std::move(gradient)) {}

  /// Independent variable number `index` out of `n`, at `value`.
  static Dual variable(const T& value, std::size_t index, std::size_t n) {
    Gradient g(n, T(0.0));
    g[index] = T(1.0);
    return Dual(value, std::move(g));
  }

  const T& value() const { return value_; }
  const Gradient& gradient() const { return grad_; }
  bool has_derivative() const { return !grad_.empty(); }
  std::size_t size() const { return grad_.size(); }

  T partial(std::size_t i) const { return i < grad_.size() ? grad_[i] : T(0.0); }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

 private:
  T value_;
  Gradient grad_;
};

namespace detail {

template <class G, class S>
G scaled(const G& g, const S& s) {
  G out;
  out.reserve(g.size());
  for (const auto& gi : g) out.push_back(gi * s);
  return out;
}

template <class G>
G negated(const G& g) {
  G out;
  out.reserve(g.size());
  for (const auto& gi : g) out.push_back(-gi);
  return out;
}

// a*ga + b*gb, treating an empty gradient as zero.
template <class G, class S>
G combine(const G& ga, const S& a, const G& gb, const S& b) {
  if (ga.empty()) return gb.empty() ? G{} : scaled(gb, b);
  if (gb.empty()) return scaled(ga, a);
  if (ga.size() != gb.size()) throw DimensionError("dual gradients of different sizes");
  G out;
  out.reserve(ga.size());
  for (std::size_t i = 0; i < ga.size(); ++i) out.push_back(ga[i] * a + gb[i] * b);
  return out;
}

template <class G>
G added(const G& ga, const G& gb, bool subtract) {
  if (ga.empty()) return subtract ? negated(gb) : gb;
  if (gb.empty()) return ga;
  if (ga.size() != gb.size()) throw DimensionError("dual gradients of different sizes");
  G out;
  out.reserve(ga.size());
  for (std::size_t i = 0; i < ga.size(); ++i) out.push_back(subtract ? ga[i] - gb[i] : ga[i] + gb[i]);
  return out;
}

}  // namespace detail

template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return Dual<T>(-a.value(), detail::negated(a.gradient()));
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return Dual<T>(a.value() + b.value(), detail::added(a.gradient(), b.gradient(), false));
}

template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return Dual<T>(a.value() - b.value(), detail::added(a.gradient(), b.gradient(), true));
}

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return Dual<T>(a.value() * b.value(),
                 detail::combine(a.gradient(), b.value(), b.gradient(), a.value()));
}

template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.value() / b.value();
  if (!a.has_derivative() && !b.has_derivative()) return Dual<T>(std::move(q), {});
  T inv = T(1.0) / b.value();
  T minus_q_inv = -(q * inv);
  auto g = detail::combine(a.gradient(), inv, b.gradient(), minus_q_inv);
  return Dual<T>(std::move(q), std::move(g));
}

template <class T, Arithmetic S>
Dual<T> operator+(const Dual<T>& a, S s) {
  return Dual<T>(a.value() + static_cast<double>(s), a.gradient());
}
template <class T, Arithmetic S>
Dual<T> operator+(S s, const Dual<T>& a) {
  return Dual<T>(static_cast<double>(s) + a.value(), a.gradient());
}
template <class T, Arithmetic S>
Dual<T> operator-(const Dual<T>& a, S s) {
  return Dual<T>(a.value() - static_cast<double>(s), a.gradient());
}
template <class T, Arithmetic S>
Dual<T> operator-(S s, const Dual<T>& a) {
  return Dual<T>(static_cast<double>(s) - a.value(), detail::negated(a.gradient()));
}
template <class T, Arithmetic S>
Dual<T> operator*(const Dual<T>& a, S s) {
  const double c = static_cast<double>(s);
  return Dual<T>(a.value() * c, detail::scaled(a.gradient(), c));
}
template <class T, Arithmetic S>
Dual<T> operator*(S s, const Dual<T>& a) {
  const double c = static_cast<double>(s);
  return Dual<T>(c * a.value(), detail::scaled(a.gradient(), c));
}
template <class T, Arithmetic S>
Dual<T> operator/(const Dual<T>& a, S s) {
  const double c = static_cast<double>(s);
  T v = a.value() / c;
  if (!a.has_derivative()) return Dual<T>(std::move(v), {});
  return Dual<T>(std::move(v), detail::scaled(a.gradient(), 1.0 / c));
}
template <class T, Arithmetic S>
Dual<T> operator/(S s, const Dual<T>& a) {
  const double c = static_cast<double>(s);
  T v = c / a.value();
  if (!a.has_derivative()) return Dual<T>(std::move(v), {});
  T d = -(v / a.value());
  return Dual<T>(std::move(v), detail::scaled(a.gradient(), d));
}

// Elementary functions. Each applies the chain rule with the derivative
// evaluated one layer down, so nesting is exact to every order.

namespace detail {

template <class T, class Deriv>
Dual<T> chain(const Dual<T>& a, T value, Deriv&& derivative) {
  if (!a.has_derivative()) return Dual<T>(std::move(value), {});
  return Dual<T>(std::move(value), scaled(a.gradient(), derivative()));
}

}  // namespace detail

template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(sin(a.value())), [&] { return T(cos(a.value())); });
}

template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return detail::chain(a, T(cos(a.value())), [&] { return T(-sin(a.value())); });
}

template <class T>
Dual<T> tan(const Dual<T>& a) {
  using std::tan;
  T t = tan(a.value());
  return detail::chain(a, t, [&] { return T(1.0 + t * t); });
}

template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.value());
  return detail::chain(a, e, [&] { return e; });
}

template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return detail::chain(a, T(log(a.value())), [&] { return T(1.0 / a.value()); });
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.value());
  return detail::chain(a, s, [&] { return T(0.5 / s); });
}

template <class T, Arithmetic S>
Dual<T> pow(const Dual<T>& a, S exponent) {
  using std::pow;
  const double p = static_cast<double>(exponent);
  if (p == 0.0) return Dual<T>(1.0);
  if (p == 1.0) return a;
  return detail::chain(a, T(pow(a.value(), p)), [&] { return T(p * pow(a.value(), p - 1.0)); });
}

/// Innermost real value of a (possibly nested) scalar.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.value());
}

/// True when the value and every stored partial are finite.
inline bool isfinite(double x) { return std::isfinite(x); }
template <class T>
bool isfinite(const Dual<T>& x) {
  if (!isfinite(x.value())) return false;
  for (const auto& g : x.gradient())
    if (!isfinite(g)) return false;
  return true;
}

}  // namespace pathwise::ad
