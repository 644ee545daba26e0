#pragma once

#include <functional>
#include <vector>

namespace pathwise {

/// A reference y_R together with its first `order` time derivatives.
class ReferenceSignal {
 public:
  using Evaluator = std::function<std::vector<double>(double)>;

  ReferenceSignal() = default;
  ReferenceSignal(int order, Evaluator eval) : order_(order), eval_(std::move(eval)) {}

  int order() const { return order_; }
  /// (y_R(t), y_R'(t), ..., y_R^(order)(t)).
  std::vector<double> operator()(double t) const { return eval_(t); }
  double value(double t) const { return eval_(t).front(); }

 private:
  int order_ = 0;
  Evaluator eval_;
};

/// y_R(t) = beta + alpha cos(omega t), derivatives analytic.
ReferenceSignal cosine_reference(double beta, double alpha, double omega, int order);

ReferenceSignal zero_reference(int order);

}  // namespace pathwise
