#include "pathwise/errors.hpp"

#include <sstream>

namespace pathwise {

namespace {

std::string nd_message(int order, double magnitude) {
  std::ostringstream msg;
  msg << "noise decoupling fails: the order-" << order
      << " stochastic Lie derivative carries white noise (max |noise coefficient| = " << magnitude
      << "); iterating further would differentiate the white noise";
  return msg.str();
}

std::string newton_message(double residual, int iterations) {
  std::ostringstream msg;
  msg << "inverse coordinate map: Newton did not converge after " << iterations
      << " iterations (residual " << residual << ")";
  return msg.str();
}

}  // namespace

NoiseDecouplingViolation::NoiseDecouplingViolation(int order, double magnitude)
    : Error(nd_message(order, magnitude)), order_(order), magnitude_(magnitude) {}

NewtonFailure::NewtonFailure(double residual, int iterations)
    : Error(newton_message(residual, iterations)), residual_(residual), iterations_(iterations) {}

}  // namespace pathwise
