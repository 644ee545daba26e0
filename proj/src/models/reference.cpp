#include "pathwise/models/reference.hpp"

#include <cmath>

namespace pathwise {

ReferenceSignal cosine_reference(double beta, double alpha, double omega, int order) {
  return ReferenceSignal(order, [=](double t) {
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    std::vector<double> out(static_cast<std::size_t>(order) + 1);
    out[0] = beta + alpha * c;
    double scale = alpha;
    for (int k = 1; k <= order; ++k) {
      scale *= omega;
      // d^k/dt^k cos(wt) = w^k cos(wt + k pi/2), cycled exactly.
      switch (k % 4) {
        case 0: out[static_cast<std::size_t>(k)] = scale * c; break;
        case 1: out[static_cast<std::size_t>(k)] = -scale * s; break;
        case 2: out[static_cast<std::size_t>(k)] = -scale * c; break;
        default: out[static_cast<std::size_t>(k)] = scale * s; break;
      }
    }
    return out;
  });
}

ReferenceSignal zero_reference(int order) {
  return ReferenceSignal(order, [order](double) {
    return std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0);
  });
}

}  // namespace pathwise
