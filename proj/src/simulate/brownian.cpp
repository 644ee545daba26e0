#include "pathwise/simulate/brownian.hpp"

#include <cmath>

#include <fmt/format.h>

#include "pathwise/errors.hpp"

namespace pathwise {

double PolarNormal::operator()() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

BrownianPath BrownianPath::generate(std::uint64_t seed, double dt, std::int64_t steps) {
  if (!(dt > 0.0)) throw DomainError("Brownian path needs dt > 0");
  if (steps < 1) throw DomainError("Brownian path needs at least one step");
  BrownianPath p;
  p.seed_ = seed;
  p.dt_ = dt;
  const auto n = static_cast<std::size_t>(steps);
  p.increments_.resize(n);
  p.cumulative_.resize(n + 1);
  PolarNormal normal(seed);
  const double scale = std::sqrt(dt);
  double w = 0.0;
  p.cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dw = scale * normal();
    p.increments_[i] = dw;
    w += dw;
    p.cumulative_[i + 1] = w;
  }
  return p;
}

double BrownianPath::increment_sum(std::int64_t start, std::int64_t count) const {
  double s = 0.0;
  for (std::int64_t i = start; i < start + count; ++i) s += increment(i);
  return s;
}

BrownianPath BrownianPath::aggregate(int block) const {
  if (block < 1 || steps() % block != 0) throw DomainError("aggregation block must divide the step count");
  BrownianPath p;
  p.seed_ = seed_;
  p.dt_ = dt_ * block;
  const auto n = static_cast<std::size_t>(steps() / block);
  p.increments_.resize(n);
  p.cumulative_.resize(n + 1);
  double w = 0.0;
  p.cumulative_[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dw = increment_sum(static_cast<std::int64_t>(k) * block, block);
    p.increments_[k] = dw;
    w += dw;
    p.cumulative_[k + 1] = w;
  }
  return p;
}

std::string BrownianPath::metadata() const {
  return fmt::format("generator={};seed={};dt={:.17g};steps={}", kGenerator, seed_, dt_, steps());
}

}  // namespace pathwise
