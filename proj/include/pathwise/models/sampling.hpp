#pragma once

#include <vector>

#include <Eigen/Dense>

namespace pathwise {

/// `count` deterministic quasi-random points (Halton) filling the
/// infinity-norm ball of `radius` around `center`. The first point is the
/// center itself.
std::vector<Eigen::VectorXd> sample_ball(const Eigen::VectorXd& center, double radius, int count);

/// A sampled stand-in for "every x in a neighbourhood of center".
struct Neighbourhood {
  Eigen::VectorXd center;
  double radius = 0.2;
  int samples = 200;

  std::vector<Eigen::VectorXd> points() const { return sample_ball(center, radius, samples); }
};

}  // namespace pathwise
