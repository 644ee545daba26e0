#include "pathwise/models/sampling.hpp"

#include <array>

#include "pathwise/errors.hpp"

namespace pathwise {

namespace {

constexpr std::array<int, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(int index, int base) {
  double inv = 1.0 / base;
  double scale = inv;
  double out = 0.0;
  while (index > 0) {
    out += (index % base) * scale;
    index /= base;
    scale *= inv;
  }
  return out;
}

}  // namespace

std::vector<Eigen::VectorXd> sample_ball(const Eigen::VectorXd& center, double radius, int count) {
  const auto n = center.size();
  if (n > static_cast<Eigen::Index>(kPrimes.size()))
    throw DimensionError("quasi-random sampling supports at most 16 dimensions");
  std::vector<Eigen::VectorXd> out;
  if (count <= 0) return out;
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(center);
  for (int k = 1; k < count; ++k) {
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i)
      p[i] = center[i] + radius * (2.0 * radical_inverse(k, kPrimes[static_cast<std::size_t>(i)]) - 1.0);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace pathwise
