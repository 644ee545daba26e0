#include "pathwise/models/normal_form.hpp"

#include <cmath>
#include <limits>

#include "pathwise/errors.hpp"

namespace pathwise {

NormalFormDef::NormalFormDef(CoordinateChange chart, NormalFormFields fields)
    : chart_(std::move(chart)), fields_(std::move(fields)) {
  const auto internal = static_cast<std::size_t>(n() - r());
  if (r() < 1 || r() > n()) throw DimensionError("relative degree must lie in [1, n]");
  if (fields_.p_d.size() != internal || fields_.p_s.size() != internal)
    throw DimensionError("internal dynamics must have n - r components");
}

NormalFormCoefficients NormalFormDef::at_x(const Eigen::VectorXd& x) const {
  NormalFormCoefficients c;
  c.x = x;
  c.z = chart_.forward(x);
  c.c_d = fields_.c_d(x);
  c.c_s = fields_.c_s(x);
  c.b = fields_.b(x);
  const auto internal = static_cast<Eigen::Index>(fields_.p_d.size());
  c.p_d.resize(internal);
  c.p_s.resize(internal);
  for (Eigen::Index j = 0; j < internal; ++j) {
    c.p_d[j] = fields_.p_d[static_cast<std::size_t>(j)](x);
    c.p_s[j] = fields_.p_s[static_cast<std::size_t>(j)](x);
  }
  return c;
}

NormalFormCoefficients NormalFormDef::at_z(const Eigen::VectorXd& z, const Eigen::VectorXd& guess) const {
  NormalFormCoefficients c = at_x(chart_.inverse(z, guess));
  c.z = z;
  return c;
}

Eigen::VectorXd NormalFormDef::drift(const NormalFormCoefficients& c, double u) const {
  const int rr = r();
  Eigen::VectorXd d(n());
  for (int i = 0; i + 1 < rr; ++i) d[i] = c.z[i + 1];
  d[rr - 1] = c.c_d + c.b * u;
  d.tail(n() - rr) = c.p_d;
  return d;
}

Eigen::VectorXd NormalFormDef::diffusion(const NormalFormCoefficients& c) const {
  const int rr = r();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n());
  d[rr - 1] = c.c_s;
  d.tail(n() - rr) = c.p_s;
  return d;
}

double NormalFormDef::min_abs_b(const Neighbourhood& nbhd) const {
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& x : nbhd.points()) smallest = std::min(smallest, std::abs(fields_.b(x)));
  return smallest;
}

void NormalFormDef::validate(const Neighbourhood& nbhd) const {
  if (!(min_abs_b(nbhd) > 1e-9))
    throw SingularControl("control coefficient b vanishes inside the working neighbourhood");
}

}  // namespace pathwise
