#include "pathwise/models/example.hpp"

#include <cmath>
#include <sstream>

#include "pathwise/errors.hpp"

namespace pathwise::example {

SystemDef system() {
  SystemDef sys;
  sys.name = "example";
  sys.n = 3;
  sys.f = ad::VectorField(3, [](auto x) {
    using std::cos;
    using std::sin;
    using std::tan;
    using T = std::decay_t<decltype(x[0])>;
    T s2 = sin(x[1]);
    T c2 = cos(x[1]);
    return std::array<T, 3>{s2 * (1.0 + x[0]), -2.0 * tan(x[1]),
                            2.0 * x[2] + x[0] * s2 - 2.0 * s2 * x[0] * x[0] / (c2 * c2)};
  });
  sys.g = ad::VectorField(3, [](auto x) {
    using std::exp;
    using T = std::decay_t<decltype(x[0])>;
    T e = exp(x[2]);
    return std::array<T, 3>{e, T(0.0), e};
  });
  sys.l = ad::VectorField(3, [](auto x) {
    using std::cos;
    using T = std::decay_t<decltype(x[0])>;
    return std::array<T, 3>{x[0], -2.0 * x[0] / cos(x[1]), -x[0]};
  });
  sys.h = ad::ScalarField(3, [](auto x) {
    using std::sin;
    return x[0] + sin(x[1]) - x[2];
  });
  sys.working_radius = 0.5;
  sys.guard = [](const Eigen::VectorXd& x) -> std::optional<std::string> {
    if (std::abs(x[1]) > 1.4) {
      std::ostringstream msg;
      msg << "|x2| = " << std::abs(x[1]) << " exceeds 1.4 (tan x2 and 1/cos x2 blow up at pi/2)";
      return msg.str();
    }
    return std::nullopt;
  };
  return sys;
}

CoordinateChange phi() {
  std::vector<ad::ScalarField> comps{
      ad::ScalarField(3, [](auto x) {
        using std::sin;
        return x[0] + sin(x[1]) - x[2];
      }),
      ad::ScalarField(3, [](auto x) {
        using std::sin;
        return -sin(x[1]) - 2.0 * x[2];
      }),
      ad::ScalarField(3, [](auto x) { return x[0] - x[2]; }),
  };
  return CoordinateChange(std::move(comps), 2, Eigen::VectorXd::Zero(3));
}

NormalFormDef normal_form() {
  NormalFormFields fields;
  fields.c_d = ad::ScalarField(3, [](auto x) {
    using std::cos;
    using std::sin;
    auto s2 = sin(x[1]);
    auto c2 = cos(x[1]);
    return 2.0 * s2 - 4.0 * x[2] - 2.0 * x[0] * s2 + 6.0 * x[0] * x[0] * s2 / (c2 * c2);
  });
  fields.c_s = ad::ScalarField(3, [](auto x) { return 4.0 * x[0]; });
  fields.b = ad::ScalarField(3, [](auto x) {
    using std::exp;
    return -2.0 * exp(x[2]);
  });
  fields.p_d = {ad::ScalarField(3, [](auto x) {
    using std::cos;
    using std::sin;
    auto s2 = sin(x[1]);
    auto c2 = cos(x[1]);
    return s2 - 2.0 * x[2] + 2.0 * x[0] * x[0] * s2 / (c2 * c2);
  })};
  fields.p_s = {ad::ScalarField(3, [](auto x) { return 2.0 * x[0]; })};
  return NormalFormDef(phi(), std::move(fields));
}

ScalarSde zero_dynamics() {
  auto check = [](double eta) {
    if (!(std::abs(eta) < 1.0)) {
      std::ostringstream msg;
      msg << "zero dynamics undefined at |eta| = " << std::abs(eta) << " >= 1 (cos^2 x2 vanishes)";
      throw DomainError(msg.str());
    }
  };
  ScalarSde zd;
  zd.drift = [check](double eta) {
    check(eta);
    return -2.0 * eta + 9.0 * eta * eta * eta / (2.0 * (eta * eta - 1.0));
  };
  zd.diffusion = [check](double eta) {
    check(eta);
    return 3.0 * eta;
  };
  zd.drift_slope = -2.0;
  zd.diffusion_slope = 3.0;
  zd.domain_limit = 1.0;
  return zd;
}

Eigen::VectorXd zero_dynamics_point(double eta) {
  if (!(std::abs(eta) < 1.0)) throw DomainError("zero-dynamics point needs |eta| < 1");
  return Eigen::Vector3d(1.5 * eta, std::asin(-eta), 0.5 * eta);
}

}  // namespace pathwise::example
