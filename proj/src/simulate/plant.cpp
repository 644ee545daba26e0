#include "pathwise/simulate/plant.hpp"

#include "pathwise/errors.hpp"

namespace pathwise {

const char* to_string(CoordinateMode mode) {
  return mode == CoordinateMode::x_space ? "x_space" : "normal_form";
}

CoordinateMode parse_coordinate_mode(const std::string& s) {
  if (s == "x_space" || s == "x") return CoordinateMode::x_space;
  if (s == "normal_form" || s == "z") return CoordinateMode::normal_form;
  throw ConfigError("coordinate mode must be x_space or normal_form, got '" + s + "'");
}

Plant Plant::x_space(SystemDef sys, std::optional<NormalFormDef> nf) {
  sys.validate();
  if (nf && nf->n() != sys.n) throw DimensionError("normal form and system dimensions differ");
  Plant p;
  p.mode_ = CoordinateMode::x_space;
  p.n_ = sys.n;
  p.sys_ = std::move(sys);
  p.nf_ = std::move(nf);
  return p;
}

Plant Plant::normal_form(NormalFormDef nf, std::optional<SystemDef> sys) {
  if (sys && sys->n != nf.n()) throw DimensionError("normal form and system dimensions differ");
  Plant p;
  p.mode_ = CoordinateMode::normal_form;
  p.n_ = nf.n();
  p.nf_ = std::move(nf);
  p.sys_ = std::move(sys);
  return p;
}

Eigen::VectorXd Plant::initial_state(const Eigen::VectorXd& x0) const {
  if (x0.size() != n_) throw DimensionError("initial state has the wrong dimension");
  return mode_ == CoordinateMode::x_space ? x0 : nf_->chart().forward(x0);
}

PlantPoint Plant::evaluate(const Eigen::VectorXd& state, const Eigen::VectorXd& x_guess) const {
  PlantPoint p;
  p.state = state;
  if (mode_ == CoordinateMode::x_space) {
    p.x = state;
    if (nf_) {
      p.coeffs = nf_->at_x(state);
      p.z = p.coeffs->z;
      p.y = p.z[0];
    } else {
      p.y = sys_->h(state);
    }
  } else {
    p.coeffs = nf_->at_z(state, x_guess);
    p.x = p.coeffs->x;
    p.z = state;
    p.y = state[0];
  }
  return p;
}

Eigen::VectorXd Plant::drift(const PlantPoint& p, double u) const {
  if (mode_ == CoordinateMode::normal_form) return nf_->drift(*p.coeffs, u);
  Eigen::VectorXd d = sys_->f(p.x);
  if (u != 0.0) d += sys_->g(p.x) * u;
  return d;
}

Eigen::VectorXd Plant::diffusion(const PlantPoint& p) const {
  if (mode_ == CoordinateMode::normal_form) return nf_->diffusion(*p.coeffs);
  return sys_->l(p.x);
}

Eigen::VectorXd Plant::jump_state(const PlantPoint& p, double dz_r) const {
  if (!nf_) throw UnsupportedSystem("jumps need a normal-form chart");
  Eigen::VectorXd z = p.z;
  z[nf_->r() - 1] += dz_r;
  if (mode_ == CoordinateMode::normal_form) return z;
  return nf_->chart().inverse(z, p.x);
}

std::optional<std::string> Plant::guard(const PlantPoint& p) const {
  if (!sys_) return std::nullopt;
  return sys_->check_guard(p.x);
}

}  // namespace pathwise
