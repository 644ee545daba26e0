#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "pathwise/models/normal_form.hpp"
#include "pathwise/models/system.hpp"

namespace pathwise {

enum class CoordinateMode { x_space, normal_form };

const char* to_string(CoordinateMode mode);
/// "x_space" (or "x"), "normal_form" (or "z").
CoordinateMode parse_coordinate_mode(const std::string& s);

/// Everything known about the plant at one state.
struct PlantPoint {
  Eigen::VectorXd state;  // in the plant's own coordinates
  Eigen::VectorXd x;      // original coordinates
  Eigen::VectorXd z;      // normal-form coordinates (empty without a chart)
  std::optional<NormalFormCoefficients> coeffs;
  double y = 0.0;
};

/// The object being integrated: either the original SDE in x, or its normal
/// form in z (with x recovered through the inverse chart).
class Plant {
 public:
  Plant() = default;
  static Plant x_space(SystemDef sys, std::optional<NormalFormDef> nf = std::nullopt);
  static Plant normal_form(NormalFormDef nf, std::optional<SystemDef> sys = std::nullopt);

  CoordinateMode mode() const { return mode_; }
  int n() const { return n_; }
  bool has_chart() const { return nf_.has_value(); }
  const NormalFormDef* nf() const { return nf_ ? &*nf_ : nullptr; }
  const SystemDef* system() const { return sys_ ? &*sys_ : nullptr; }
  /// Relative degree, 0 without a normal form.
  int r() const { return nf_ ? nf_->r() : 0; }

  /// Plant coordinates of an original-coordinate point.
  Eigen::VectorXd initial_state(const Eigen::VectorXd& x0) const;

  /// `x_guess` warm-starts the inverse chart in normal-form mode.
  PlantPoint evaluate(const Eigen::VectorXd& state, const Eigen::VectorXd& x_guess) const;

  Eigen::VectorXd drift(const PlantPoint& p, double u) const;
  Eigen::VectorXd diffusion(const PlantPoint& p) const;

  /// Plant state after adding `dz_r` to z_r. In x-space mode the jump is done
  /// in z and mapped back through the inverse chart.
  Eigen::VectorXd jump_state(const PlantPoint& p, double dz_r) const;

  std::optional<std::string> guard(const PlantPoint& p) const;

 private:
  CoordinateMode mode_ = CoordinateMode::x_space;
  int n_ = 0;
  std::optional<SystemDef> sys_;
  std::optional<NormalFormDef> nf_;
};

}  // namespace pathwise
