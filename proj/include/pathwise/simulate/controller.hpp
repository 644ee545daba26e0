#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "pathwise/simulate/plant.hpp"

namespace pathwise {

struct StepContext {
  std::int64_t step = 0;
  double t = 0.0;
  const Plant* plant = nullptr;
  const PlantPoint* point = nullptr;
  /// Realised white noise dW / dt of the step about to be taken. Only set
  /// for controllers that ask for it.
  std::optional<double> xi;
};

/// Window (t_{k-1}, t_k]: `start` is the post-jump state at t_{k-1} and
/// `end` the pre-jump state at t_k.
struct JumpContext {
  std::int64_t k = 0;
  std::int64_t step = 0;
  double t = 0.0;
  double epsilon = 0.0;
  const Plant* plant = nullptr;
  const PlantPoint* start = nullptr;
  double u_start = 0.0;
  const PlantPoint* end = nullptr;
};

struct JumpDecision {
  double u_star = 0.0;
  double dw_hat = 0.0;
  bool skipped = false;
};

class Controller {
 public:
  virtual ~Controller() = default;

  /// Idealistic controllers consume the realised noise.
  virtual bool needs_noise() const { return false; }
  /// Whether the jump hook should be called at t_k = k epsilon.
  virtual bool wants_jumps() const { return false; }

  virtual double control(const StepContext& ctx) = 0;
  virtual std::optional<JumpDecision> jump(const JumpContext&) { return std::nullopt; }
};

/// One fresh controller per run: controllers carry per-run state.
using ControllerFactory = std::function<std::unique_ptr<Controller>()>;

}  // namespace pathwise
