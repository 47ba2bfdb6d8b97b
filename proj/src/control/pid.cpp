#include "platoon/control/pid.hpp"

#include <algorithm>
#include <stdexcept>

namespace platoon::control {

void PidGains::validate() const {
  if (!(out_min < out_max)) throw std::invalid_argument("out_min must be < out_max");
  if (!(integral_max > 0.0)) throw std::invalid_argument("integral_max must be positive");
}

PidResult pid_step(const PidGains& gains, const PidState& state, double error, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step: dt must be positive");
  PidState next;
  next.integral = std::clamp(state.integral + error * dt, -gains.integral_max, gains.integral_max);
  const double derivative = state.initialized ? (error - state.prev_error) / dt : 0.0;
  next.prev_error = error;
  next.initialized = true;
  const double raw = gains.kp * error + gains.ki * next.integral + gains.kd * derivative;
  return {std::clamp(raw, gains.out_min, gains.out_max), next};
}

}  // namespace platoon::control
