#pragma once

namespace platoon::control {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double out_min = -1.0;
  double out_max = 1.0;
  double integral_max = 5.0;

  /// Throws std::invalid_argument if out_min >= out_max or integral_max <= 0.
  void validate() const;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool initialized = false;
};

struct PidResult {
  double output;
  PidState state;
};

/// Discrete PID with a clamped integrator and clamped output.
///
///   I   = clamp(I + e*dt, -integral_max, integral_max)
///   D   = (e - e_prev) / dt, or 0 on the first call
///   out = clamp(kp*e + ki*I + kd*D, out_min, out_max)
PidResult pid_step(const PidGains& gains, const PidState& state, double error, double dt);

}  // namespace platoon::control
