#pragma once

#include "platoon/cosim/sim_time.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace platoon::dynamics {

struct VehicleParams {
  double wheelbase = 2.7;   // m
  double max_speed = 30.0;  // m/s
  double max_accel = 3.0;   // m/s^2
  double min_accel = -6.0;  // m/s^2
  double max_steer = 0.6;   // rad

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // rad, CCW from +x, in (-pi, pi]
  double speed = 0.0;    // m/s, never negative
};

struct Actuation {
  double accel = 0.0;
  double steer = 0.0;
};

struct OdometrySample {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  double speed = 0.0;
  cosim::SimTime stamp;
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double rad);

/// Clamps accel to [min_accel, max_accel] and steer to +-max_steer.
Actuation clamp_actuation(const Actuation& u, const VehicleParams& params);

/// One explicit-Euler step of the kinematic bicycle model.
///
///   x' = v cos(theta), y' = v sin(theta), theta' = v tan(delta) / L, v' = a
///
/// Inputs are clamped before integration; the resulting speed is clamped to
/// [0, max_speed] and the heading is normalized.
VehicleState step(const VehicleState& state, const Actuation& u, const VehicleParams& params,
                  cosim::Duration dt);

/// Noise-free odometry stamped at `now`.
OdometrySample sensor_read(const VehicleState& state, cosim::SimTime now);

struct SensorNoise {
  double position_sigma = 0.0;  // m
  double speed_sigma = 0.0;     // m/s

  bool enabled() const { return position_sigma > 0.0 || speed_sigma > 0.0; }
};

/// Odometry source with optional additive Gaussian noise on position and speed.
class OdometrySensor {
 public:
  OdometrySensor(SensorNoise noise, std::uint64_t seed) : noise_(noise), rng_(seed) {}

  OdometrySample read(const VehicleState& state, cosim::SimTime now);

 private:
  SensorNoise noise_;
  std::mt19937_64 rng_;
};

/// "/carN/odom"
std::string odom_topic(std::uint32_t vehicle_id);

}  // namespace platoon::dynamics
