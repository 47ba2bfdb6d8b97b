#include "platoon/dynamics/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace platoon::dynamics {

void VehicleParams::validate() const {
  auto require = [](bool ok, const char* field, const char* reason) {
    if (!ok) throw std::invalid_argument(std::string(field) + ": " + reason);
  };
  require(wheelbase > 0.0, "wheelbase", "must be positive");
  require(max_speed > 0.0, "max_speed", "must be positive");
  require(max_accel > 0.0, "max_accel", "must be positive");
  require(min_accel < 0.0, "min_accel", "must be negative");
  require(max_steer > 0.0 && max_steer < std::numbers::pi / 2, "max_steer",
          "must be in (0, pi/2)");
}

double normalize_angle(double rad) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(rad, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  } else if (a > std::numbers::pi) {
    a -= two_pi;
  }
  return a;
}

Actuation clamp_actuation(const Actuation& u, const VehicleParams& params) {
  return Actuation{std::clamp(u.accel, params.min_accel, params.max_accel),
                   std::clamp(u.steer, -params.max_steer, params.max_steer)};
}

VehicleState step(const VehicleState& state, const Actuation& u, const VehicleParams& params,
                  cosim::Duration dt) {
  if (dt.count() <= 0) {
    throw std::invalid_argument("step: dt must be positive");
  }
  const Actuation c = clamp_actuation(u, params);
  const double h = cosim::to_seconds(dt);
  const double v = state.speed;

  VehicleState next;
  next.x = state.x + v * std::cos(state.heading) * h;
  next.y = state.y + v * std::sin(state.heading) * h;
  next.heading = normalize_angle(state.heading + v / params.wheelbase * std::tan(c.steer) * h);
  next.speed = std::clamp(v + c.accel * h, 0.0, params.max_speed);
  return next;
}

OdometrySample sensor_read(const VehicleState& state, cosim::SimTime now) {
  return OdometrySample{state.x, state.y, state.heading, state.speed, now};
}

OdometrySample OdometrySensor::read(const VehicleState& state, cosim::SimTime now) {
  OdometrySample s = sensor_read(state, now);
  if (!noise_.enabled()) return s;
  std::normal_distribution<double> unit(0.0, 1.0);
  s.x += noise_.position_sigma * unit(rng_);
  s.y += noise_.position_sigma * unit(rng_);
  s.speed = std::max(0.0, s.speed + noise_.speed_sigma * unit(rng_));
  return s;
}

std::string odom_topic(std::uint32_t vehicle_id) {
  return "/car" + std::to_string(vehicle_id) + "/odom";
}

}  // namespace platoon::dynamics
