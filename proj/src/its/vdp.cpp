#include "platoon/its/vdp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace platoon::its {

namespace {

template <typename Int>
Int saturate_round(double value) {
  constexpr auto lo = static_cast<double>(std::numeric_limits<Int>::min());
  constexpr auto hi = static_cast<double>(std::numeric_limits<Int>::max());
  if (std::isnan(value)) return Int{0};
  const double r = std::round(value);
  if (r <= lo) return std::numeric_limits<Int>::min();
  if (r >= hi) return std::numeric_limits<Int>::max();
  return static_cast<Int>(r);
}

}  // namespace

std::uint16_t heading_to_deci_degrees(double heading_rad) {
  double deg = std::fmod(90.0 - heading_rad * 180.0 / std::numbers::pi, 360.0);
  if (deg < 0.0) deg += 360.0;
  auto value = static_cast<long>(std::round(deg * 10.0));
  if (value >= kHeadingLimit) value -= kHeadingLimit;
  return static_cast<std::uint16_t>(value);
}

double deci_degrees_to_heading(std::uint16_t heading_value) {
  const double compass_deg = heading_value / 10.0;
  return dynamics::normalize_angle((90.0 - compass_deg) * std::numbers::pi / 180.0);
}

Cam vdp_sample(const dynamics::OdometrySample& odom, std::uint32_t station_id,
               cosim::SimTime now) {
  Cam cam;
  cam.station_id = station_id;
  cam.generation_delta_time = static_cast<std::uint16_t>(now.millis() % 65536ULL);
  cam.x_cm = saturate_round<std::int32_t>(odom.x * 100.0);
  cam.y_cm = saturate_round<std::int32_t>(odom.y * 100.0);
  cam.heading_value = heading_to_deci_degrees(odom.heading);
  cam.speed_value = saturate_round<std::uint16_t>(odom.speed * 100.0);
  return cam;
}

}  // namespace platoon::its
