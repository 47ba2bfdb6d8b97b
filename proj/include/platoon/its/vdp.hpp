#pragma once

#include "platoon/cosim/sim_time.hpp"
#include "platoon/dynamics/vehicle.hpp"
#include "platoon/its/cam.hpp"

#include <cstdint>

namespace platoon::its {

/// Quantizes an odometry sample into CAM fields.
///
/// Position and speed are rounded to centimetres and saturate at their field
/// bounds. Heading is converted from math convention (CCW from +x, radians)
/// to compass deci-degrees (CW from +y). generation_delta_time is the
/// timestamp in whole milliseconds modulo 65536.
Cam vdp_sample(const dynamics::OdometrySample& odom, std::uint32_t station_id,
               cosim::SimTime now);

/// Compass deci-degrees for a math-convention heading in radians.
std::uint16_t heading_to_deci_degrees(double heading_rad);

/// Inverse of heading_to_deci_degrees, result in (-pi, pi].
double deci_degrees_to_heading(std::uint16_t heading_value);

}  // namespace platoon::its
