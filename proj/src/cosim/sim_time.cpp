#include "platoon/cosim/sim_time.hpp"

#include <cmath>
#include <limits>

namespace platoon::cosim {

Duration from_seconds(double seconds) {
  if (!std::isfinite(seconds)) {
    throw std::invalid_argument("duration must be finite");
  }
  const double ns = std::round(seconds * 1e9);
  if (std::abs(ns) > static_cast<double>(std::numeric_limits<std::int64_t>::max())) {
    throw std::out_of_range("duration out of range");
  }
  return Duration{static_cast<std::int64_t>(ns)};
}

Duration period_from_hz(double hz) {
  if (!(hz > 0.0) || !std::isfinite(hz)) {
    throw std::invalid_argument("frequency must be positive and finite");
  }
  return from_seconds(1.0 / hz);
}

}  // namespace platoon::cosim
