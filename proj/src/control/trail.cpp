#include "platoon/control/trail.hpp"

#include <stdexcept>

namespace platoon::control {

LeaderTrail::LeaderTrail(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("trail capacity must be positive");
}

bool LeaderTrail::on_cam_received(const its::Cam& cam, cosim::SimTime now) {
  if (!points_.empty() && now <= points_.back().time) return false;
  if (points_.size() == capacity_) points_.pop_front();
  points_.push_back(Waypoint{cam.x_cm / 100.0, cam.y_cm / 100.0, now});
  last_cam_time_ = now;
  return true;
}

}  // namespace platoon::control
