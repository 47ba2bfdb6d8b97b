#pragma once

#include "platoon/cosim/sim_time.hpp"
#include "platoon/its/cam.hpp"

#include <cstddef>
#include <deque>
#include <optional>

namespace platoon::control {

struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  cosim::SimTime time;
};

/// Bounded FIFO of predecessor positions taken from received CAMs.
/// Waypoint times are strictly increasing.
class LeaderTrail {
 public:
  explicit LeaderTrail(std::size_t capacity = 256);

  /// Appends (x_cm/100, y_cm/100, now). A CAM received at or before the
  /// newest waypoint time is ignored. Returns whether it was appended.
  bool on_cam_received(const its::Cam& cam, cosim::SimTime now);

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Waypoint& newest() const { return points_.back(); }
  const Waypoint& oldest() const { return points_.front(); }
  const std::deque<Waypoint>& points() const { return points_; }

  /// Receive time of the latest accepted CAM; empty before the first one.
  std::optional<cosim::SimTime> last_cam_time() const { return last_cam_time_; }

 private:
  std::size_t capacity_;
  std::deque<Waypoint> points_;
  std::optional<cosim::SimTime> last_cam_time_;
};

}  // namespace platoon::control
