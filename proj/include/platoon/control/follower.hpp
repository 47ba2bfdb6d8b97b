#pragma once

#include "platoon/control/pid.hpp"
#include "platoon/control/trail.hpp"
#include "platoon/cosim/bus.hpp"
#include "platoon/cosim/sim_time.hpp"
#include "platoon/dynamics/vehicle.hpp"

#include <cstdint>
#include <optional>

namespace platoon::control {

struct FollowerConfig {
  double gap_setpoint = 8.0;                                   // m
  cosim::Duration lost_track_timeout{std::chrono::seconds(1)};
  double lookahead = 5.0;                                      // m
  std::size_t trail_capacity = 256;

  void validate() const;
};

/// Longitudinal loop: accel clamp [-6, 3] m/s^2. Lateral loop: steer clamp +-0.6 rad.
PidGains default_longitudinal_gains();
PidGains default_lateral_gains();

struct ControlResult {
  double command;
  PidState state;
};

/// Gap error = distance to the newest waypoint minus the setpoint; positive
/// error (too far) gives positive acceleration. Empty trail commands 0.
ControlResult longitudinal_control(const dynamics::VehicleState& own, const LeaderTrail& trail,
                                   const FollowerConfig& cfg, const PidGains& gains,
                                   const PidState& state, double dt);

/// Steering target: scanning forward from the waypoint nearest to the
/// follower, the oldest one at least `lookahead` metres ahead along the own
/// heading; the newest waypoint if none qualifies.
const Waypoint& steering_target(const dynamics::VehicleState& own, const LeaderTrail& trail,
                                double lookahead);

/// Bearing to the steering target minus own heading, wrapped to (-pi, pi].
double bearing_error(const dynamics::VehicleState& own, const Waypoint& target);

/// PID on bearing_error. Empty trail commands 0.
ControlResult lateral_control(const dynamics::VehicleState& own, const LeaderTrail& trail,
                              const FollowerConfig& cfg, const PidGains& gains,
                              const PidState& state, double dt);

/// True once a CAM has been received and the newest one is older than the
/// timeout. Stays true until a new CAM arrives.
bool lost_track_check(const LeaderTrail& trail, cosim::SimTime now, const FollowerConfig& cfg);

enum class TrackMode {
  Idle,       // predecessor not yet seen moving
  Following,
  Stopping,   // lost track, braking to standstill
  Halted,     // stopped, waiting for a CAM received after standstill
};

struct FollowerOutput {
  dynamics::Actuation actuation;
  bool lost = false;
};

/// CAM-only platooning controller for one follower.
///
/// The follower stays parked until a CAM reports the predecessor moving.
/// When lost_track_check fires the follower commits to a full stop: it brakes
/// at min_accel with zero steer until standstill, then stays halted until a
/// CAM received after it stopped, at which point both PID loops restart from
/// a fresh state.
class FollowerController {
 public:
  FollowerController(std::uint32_t predecessor_id, FollowerConfig cfg, PidGains longitudinal,
                     PidGains lateral, dynamics::VehicleParams params);

  /// Feeds a received CAM; CAMs from other stations are ignored.
  void on_cam(const its::Cam& cam, cosim::SimTime now);

  /// Subscribes on_cam to the given topic; the controller must outlive the bus delivery.
  [[nodiscard]] cosim::Subscription attach(cosim::MessageBus& bus, const std::string& topic);

  FollowerOutput update(const dynamics::VehicleState& own, cosim::SimTime now, double dt);

  TrackMode mode() const { return mode_; }
  std::uint64_t lost_track_events() const { return lost_events_; }
  const LeaderTrail& trail() const { return trail_; }
  std::uint32_t predecessor() const { return predecessor_; }

 private:
  void reset_loops();

  std::uint32_t predecessor_;
  FollowerConfig cfg_;
  PidGains lon_gains_;
  PidGains lat_gains_;
  dynamics::VehicleParams params_;
  LeaderTrail trail_;
  PidState lon_state_;
  PidState lat_state_;
  TrackMode mode_ = TrackMode::Idle;
  bool predecessor_moved_ = false;
  cosim::SimTime stopped_at_;
  std::uint64_t lost_events_ = 0;
};

}  // namespace platoon::control
