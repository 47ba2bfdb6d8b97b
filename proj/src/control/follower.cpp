#include "platoon/control/follower.hpp"

#include <any>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace platoon::control {

void FollowerConfig::validate() const {
  if (!(gap_setpoint > 0.0)) throw std::invalid_argument("gap_setpoint_m: must be positive");
  if (lost_track_timeout.count() <= 0) {
    throw std::invalid_argument("lost_track_timeout_s: must be positive");
  }
  if (!(lookahead >= 0.0)) throw std::invalid_argument("lookahead_m: must be non-negative");
  if (trail_capacity == 0) throw std::invalid_argument("trail_capacity: must be positive");
}

PidGains default_longitudinal_gains() {
  return PidGains{.kp = 0.8, .ki = 0.15, .kd = 0.8, .out_min = -6.0, .out_max = 3.0,
                  .integral_max = 30.0};
}

PidGains default_lateral_gains() {
  return PidGains{.kp = 1.2, .ki = 0.0, .kd = 0.3, .out_min = -0.6, .out_max = 0.6,
                  .integral_max = 5.0};
}

ControlResult longitudinal_control(const dynamics::VehicleState& own, const LeaderTrail& trail,
                                   const FollowerConfig& cfg, const PidGains& gains,
                                   const PidState& state, double dt) {
  if (trail.empty()) return {0.0, state};
  const auto& leader = trail.newest();
  const double gap = std::hypot(leader.x - own.x, leader.y - own.y);
  const auto r = pid_step(gains, state, gap - cfg.gap_setpoint, dt);
  return {r.output, r.state};
}

const Waypoint& steering_target(const dynamics::VehicleState& own, const LeaderTrail& trail,
                                double lookahead) {
  const auto& pts = trail.points();
  // Start from the waypoint nearest to the follower so that trail points it
  // has already passed are never selected again.
  std::size_t start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = std::hypot(pts[i].x - own.x, pts[i].y - own.y);
    if (d <= best) {
      best = d;
      start = i;
    }
  }
  const double cx = std::cos(own.heading);
  const double cy = std::sin(own.heading);
  for (std::size_t i = start; i < pts.size(); ++i) {
    const double ahead = (pts[i].x - own.x) * cx + (pts[i].y - own.y) * cy;
    if (ahead >= lookahead) return pts[i];
  }
  return trail.newest();
}

double bearing_error(const dynamics::VehicleState& own, const Waypoint& target) {
  const double bearing = std::atan2(target.y - own.y, target.x - own.x);
  return dynamics::normalize_angle(bearing - own.heading);
}

ControlResult lateral_control(const dynamics::VehicleState& own, const LeaderTrail& trail,
                              const FollowerConfig& cfg, const PidGains& gains,
                              const PidState& state, double dt) {
  if (trail.empty()) return {0.0, state};
  const auto& target = steering_target(own, trail, cfg.lookahead);
  const auto r = pid_step(gains, state, bearing_error(own, target), dt);
  return {r.output, r.state};
}

bool lost_track_check(const LeaderTrail& trail, cosim::SimTime now, const FollowerConfig& cfg) {
  const auto last = trail.last_cam_time();
  if (!last) return false;
  if (trail.empty()) return true;
  return now > *last && (now - *last) > cfg.lost_track_timeout;
}

FollowerController::FollowerController(std::uint32_t predecessor_id, FollowerConfig cfg,
                                       PidGains longitudinal, PidGains lateral,
                                       dynamics::VehicleParams params)
    : predecessor_(predecessor_id),
      cfg_(cfg),
      lon_gains_(longitudinal),
      lat_gains_(lateral),
      params_(params),
      trail_(cfg.trail_capacity) {
  cfg_.validate();
  lon_gains_.validate();
  lat_gains_.validate();
  params_.validate();
}

void FollowerController::on_cam(const its::Cam& cam, cosim::SimTime now) {
  if (cam.station_id != predecessor_) return;
  if (trail_.on_cam_received(cam, now) && cam.speed_value > 0) predecessor_moved_ = true;
}

cosim::Subscription FollowerController::attach(cosim::MessageBus& bus, const std::string& topic) {
  return bus.subscribe(topic, [this](const cosim::BusMessage& msg) {
    on_cam(std::any_cast<const its::Cam&>(msg.payload), msg.publish_time);
  });
}

void FollowerController::reset_loops() {
  lon_state_ = PidState{};
  lat_state_ = PidState{};
}

FollowerOutput FollowerController::update(const dynamics::VehicleState& own, cosim::SimTime now,
                                          double dt) {
  if (mode_ == TrackMode::Idle && predecessor_moved_) mode_ = TrackMode::Following;

  if (mode_ == TrackMode::Following && lost_track_check(trail_, now, cfg_)) {
    mode_ = TrackMode::Stopping;
    ++lost_events_;
    reset_loops();
  }
  if (mode_ == TrackMode::Stopping && own.speed <= 0.0) {
    mode_ = TrackMode::Halted;
    stopped_at_ = now;
  }
  if (mode_ == TrackMode::Halted) {
    const auto last = trail_.last_cam_time();
    if (last && *last > stopped_at_) {
      mode_ = TrackMode::Following;
      reset_loops();
    }
  }

  switch (mode_) {
    case TrackMode::Idle:
      return {{0.0, 0.0}, false};
    case TrackMode::Stopping:
    case TrackMode::Halted:
      return {{params_.min_accel, 0.0}, true};
    case TrackMode::Following:
      break;
  }

  const auto lon = longitudinal_control(own, trail_, cfg_, lon_gains_, lon_state_, dt);
  const auto lat = lateral_control(own, trail_, cfg_, lat_gains_, lat_state_, dt);
  lon_state_ = lon.state;
  lat_state_ = lat.state;
  return {{lon.command, lat.command}, false};
}

}  // namespace platoon::control
