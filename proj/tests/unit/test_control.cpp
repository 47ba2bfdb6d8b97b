#include "platoon/control/follower.hpp"
#include "platoon/control/pid.hpp"
#include "platoon/control/trail.hpp"
#include "platoon/dynamics/vehicle.hpp"
#include "platoon/its/vdp.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace platoon;
using namespace platoon::control;
using namespace std::chrono_literals;

namespace {

cosim::SimTime ms(std::uint64_t v) { return cosim::SimTime{v * 1'000'000ULL}; }

its::Cam cam_at(double x, double y, std::uint32_t station = 1, std::uint16_t speed_cm = 500) {
  its::Cam c;
  c.station_id = station;
  c.speed_value = speed_cm;
  c.x_cm = static_cast<std::int32_t>(std::lround(x * 100));
  c.y_cm = static_cast<std::int32_t>(std::lround(y * 100));
  return c;
}

PidGains only(double kp, double ki, double kd) {
  return PidGains{kp, ki, kd, -100.0, 100.0, 100.0};
}

std::vector<double> run_pid(const PidGains& g, const std::vector<double>& errors, double dt) {
  PidState s;
  std::vector<double> out;
  for (double e : errors) {
    const auto r = pid_step(g, s, e, dt);
    out.push_back(r.output);
    s = r.state;
  }
  return out;
}

// Leader follows a scripted actuation; the follower receives a quantized CAM of
// the leader one tick after each generation instant.
struct ClosedLoop {
  dynamics::VehicleParams params;
  dynamics::VehicleState leader;
  dynamics::VehicleState follower;
  FollowerController ctrl;
  cosim::Duration cam_period;
  std::vector<double> times, gaps, steers, speeds;
  std::vector<bool> lost;

  ClosedLoop(dynamics::VehicleState l, dynamics::VehicleState f, FollowerConfig cfg,
             cosim::Duration period)
      : leader(l), follower(f),
        ctrl(1, cfg, default_longitudinal_gains(), default_lateral_gains(), params),
        cam_period(period) {}

  template <typename LeaderCmd>
  void run(double seconds, LeaderCmd leader_cmd) {
    const auto tick = 20ms;
    std::optional<its::Cam> in_flight;
    const auto n = static_cast<std::uint64_t>(seconds / 0.02);
    for (std::uint64_t k = 0; k < n; ++k) {
      const cosim::SimTime now{k * 20'000'000ULL};
      if (in_flight) {
        ctrl.on_cam(*in_flight, now);
        in_flight.reset();
      }
      if (now.nanos % static_cast<std::uint64_t>(cam_period.count()) == 0) {
        in_flight = its::vdp_sample(dynamics::sensor_read(leader, now), 1, now);
      }
      const auto out = ctrl.update(follower, now, 0.02);
      times.push_back(now.seconds());
      gaps.push_back(std::hypot(leader.x - follower.x, leader.y - follower.y));
      steers.push_back(dynamics::clamp_actuation(out.actuation, params).steer);
      speeds.push_back(follower.speed);
      lost.push_back(out.lost);
      leader = dynamics::step(leader, leader_cmd(leader), params, tick);
      follower = dynamics::step(follower, out.actuation, params, tick);
    }
  }
};

}  // namespace

TEST_CASE("pid_step worked examples") {
  CHECK(pid_step(only(1, 0, 0), {}, 2.0, 0.1).output == 2.0);
  CHECK(run_pid(only(0, 1, 0), {1.0, 1.0}, 0.1) == std::vector<double>{0.1, 0.2});
  const auto d = run_pid(only(0, 0, 1), {0.0, 1.0}, 0.5);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == 2.0);
  CHECK_THROWS(pid_step(only(1, 0, 0), {}, 1.0, 0.0));
}

TEST_CASE("pid_step 10-step sequences") {
  // Expected values computed with exact rational arithmetic.
  const std::vector<double> errors{0.5, -1, 2, 0.25, -0.75, 1.25, 3, -2, 0.1, 0};
  const auto approx = [](const std::vector<double>& got, const std::vector<double>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  };
  approx(run_pid(PidGains{1.5, 0, 0, -10, 10, 5}, errors, 0.1),
         {0.75, -1.5, 3.0, 0.375, -1.125, 1.875, 4.5, -3.0, 0.15, 0.0});
  approx(run_pid(PidGains{0, 0.5, 0, -10, 10, 5}, errors, 0.1),
         {0.025, -0.025, 0.075, 0.0875, 0.05, 0.1125, 0.2625, 0.1625, 0.1675, 0.1675});
  approx(run_pid(PidGains{0, 0, 0.2, -10, 10, 5}, errors, 0.05),
         {0.0, -6.0, 10.0, -7.0, -4.0, 8.0, 7.0, -10.0, 8.4, -0.4});
  approx(run_pid(PidGains{2, 1, 0.1, -1.5, 1.5, 0.2}, errors, 0.1),
         {1.05, -1.5, 1.5, -1.075, -1.5, 1.5, 1.5, -1.5, 1.5, -0.09});
}

TEST_CASE("pid properties over random error sequences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> err(-50.0, 50.0);
  std::uniform_real_distribution<double> gain(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PidGains g{gain(rng), gain(rng), gain(rng), -2.0, 1.5, 0.7};
    PidState s;
    for (int i = 0; i < 100; ++i) {
      const auto r = pid_step(g, s, err(rng), 0.02);
      REQUIRE(r.output >= g.out_min);
      REQUIRE(r.output <= g.out_max);
      REQUIRE(std::abs(r.state.integral) <= g.integral_max);
      s = r.state;
    }
  }

  SUBCASE("zero error from fresh state gives zero output") {
    const auto out = run_pid(PidGains{1, 1, 1, -1, 1, 1}, std::vector<double>(50, 0.0), 0.02);
    for (double o : out) CHECK(o == 0.0);
  }
  SUBCASE("output is linear in kp when ki = kd = 0") {
    std::vector<double> errors;
    for (int i = 0; i < 100; ++i) errors.push_back(err(rng) / 100.0);
    const auto a = run_pid(only(0.7, 0, 0), errors, 0.02);
    const auto b = run_pid(only(1.4, 0, 0), errors, 0.02);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == 2.0 * a[i]);
  }
}

TEST_CASE("leader trail") {
  LeaderTrail t(256);
  CHECK(t.empty());
  CHECK_FALSE(t.last_cam_time().has_value());
  CHECK(t.on_cam_received(cam_at(1.0, 2.0), ms(20)));
  CHECK(t.size() == 1);
  CHECK(t.newest().x == 1.0);
  CHECK(t.newest().y == 2.0);
  CHECK(*t.last_cam_time() == ms(20));

  CHECK_FALSE(t.on_cam_received(cam_at(5.0, 5.0), ms(20)));  // duplicate same tick
  CHECK(t.size() == 1);

  for (std::uint64_t i = 1; i <= 256; ++i) t.on_cam_received(cam_at(1.0 * i, 0), ms(20 + i));
  CHECK(t.size() == 256);
  CHECK(t.oldest().x == 1.0);  // first CAM evicted
  for (std::size_t i = 1; i < t.points().size(); ++i) {
    CHECK(t.points()[i].time > t.points()[i - 1].time);
  }
  CHECK_THROWS(LeaderTrail(0));
}

TEST_CASE("longitudinal control sign and idle") {
  FollowerConfig cfg;
  LeaderTrail trail;
  const dynamics::VehicleState own{};
  CHECK(longitudinal_control(own, trail, cfg, only(1, 0, 0), {}, 0.02).command == 0.0);

  trail.on_cam_received(cam_at(8.0, 0.0), ms(0));
  CHECK(longitudinal_control(own, trail, cfg, default_longitudinal_gains(), {}, 0.02).command == 0.0);

  trail.on_cam_received(cam_at(10.0, 0.0), ms(20));
  const auto r = longitudinal_control(own, trail, cfg, only(1, 0, 0), {}, 0.02);
  CHECK(r.command == doctest::Approx(2.0));
}

TEST_CASE("lateral control bearing error") {
  FollowerConfig cfg;
  LeaderTrail trail;
  CHECK(lateral_control({}, trail, cfg, only(1, 0, 0), {}, 0.02).command == 0.0);

  trail.on_cam_received(cam_at(10.0, 0.0), ms(0));
  CHECK(lateral_control({}, trail, cfg, only(1, 0, 0), {}, 0.02).command == 0.0);

  LeaderTrail off;
  off.on_cam_received(cam_at(10.0 * std::cos(0.1), 10.0 * std::sin(0.1)), ms(0));
  const auto r = lateral_control({}, off, cfg, only(1, 0, 0), {}, 0.02);
  CHECK(r.command == doctest::Approx(0.1).epsilon(1e-3));

  SUBCASE("bearing error wraps into (-pi, pi]") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
      const dynamics::VehicleState own{u(rng), u(rng), u(rng), 1.0};
      const double e = bearing_error(own, Waypoint{u(rng), u(rng), {}});
      REQUIRE(e > -std::numbers::pi);
      REQUIRE(e <= std::numbers::pi);
    }
  }
  SUBCASE("target is the oldest waypoint past the lookahead") {
    LeaderTrail line;
    for (std::uint64_t i = 0; i <= 10; ++i) line.on_cam_received(cam_at(1.0 * i, 0.0), ms(i + 1));
    const auto& tgt = steering_target({2.5, 0, 0, 1}, line, 5.0);
    CHECK(tgt.x == 8.0);
    CHECK(steering_target({9.5, 0, 0, 1}, line, 5.0).x == 10.0);  // none qualifies: newest
  }
  SUBCASE("waypoints behind the nearest one are never targets") {
    LeaderTrail u_turn;
    std::uint64_t t = 1;
    // Outbound along +x, then back along y = 20 towards -x.
    for (int x = -100; x <= 0; x += 5) u_turn.on_cam_received(cam_at(x, 0), ms(t++));
    for (int x = 0; x >= -30; x -= 5) u_turn.on_cam_received(cam_at(x, 20), ms(t++));
    const dynamics::VehicleState own{-5.0, 20.0, std::numbers::pi, 5.0};
    const auto& tgt = steering_target(own, u_turn, 5.0);
    CHECK(tgt.y == 20.0);
    CHECK(tgt.x == -10.0);
  }
}

TEST_CASE("lost_track_check") {
  FollowerConfig cfg;
  cfg.lost_track_timeout = 500ms;
  LeaderTrail trail;
  CHECK_FALSE(lost_track_check(trail, ms(10'000), cfg));  // never started
  trail.on_cam_received(cam_at(0, 0), ms(1000));
  CHECK_FALSE(lost_track_check(trail, ms(1300), cfg));
  CHECK_FALSE(lost_track_check(trail, ms(1500), cfg));
  CHECK(lost_track_check(trail, ms(1600), cfg));
  // Monotone until the next CAM.
  for (std::uint64_t t = 1600; t < 3000; t += 20) CHECK(lost_track_check(trail, ms(t), cfg));
  trail.on_cam_received(cam_at(0, 0), ms(3000));
  CHECK_FALSE(lost_track_check(trail, ms(3000), cfg));
}

TEST_CASE("follower stays parked until the predecessor moves") {
  FollowerConfig cfg;
  cfg.lost_track_timeout = 500ms;
  FollowerController ctrl(1, cfg, default_longitudinal_gains(), default_lateral_gains(), {});
  ctrl.on_cam(cam_at(20.0, 0.0, 1, 0), ms(0));
  const dynamics::VehicleState parked{};
  for (std::uint64_t t = 20; t <= 3000; t += 20) {
    const auto out = ctrl.update(parked, ms(t), 0.02);
    REQUIRE(out.actuation.accel == 0.0);
    REQUIRE(out.actuation.steer == 0.0);
    REQUIRE_FALSE(out.lost);
  }
  CHECK(ctrl.mode() == TrackMode::Idle);
  ctrl.on_cam(cam_at(20.0, 0.0, 1, 10), ms(3020));
  CHECK(ctrl.update(parked, ms(3040), 0.02).actuation.accel > 0.0);
  CHECK(ctrl.mode() == TrackMode::Following);
}

TEST_CASE("lost-track stop commands full braking and zero steer") {
  FollowerConfig cfg;
  cfg.lost_track_timeout = 500ms;
  dynamics::VehicleParams params;
  FollowerController ctrl(1, cfg, default_longitudinal_gains(), default_lateral_gains(), params);
  ctrl.on_cam(cam_at(30.0, 3.0), ms(0));
  ctrl.on_cam(cam_at(99.0, 0.0, 7), ms(10));  // another station: ignored
  CHECK(ctrl.trail().size() == 1);

  const dynamics::VehicleState moving{0, 0, 0, 10.0};
  const auto following = ctrl.update(moving, ms(300), 0.02);
  CHECK_FALSE(following.lost);
  CHECK(ctrl.mode() == TrackMode::Following);

  const auto stopping = ctrl.update(moving, ms(600), 0.02);
  CHECK(stopping.lost);
  CHECK(stopping.actuation.accel == params.min_accel);
  CHECK(stopping.actuation.steer == 0.0);
  CHECK(ctrl.lost_track_events() == 1);

  // A fresh CAM while still moving does not end the stop.
  ctrl.on_cam(cam_at(31.0, 3.0), ms(620));
  CHECK(ctrl.update(moving, ms(640), 0.02).lost);

  const dynamics::VehicleState stopped{0, 0, 0, 0.0};
  CHECK(ctrl.update(stopped, ms(660), 0.02).lost);
  CHECK(ctrl.mode() == TrackMode::Halted);
  // Only a CAM received after standstill resumes following.
  ctrl.on_cam(cam_at(32.0, 3.0), ms(700));
  CHECK_FALSE(ctrl.update(stopped, ms(700), 0.02).lost);
  CHECK(ctrl.mode() == TrackMode::Following);
  CHECK(ctrl.lost_track_events() == 1);
}

TEST_CASE("closed loop: gap converges behind a 5 m/s leader") {
  ClosedLoop loop({10.0, 0, 0, 5.0}, {0, 0, 0, 0}, FollowerConfig{}, 100ms);
  loop.run(60.0, [](const auto&) { return dynamics::Actuation{0.0, 0.0}; });
  for (std::size_t i = 0; i < loop.times.size(); ++i) {
    if (loop.times[i] >= 30.0) REQUIRE(std::abs(loop.gaps[i] - 8.0) <= 0.5);
  }
  CHECK(std::count(loop.lost.begin(), loop.lost.end(), true) == 0);
}

TEST_CASE("closed loop: follower steer settles at the arc's required angle") {
  const double arc_steer = 0.05;
  ClosedLoop loop({8.0, 0, 0, 5.0}, {0, 0, 0, 5.0}, FollowerConfig{}, 100ms);
  loop.run(90.0, [&](const auto&) { return dynamics::Actuation{0.0, arc_steer}; });
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < loop.times.size(); ++i) {
    if (loop.times[i] >= 60.0) {
      sum += loop.steers[i];
      ++n;
    }
  }
  CHECK(sum / static_cast<double>(n) == doctest::Approx(arc_steer).epsilon(0.1));
}

TEST_CASE("closed loop: 400 ms CAM period against a 350 ms timeout halts the follower") {
  FollowerConfig cfg;
  cfg.lost_track_timeout = 350ms;
  ClosedLoop loop({10.0, 0, 0, 5.0}, {0, 0, 0, 0}, cfg, 400ms);
  loop.run(20.0, [](const auto&) { return dynamics::Actuation{0.0, 0.0}; });
  // Lost-track fires every CAM cycle and the follower never gets going.
  CHECK(loop.ctrl.lost_track_events() >= 20);
  double max_speed = 0.0;
  for (double v : loop.speeds) max_speed = std::max(max_speed, v);
  CHECK(max_speed < 1.5);
  CHECK(loop.gaps.back() > 80.0);
}

TEST_CASE("lost-track braking reaches standstill within speed / |min_accel|") {
  FollowerConfig cfg;
  cfg.lost_track_timeout = 200ms;
  dynamics::VehicleParams params;
  FollowerController ctrl(1, cfg, default_longitudinal_gains(), default_lateral_gains(), params);
  ctrl.on_cam(cam_at(50.0, 0.0), ms(0));
  dynamics::VehicleState s{0, 0, 0, 12.0};
  std::uint64_t t = 220;
  REQUIRE(ctrl.update(s, ms(t), 0.02).lost);
  const double v0 = s.speed;
  int ticks = 0;
  while (s.speed > 0.0) {
    const auto out = ctrl.update(s, ms(t), 0.02);
    REQUIRE(out.lost);
    s = dynamics::step(s, out.actuation, params, 20ms);
    t += 20;
    ++ticks;
  }
  CHECK(ticks * 0.02 <= v0 / std::abs(params.min_accel) + 0.02);
}

TEST_CASE("config validation") {
  FollowerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gap_setpoint = 0.0;
  CHECK_THROWS(cfg.validate());
  CHECK_THROWS((PidGains{1, 0, 0, 1.0, -1.0, 1}.validate()));
  CHECK_THROWS((PidGains{1, 0, 0, -1.0, 1.0, 0}.validate()));
}
