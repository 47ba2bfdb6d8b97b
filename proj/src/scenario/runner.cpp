#include "platoon/scenario/runner.hpp"

#include "platoon/control/follower.hpp"
#include "platoon/cosim/kernel.hpp"
#include "platoon/dynamics/vehicle.hpp"
#include "platoon/its/ca_service.hpp"
#include "platoon/its/channel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

namespace platoon::scenario {

namespace {

struct Vehicle {
  VehicleSpec spec;
  dynamics::VehicleState state;
  dynamics::OdometrySensor sensor;
  std::optional<std::size_t> predecessor_index;
  std::unique_ptr<control::FollowerController> controller;
  cosim::Subscription cam_sub;
};

const ProfileSegment* segment_at(const std::vector<ProfileSegment>& profile, cosim::SimTime t) {
  if (profile.empty()) return nullptr;
  std::uint64_t end = 0;
  for (const auto& seg : profile) {
    end += static_cast<std::uint64_t>(seg.duration.count());
    if (t.nanos < end) return &seg;
  }
  return &profile.back();
}

dynamics::Actuation leader_command(const ScenarioConfig& cfg, const dynamics::VehicleState& s,
                                   cosim::SimTime t) {
  const auto* seg = segment_at(cfg.leader_profile, t);
  if (seg == nullptr) return {};
  return {cfg.leader_speed_gain * (seg->target_speed - s.speed), seg->steer};
}

std::uint64_t sensor_seed(std::uint64_t seed, std::uint32_t id) {
  return seed ^ (static_cast<std::uint64_t>(id) * 0x9E3779B97F4A7C15ULL);
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();

  cosim::Kernel kernel(cosim::TickConfig{cfg.tick});
  its::ChannelConfig channel = cfg.channel;
  channel.rng_seed = cfg.seed;
  its::ItsNetwork network(kernel, channel, cfg.cam_hz);

  std::vector<std::unique_ptr<Vehicle>> fleet;
  for (const auto& spec : cfg.vehicles) {
    fleet.push_back(std::make_unique<Vehicle>(Vehicle{
        spec, spec.initial, dynamics::OdometrySensor(cfg.sensor_noise, sensor_seed(cfg.seed, spec.id)),
        std::nullopt, nullptr, {}}));
    network.add_node(spec.id);
  }
  for (auto& v : fleet) {
    if (v->spec.role != Role::Follower) continue;
    const auto pred = *v->spec.predecessor;
    const auto it = std::find_if(fleet.begin(), fleet.end(),
                                 [pred](const auto& o) { return o->spec.id == pred; });
    v->predecessor_index = static_cast<std::size_t>(it - fleet.begin());
    v->controller = std::make_unique<control::FollowerController>(
        pred, cfg.follower, cfg.longitudinal, cfg.lateral, cfg.params);
    v->cam_sub = v->controller->attach(kernel.bus(), its::cam_rx_topic(v->spec.id));
  }
  Vehicle* leader = nullptr;
  for (auto& v : fleet) {
    if (v->spec.role == Role::Leader) leader = v.get();
  }

  const double dt = cosim::to_seconds(cfg.tick);
  const auto ticks = static_cast<std::uint64_t>(cfg.duration.count() / cfg.tick.count());

  RunResult result;
  result.records.reserve(ticks);
  std::vector<dynamics::Actuation> commands(fleet.size());

  for (std::uint64_t k = 0; k < ticks; ++k) {
    const cosim::SimTime now = kernel.horizon();

    for (auto& v : fleet) {
      kernel.bus().publish(cosim::BusMessage{dynamics::odom_topic(v->spec.id),
                                             v->sensor.read(v->state, now), now});
    }
    network.tick(now);
    kernel.run_until(now);

    MetricsRecord rec;
    rec.iteration = k;
    rec.time_s = now.seconds();
    rec.leader_speed = leader->state.speed;
    for (std::size_t i = 0; i < fleet.size(); ++i) {
      auto& v = *fleet[i];
      if (v.controller == nullptr) {
        commands[i] = leader_command(cfg, v.state, now);
        continue;
      }
      const auto out = v.controller->update(v.state, now, dt);
      commands[i] = out.actuation;
      const auto& pred = fleet[*v.predecessor_index]->state;
      rec.followers.push_back(FollowerSample{
          std::hypot(pred.x - v.state.x, pred.y - v.state.y),
          dynamics::clamp_actuation(out.actuation, cfg.params).steer, v.state.speed, out.lost});
    }
    result.records.push_back(std::move(rec));

    for (std::size_t i = 0; i < fleet.size(); ++i) {
      fleet[i]->state = dynamics::step(fleet[i]->state, commands[i], cfg.params, cfg.tick);
    }
    kernel.advance_tick();
  }

  result.summary = summarize(cfg, result.records);
  const auto& stats = network.channel_stats();
  result.summary.cams_sent = network.cams_sent();
  result.summary.cams_received = stats.delivered;
  result.summary.cams_dropped = stats.dropped;
  result.summary.cams_out_of_range = stats.out_of_range;
  result.summary.eligible_receivers = fleet.size() - 1;
  result.summary.ticks = kernel.ticks();
  result.summary.events_executed = kernel.executed();
  result.summary.sync_checks = kernel.safety_checks();
  return result;
}

RunSummary summarize(const ScenarioConfig& cfg, const std::vector<MetricsRecord>& records) {
  RunSummary s;
  s.cam_hz = cfg.cam_hz;
  s.seed = cfg.seed;
  for (const auto& v : cfg.vehicles) {
    if (v.role == Role::Follower) s.followers.push_back(FollowerSummary{v.id});
  }
  const double settle_s = cosim::to_seconds(cfg.settling);
  for (std::size_t f = 0; f < s.followers.size(); ++f) {
    auto& out = s.followers[f];
    double sq = 0.0;
    double steer_sum = 0.0;
    double steer_sq = 0.0;
    std::size_t n = 0;
    for (const auto& rec : records) {
      if (rec.time_s < settle_s || f >= rec.followers.size()) continue;
      const auto& smp = rec.followers[f];
      const double err = smp.gap - cfg.follower.gap_setpoint;
      sq += err * err;
      steer_sum += smp.steer;
      steer_sq += smp.steer * smp.steer;
      out.max_gap = n == 0 ? smp.gap : std::max(out.max_gap, smp.gap);
      out.min_gap = n == 0 ? smp.gap : std::min(out.min_gap, smp.gap);
      ++n;
    }
    if (n > 0) {
      const double dn = static_cast<double>(n);
      out.rms_gap_error = std::sqrt(sq / dn);
      const double mean = steer_sum / dn;
      out.steer_std = std::sqrt(std::max(0.0, steer_sq / dn - mean * mean));
    }
    std::uint64_t lost = 0;
    bool prev = false;
    for (const auto& rec : records) {
      const bool cur = f < rec.followers.size() && rec.followers[f].lost;
      if (cur && !prev) ++lost;
      prev = cur;
    }
    out.lost_track_events = lost;
  }
  return s;
}

std::vector<SweepRun> run_sweep(const ScenarioConfig& base, const std::vector<double>& cam_hz,
                                const std::vector<std::uint64_t>& seeds) {
  for (double hz : cam_hz) {
    ScenarioConfig probe = base;
    probe.cam_hz = hz;
    probe.validate();
  }
  std::vector<double> hz_sorted = cam_hz;
  std::stable_sort(hz_sorted.begin(), hz_sorted.end());
  std::vector<std::uint64_t> seeds_sorted = seeds;
  std::stable_sort(seeds_sorted.begin(), seeds_sorted.end());

  std::vector<SweepRun> runs;
  for (double hz : hz_sorted) {
    for (auto seed : seeds_sorted) {
      ScenarioConfig cfg = base;
      cfg.cam_hz = hz;
      cfg.seed = seed;
      runs.push_back(SweepRun{hz, seed, run_scenario(cfg)});
    }
  }
  return runs;
}

}  // namespace platoon::scenario
