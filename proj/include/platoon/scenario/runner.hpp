#pragma once

#include "platoon/scenario/config.hpp"

#include <cstdint>
#include <vector>

namespace platoon::scenario {

struct FollowerSample {
  double gap = 0.0;    // m, true distance to the predecessor
  double steer = 0.0;  // rad, commanded
  double speed = 0.0;  // m/s
  bool lost = false;
};

struct MetricsRecord {
  std::uint64_t iteration = 0;
  double time_s = 0.0;
  double leader_speed = 0.0;
  std::vector<FollowerSample> followers;  // in config order
};

struct FollowerSummary {
  std::uint32_t vehicle_id = 0;
  double rms_gap_error = 0.0;  // post-settling, vs gap setpoint
  double max_gap = 0.0;
  double min_gap = 0.0;
  double steer_std = 0.0;
  std::uint64_t lost_track_events = 0;
};

struct RunSummary {
  double cam_hz = 0.0;
  std::uint64_t seed = 0;
  std::vector<FollowerSummary> followers;
  std::uint64_t cams_sent = 0;
  std::uint64_t cams_received = 0;
  std::uint64_t cams_dropped = 0;
  std::uint64_t cams_out_of_range = 0;
  std::uint64_t eligible_receivers = 0;  // nodes - 1
  std::uint64_t ticks = 0;
  std::uint64_t events_executed = 0;
  std::uint64_t sync_checks = 0;
};

struct RunResult {
  std::vector<MetricsRecord> records;
  RunSummary summary;
};

/// Runs one platoon scenario in lockstep. Per tick:
/// odometry -> mobility -> CAM generation -> channel -> event drain ->
/// control -> metrics record -> physics -> clock advance.
RunResult run_scenario(const ScenarioConfig& cfg);

RunSummary summarize(const ScenarioConfig& cfg, const std::vector<MetricsRecord>& records);

struct SweepRun {
  double cam_hz = 0.0;
  std::uint64_t seed = 0;
  RunResult result;
};

/// One run per (hz, seed), sorted by hz ascending then seed ascending.
/// Every hz is validated against the tick period before any run starts.
std::vector<SweepRun> run_sweep(const ScenarioConfig& base, const std::vector<double>& cam_hz,
                                const std::vector<std::uint64_t>& seeds);

}  // namespace platoon::scenario
