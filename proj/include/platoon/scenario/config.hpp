#pragma once

#include "platoon/control/follower.hpp"
#include "platoon/control/pid.hpp"
#include "platoon/cosim/sim_time.hpp"
#include "platoon/dynamics/vehicle.hpp"
#include "platoon/its/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace platoon::scenario {

/// Validation or parse failure; what() starts with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& reason)
      : std::runtime_error(field + ": " + reason), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Role { Leader, Follower };

struct VehicleSpec {
  std::uint32_t id = 0;
  Role role = Role::Follower;
  std::optional<std::uint32_t> predecessor;
  dynamics::VehicleState initial;
};

/// Leader holds target_speed (and a constant steer) for `duration`.
struct ProfileSegment {
  cosim::Duration duration{0};
  double target_speed = 0.0;
  double steer = 0.0;
};

struct ScenarioConfig {
  std::vector<VehicleSpec> vehicles;
  dynamics::VehicleParams params;
  std::vector<ProfileSegment> leader_profile;
  double leader_speed_gain = 1.0;  // 1/s, P-gain of the leader cruise loop
  double cam_hz = 10.0;
  its::ChannelConfig channel;
  control::PidGains longitudinal = control::default_longitudinal_gains();
  control::PidGains lateral = control::default_lateral_gains();
  control::FollowerConfig follower;
  dynamics::SensorNoise sensor_noise;
  cosim::Duration duration{std::chrono::seconds(120)};
  cosim::Duration tick{std::chrono::milliseconds(20)};
  cosim::Duration settling{std::chrono::seconds(30)};
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first violated field.
  void validate() const;
};

/// Leader profile of the reference scenario: parked 2 s, cruise at 5 m/s for
/// 60 s, a 20 s arc at 0.05 rad steer, then straight cruise.
std::vector<ProfileSegment> default_leader_profile();

/// Parses the JSON schema (comments allowed) and validates the result.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace platoon::scenario
