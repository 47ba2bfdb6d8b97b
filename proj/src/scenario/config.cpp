#include "platoon/scenario/config.hpp"

#include "platoon/its/ca_service.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

namespace platoon::scenario {

namespace {

using nlohmann::json;

/// Typed access to one JSON object with field-path error messages.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    for (const auto& [key, value] : obj_.items()) {
      const bool known = std::any_of(keys.begin(), keys.end(),
                                     [&](const char* k) { return key == k; });
      if (!known) throw ConfigError(field(key), "unknown field");
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  void number(const char* key, double& out) const {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
  }

  void seconds(const char* key, cosim::Duration& out, double scale = 1.0) const {
    if (!has(key)) return;
    double v = 0.0;
    number(key, v);
    if (v < 0.0) throw ConfigError(field(key), "must be non-negative");
    out = cosim::from_seconds(v * scale);
  }

  template <typename Int>
  void integer(const char* key, Int& out) const {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw ConfigError(field(key), "expected a non-negative integer");
    }
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
      throw ConfigError(field(key), "integer out of range");
    }
    out = static_cast<Int>(u);
  }

  std::string string(const char* key) const {
    const auto& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }

  const json& array(const char* key) const {
    const auto& v = obj_.at(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected an array");
    return v;
  }

  ObjectReader child(const char* key) const { return ObjectReader(obj_.at(key), field(key)); }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& obj_;
  std::string path_;
};

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void read_gains(const ObjectReader& r, control::PidGains& g) {
  r.allow_only({"kp", "ki", "kd", "out_min", "out_max", "integral_max"});
  r.number("kp", g.kp);
  r.number("ki", g.ki);
  r.number("kd", g.kd);
  r.number("out_min", g.out_min);
  r.number("out_max", g.out_max);
  r.number("integral_max", g.integral_max);
}

void read_vehicle(const ObjectReader& r, VehicleSpec& v) {
  r.allow_only({"id", "role", "predecessor", "x_m", "y_m", "heading_rad"});
  if (!r.has("id")) throw ConfigError(r.field("id"), "required");
  r.integer("id", v.id);
  if (!r.has("role")) throw ConfigError(r.field("role"), "required");
  const auto role = r.string("role");
  if (role == "leader") {
    v.role = Role::Leader;
  } else if (role == "follower") {
    v.role = Role::Follower;
  } else {
    throw ConfigError(r.field("role"), "expected \"leader\" or \"follower\", got \"" + role + "\"");
  }
  if (r.has("predecessor")) {
    std::uint32_t p = 0;
    r.integer("predecessor", p);
    v.predecessor = p;
  }
  r.number("x_m", v.initial.x);
  r.number("y_m", v.initial.y);
  r.number("heading_rad", v.initial.heading);
  v.initial.heading = dynamics::normalize_angle(v.initial.heading);
}

void validate_gains(const control::PidGains& g, const std::string& path) {
  if (!(g.out_min < g.out_max)) throw ConfigError(path + ".out_min", "must be < out_max");
  if (!(g.integral_max > 0.0)) throw ConfigError(path + ".integral_max", "must be positive");
}

}  // namespace

std::vector<ProfileSegment> default_leader_profile() {
  using std::chrono::seconds;
  return {
      {seconds(2), 0.0, 0.0},
      {seconds(60), 5.0, 0.0},
      {seconds(20), 5.0, 0.05},
      {seconds(38), 5.0, 0.0},
  };
}

void ScenarioConfig::validate() const {
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("vehicle_params", e.what());
  }
  if (tick.count() <= 0) throw ConfigError("tick_ms", "must be positive");
  if (duration.count() < 0) throw ConfigError("duration_s", "must be non-negative");
  if (settling.count() < 0) throw ConfigError("settling_s", "must be non-negative");
  if (!(leader_speed_gain > 0.0)) throw ConfigError("leader_speed_gain", "must be positive");

  try {
    its::CaServiceConfig{cam_hz}.validate(tick);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("cam_hz", std::string(e.what()).substr(std::string("cam_hz: ").size()));
  }
  try {
    channel.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    throw ConfigError(msg.substr(0, colon), msg.substr(colon + 2));
  }
  validate_gains(longitudinal, "controller.longitudinal");
  validate_gains(lateral, "controller.lateral");
  if (!(follower.gap_setpoint > 0.0)) throw ConfigError("controller.gap_setpoint_m", "must be positive");
  if (follower.lost_track_timeout.count() <= 0) {
    throw ConfigError("controller.lost_track_timeout_s", "must be positive");
  }
  if (!(follower.lookahead >= 0.0)) throw ConfigError("controller.lookahead_m", "must be non-negative");
  if (follower.trail_capacity == 0) throw ConfigError("controller.trail_capacity", "must be positive");
  if (sensor_noise.position_sigma < 0.0) {
    throw ConfigError("sensor_noise.position_sigma_m", "must be non-negative");
  }
  if (sensor_noise.speed_sigma < 0.0) {
    throw ConfigError("sensor_noise.speed_sigma_mps", "must be non-negative");
  }

  for (std::size_t i = 0; i < leader_profile.size(); ++i) {
    const auto& s = leader_profile[i];
    const auto path = indexed("leader_profile", i);
    if (s.duration.count() < 0) throw ConfigError(path + ".duration_s", "must be non-negative");
    if (s.target_speed < 0.0 || s.target_speed > params.max_speed) {
      throw ConfigError(path + ".speed_mps", "must be within [0, max_speed]");
    }
    if (std::abs(s.steer) > params.max_steer) {
      throw ConfigError(path + ".steer_rad", "exceeds max_steer");
    }
  }

  if (vehicles.empty()) throw ConfigError("vehicles", "at least one vehicle required");
  std::set<std::uint32_t> ids;
  std::optional<std::size_t> leader;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto& v = vehicles[i];
    const auto path = indexed("vehicles", i);
    if (v.id == 0) throw ConfigError(path + ".id", "must be positive");
    if (!ids.insert(v.id).second) {
      throw ConfigError(path + ".id", "duplicate id " + std::to_string(v.id));
    }
    if (v.role == Role::Leader) {
      if (leader) {
        throw ConfigError(path + ".role", "second leader (vehicles[" + std::to_string(*leader) +
                                              "] is already the leader)");
      }
      leader = i;
      if (v.predecessor) throw ConfigError(path + ".predecessor", "leader must not have one");
    } else if (!v.predecessor) {
      throw ConfigError(path + ".predecessor", "required for a follower");
    }
  }
  if (!leader) throw ConfigError("vehicles", "exactly one leader required, found none");

  std::set<std::uint32_t> used_as_predecessor;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto& v = vehicles[i];
    if (!v.predecessor) continue;
    const auto path = indexed("vehicles", i) + ".predecessor";
    if (*v.predecessor == v.id) throw ConfigError(path, "vehicle cannot follow itself");
    if (!ids.contains(*v.predecessor)) {
      throw ConfigError(path, "unknown vehicle id " + std::to_string(*v.predecessor));
    }
    if (!used_as_predecessor.insert(*v.predecessor).second) {
      throw ConfigError(path, "vehicle " + std::to_string(*v.predecessor) +
                                  " already has a follower; predecessors must form a chain");
    }
  }
  // Every follower must reach the leader without revisiting a vehicle.
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    std::set<std::uint32_t> seen;
    const VehicleSpec* cur = &vehicles[i];
    while (cur->predecessor) {
      if (!seen.insert(cur->id).second) {
        throw ConfigError(indexed("vehicles", i) + ".predecessor", "predecessor cycle");
      }
      const auto next = *cur->predecessor;
      cur = &*std::find_if(vehicles.begin(), vehicles.end(),
                           [next](const VehicleSpec& s) { return s.id == next; });
    }
  }
}

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("parse error: ") + e.what());
  }

  ScenarioConfig cfg;
  cfg.leader_profile = default_leader_profile();
  const ObjectReader r(root, "");
  r.allow_only({"duration_s", "tick_ms", "settling_s", "seed", "cam_hz", "vehicle_params",
                "vehicles", "leader_profile", "leader_speed_gain", "channel", "controller",
                "sensor_noise"});

  r.seconds("duration_s", cfg.duration);
  r.seconds("tick_ms", cfg.tick, 1e-3);
  r.seconds("settling_s", cfg.settling);
  r.integer("seed", cfg.seed);
  r.number("cam_hz", cfg.cam_hz);
  r.number("leader_speed_gain", cfg.leader_speed_gain);

  if (r.has("vehicle_params")) {
    const auto p = r.child("vehicle_params");
    p.allow_only({"wheelbase_m", "max_speed_mps", "max_accel_mps2", "min_accel_mps2",
                  "max_steer_rad"});
    p.number("wheelbase_m", cfg.params.wheelbase);
    p.number("max_speed_mps", cfg.params.max_speed);
    p.number("max_accel_mps2", cfg.params.max_accel);
    p.number("min_accel_mps2", cfg.params.min_accel);
    p.number("max_steer_rad", cfg.params.max_steer);
  }

  if (!r.has("vehicles")) throw ConfigError("vehicles", "required");
  const auto& vehicles = r.array("vehicles");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    VehicleSpec v;
    read_vehicle(ObjectReader(vehicles[i], indexed("vehicles", i)), v);
    cfg.vehicles.push_back(v);
  }

  if (r.has("leader_profile")) {
    cfg.leader_profile.clear();
    const auto& segs = r.array("leader_profile");
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const ObjectReader s(segs[i], indexed("leader_profile", i));
      s.allow_only({"duration_s", "speed_mps", "steer_rad"});
      if (!s.has("duration_s")) throw ConfigError(s.field("duration_s"), "required");
      if (!s.has("speed_mps")) throw ConfigError(s.field("speed_mps"), "required");
      ProfileSegment seg;
      s.seconds("duration_s", seg.duration);
      s.number("speed_mps", seg.target_speed);
      s.number("steer_rad", seg.steer);
      cfg.leader_profile.push_back(seg);
    }
  }

  if (r.has("channel")) {
    const auto c = r.child("channel");
    c.allow_only({"delay_fixed_ms", "delay_jitter_ms", "loss_prob", "range_m"});
    c.seconds("delay_fixed_ms", cfg.channel.delay_fixed, 1e-3);
    c.seconds("delay_jitter_ms", cfg.channel.delay_jitter, 1e-3);
    c.number("loss_prob", cfg.channel.loss_prob);
    c.number("range_m", cfg.channel.range);
  }

  if (r.has("controller")) {
    const auto c = r.child("controller");
    c.allow_only({"gap_setpoint_m", "lost_track_timeout_s", "lookahead_m", "trail_capacity",
                  "longitudinal", "lateral"});
    c.number("gap_setpoint_m", cfg.follower.gap_setpoint);
    c.seconds("lost_track_timeout_s", cfg.follower.lost_track_timeout);
    c.number("lookahead_m", cfg.follower.lookahead);
    c.integer("trail_capacity", cfg.follower.trail_capacity);
    if (c.has("longitudinal")) read_gains(c.child("longitudinal"), cfg.longitudinal);
    if (c.has("lateral")) read_gains(c.child("lateral"), cfg.lateral);
  }

  if (r.has("sensor_noise")) {
    const auto n = r.child("sensor_noise");
    n.allow_only({"position_sigma_m", "speed_sigma_mps"});
    n.number("position_sigma_m", cfg.sensor_noise.position_sigma);
    n.number("speed_sigma_mps", cfg.sensor_noise.speed_sigma);
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace platoon::scenario
