#pragma once

#include "platoon/cosim/kernel.hpp"
#include "platoon/cosim/sim_time.hpp"
#include "platoon/dynamics/vehicle.hpp"
#include "platoon/its/ca_service.hpp"
#include "platoon/its/cam.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace platoon::its {

using cosim::NodeId;

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

/// Node position table fed by odometry (the "GPS" of each network node).
class MobilityTable {
 public:
  void update(NodeId node, const dynamics::OdometrySample& odom);
  const Position& position(NodeId node) const;
  bool contains(NodeId node) const { return positions_.contains(node); }
  const std::map<NodeId, Position>& positions() const { return positions_; }

 private:
  std::map<NodeId, Position> positions_;
};

struct ChannelConfig {
  cosim::Duration delay_fixed{std::chrono::milliseconds(1)};
  cosim::Duration delay_jitter{0};
  double loss_prob = 0.0;
  double range = 300.0;  // m
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct Delivery {
  NodeId receiver = 0;
  cosim::SimTime deliver_at;
  EncodedFrame frame{};
};

struct ChannelStats {
  std::uint64_t transmissions = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t out_of_range = 0;
};

/// Parametric broadcast channel standing in for the ITS-G5 access layers.
///
/// Receivers are visited in ascending node id. Out-of-range receivers consume
/// no randomness; in-range receivers draw one loss sample and, when jitter is
/// configured and the frame survives, one jitter sample.
class BroadcastChannel {
 public:
  explicit BroadcastChannel(ChannelConfig cfg);

  std::vector<Delivery> transmit(const EncodedFrame& frame, NodeId sender,
                                 const Position& sender_pos,
                                 const std::map<NodeId, Position>& nodes, cosim::SimTime now);

  const ChannelStats& stats() const { return stats_; }
  const ChannelConfig& config() const { return cfg_; }

 private:
  double uniform01();

  ChannelConfig cfg_;
  std::mt19937_64 rng_;
  ChannelStats stats_;
};

/// "/carN/cam": decoded CAMs received by node N, stamped with the receive time.
std::string cam_rx_topic(NodeId node);

/// Network side of the co-simulation: one node per vehicle, each with a
/// Vehicle Data Provider fed from "/carN/odom", a CA service, and an entry in
/// the mobility table. Received frames are decoded and republished on
/// "/carN/cam".
class ItsNetwork {
 public:
  ItsNetwork(cosim::Kernel& kernel, ChannelConfig channel, double cam_hz);
  ItsNetwork(const ItsNetwork&) = delete;
  ItsNetwork& operator=(const ItsNetwork&) = delete;

  void add_node(NodeId id);

  /// Mobility update for every node, then CAM generation and transmission.
  /// Deliveries are scheduled on the kernel.
  void tick(cosim::SimTime now);

  const ChannelStats& channel_stats() const { return channel_.stats(); }
  std::uint64_t cams_sent() const;
  std::uint64_t decode_errors() const { return decode_errors_; }
  const MobilityTable& mobility() const { return mobility_; }

 private:
  struct Node {
    NodeId id;
    CaService ca;
    std::optional<dynamics::OdometrySample> latest;
    cosim::Subscription odom_sub;
  };

  void on_delivery(const cosim::Event& ev);

  cosim::Kernel& kernel_;
  BroadcastChannel channel_;
  CaServiceConfig ca_cfg_;
  MobilityTable mobility_;
  std::map<NodeId, std::unique_ptr<Node>> nodes_;
  std::uint64_t decode_errors_ = 0;
};

}  // namespace platoon::its
