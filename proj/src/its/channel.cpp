#include "platoon/its/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace platoon::its {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void MobilityTable::update(NodeId node, const dynamics::OdometrySample& odom) {
  positions_[node] = Position{odom.x, odom.y};
}

const Position& MobilityTable::position(NodeId node) const {
  auto it = positions_.find(node);
  if (it == positions_.end()) {
    throw std::out_of_range("no position for node " + std::to_string(node));
  }
  return it->second;
}

void ChannelConfig::validate() const {
  if (!(loss_prob >= 0.0 && loss_prob <= 1.0)) {
    throw std::invalid_argument("channel.loss_prob: must be in [0, 1]");
  }
  if (!(range > 0.0)) {
    throw std::invalid_argument("channel.range_m: must be positive");
  }
  if (delay_fixed.count() < 0) {
    throw std::invalid_argument("channel.delay_fixed_ms: must be non-negative");
  }
  if (delay_jitter.count() < 0) {
    throw std::invalid_argument("channel.delay_jitter_ms: must be non-negative");
  }
}

BroadcastChannel::BroadcastChannel(ChannelConfig cfg) : cfg_(cfg), rng_(cfg.rng_seed) {
  cfg_.validate();
}

double BroadcastChannel::uniform01() {
  // 53 random bits -> [0, 1); fixed conversion so results match across standard libraries.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::vector<Delivery> BroadcastChannel::transmit(const EncodedFrame& frame, NodeId sender,
                                                 const Position& sender_pos,
                                                 const std::map<NodeId, Position>& nodes,
                                                 cosim::SimTime now) {
  ++stats_.transmissions;
  std::vector<Delivery> out;
  for (const auto& [id, pos] : nodes) {
    if (id == sender) continue;
    if (distance(sender_pos, pos) > cfg_.range) {
      ++stats_.out_of_range;
      continue;
    }
    if (uniform01() < cfg_.loss_prob) {
      ++stats_.dropped;
      continue;
    }
    cosim::Duration delay = cfg_.delay_fixed;
    if (cfg_.delay_jitter.count() > 0) {
      const auto span = static_cast<double>(cfg_.delay_jitter.count()) + 1.0;
      auto extra = static_cast<std::int64_t>(uniform01() * span);
      if (extra > cfg_.delay_jitter.count()) extra = cfg_.delay_jitter.count();
      delay += cosim::Duration{extra};
    }
    ++stats_.delivered;
    out.push_back(Delivery{id, now + delay, frame});
  }
  return out;
}

std::string cam_rx_topic(NodeId node) { return "/car" + std::to_string(node) + "/cam"; }

ItsNetwork::ItsNetwork(cosim::Kernel& kernel, ChannelConfig channel, double cam_hz)
    : kernel_(kernel), channel_(channel), ca_cfg_{cam_hz} {
  ca_cfg_.validate(kernel_.period());
  kernel_.set_dispatcher([this](const cosim::Event& ev) { on_delivery(ev); });
}

void ItsNetwork::add_node(NodeId id) {
  if (nodes_.contains(id)) {
    throw std::invalid_argument("duplicate network node " + std::to_string(id));
  }
  auto node = std::make_unique<Node>(Node{id, CaService(id, ca_cfg_), std::nullopt, {}});
  Node* raw = node.get();
  node->odom_sub = kernel_.bus().subscribe(dynamics::odom_topic(id), [raw](const auto& msg) {
    raw->latest = std::any_cast<dynamics::OdometrySample>(msg.payload);
  });
  nodes_.emplace(id, std::move(node));
}

void ItsNetwork::tick(cosim::SimTime now) {
  for (auto& [id, node] : nodes_) {
    if (node->latest) mobility_.update(id, *node->latest);
  }
  for (auto& [id, node] : nodes_) {
    if (!node->latest) continue;
    auto frame = node->ca.step(now, *node->latest);
    if (!frame) continue;
    for (const auto& d :
         channel_.transmit(*frame, id, mobility_.position(id), mobility_.positions(), now)) {
      kernel_.schedule(d.deliver_at, d.receiver, d.frame);
    }
  }
}

std::uint64_t ItsNetwork::cams_sent() const {
  std::uint64_t total = 0;
  for (const auto& [id, node] : nodes_) total += node->ca.sent();
  return total;
}

void ItsNetwork::on_delivery(const cosim::Event& ev) {
  const auto* frame = std::any_cast<EncodedFrame>(&ev.payload);
  if (frame == nullptr) return;
  try {
    kernel_.publish(cam_rx_topic(ev.target), cam_decode(*frame));
  } catch (const CodecError&) {
    ++decode_errors_;
  }
}

}  // namespace platoon::its
