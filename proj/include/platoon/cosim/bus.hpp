#pragma once

#include "platoon/cosim/sim_time.hpp"

#include <any>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace platoon::cosim {

struct BusMessage {
  std::string topic;
  std::any payload;
  SimTime publish_time;
};

using BusHandler = std::function<void(const BusMessage&)>;

class MessageBus;

/// Move-only handle; the handler stays registered for the lifetime of the handle.
class Subscription {
 public:
  Subscription() = default;
  Subscription(const Subscription&) = delete;
  Subscription& operator=(const Subscription&) = delete;
  Subscription(Subscription&& other) noexcept;
  Subscription& operator=(Subscription&& other) noexcept;
  ~Subscription();

  void reset();
  bool active() const { return bus_ != nullptr; }

 private:
  friend class MessageBus;
  Subscription(MessageBus* bus, std::string topic, std::uint64_t id)
      : bus_(bus), topic_(std::move(topic)), id_(id) {}

  MessageBus* bus_ = nullptr;
  std::string topic_;
  std::uint64_t id_ = 0;
};

/// In-process topic bus with synchronous delivery and no retention.
///
/// Handlers run inside publish(), in subscription order. A handler that
/// subscribes or unsubscribes during delivery affects only later publishes.
/// The bus must outlive every Subscription it hands out.
class MessageBus {
 public:
  MessageBus() = default;
  MessageBus(const MessageBus&) = delete;
  MessageBus& operator=(const MessageBus&) = delete;

  [[nodiscard]] Subscription subscribe(const std::string& topic, BusHandler handler);
  void publish(BusMessage message);

  std::size_t subscriber_count(const std::string& topic) const;

 private:
  friend class Subscription;
  void unsubscribe(const std::string& topic, std::uint64_t id);

  struct Slot {
    std::uint64_t id;
    std::shared_ptr<BusHandler> handler;
  };
  std::map<std::string, std::vector<Slot>, std::less<>> topics_;
  std::uint64_t next_id_ = 1;
};

}  // namespace platoon::cosim
