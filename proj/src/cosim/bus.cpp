#include "platoon/cosim/bus.hpp"

#include <algorithm>
#include <stdexcept>

namespace platoon::cosim {

Subscription::Subscription(Subscription&& other) noexcept
    : bus_(other.bus_), topic_(std::move(other.topic_)), id_(other.id_) {
  other.bus_ = nullptr;
}

Subscription& Subscription::operator=(Subscription&& other) noexcept {
  if (this != &other) {
    reset();
    bus_ = other.bus_;
    topic_ = std::move(other.topic_);
    id_ = other.id_;
    other.bus_ = nullptr;
  }
  return *this;
}

Subscription::~Subscription() { reset(); }

void Subscription::reset() {
  if (bus_ != nullptr) {
    bus_->unsubscribe(topic_, id_);
    bus_ = nullptr;
  }
}

Subscription MessageBus::subscribe(const std::string& topic, BusHandler handler) {
  if (topic.empty()) {
    throw std::invalid_argument("topic name must not be empty");
  }
  const std::uint64_t id = next_id_++;
  topics_[topic].push_back(Slot{id, std::make_shared<BusHandler>(std::move(handler))});
  return Subscription(this, topic, id);
}

void MessageBus::publish(BusMessage message) {
  if (message.topic.empty()) {
    throw std::invalid_argument("topic name must not be empty");
  }
  auto it = topics_.find(message.topic);
  if (it == topics_.end()) return;
  // Snapshot so handlers may (un)subscribe while we iterate.
  const std::vector<Slot> slots = it->second;
  for (const auto& slot : slots) {
    (*slot.handler)(message);
  }
}

std::size_t MessageBus::subscriber_count(const std::string& topic) const {
  auto it = topics_.find(topic);
  return it == topics_.end() ? 0 : it->second.size();
}

void MessageBus::unsubscribe(const std::string& topic, std::uint64_t id) {
  auto it = topics_.find(topic);
  if (it == topics_.end()) return;
  auto& slots = it->second;
  std::erase_if(slots, [id](const Slot& s) { return s.id == id; });
  if (slots.empty()) topics_.erase(it);
}

}  // namespace platoon::cosim
