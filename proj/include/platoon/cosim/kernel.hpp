#pragma once

#include "platoon/cosim/bus.hpp"
#include "platoon/cosim/sim_time.hpp"

#include <any>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace platoon::cosim {

using NodeId = std::uint32_t;

struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  NodeId target = 0;
  std::any payload;
};

/// Raised when the event side would run ahead of, or behind, the shared clock.
class SyncViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct TickConfig {
  Duration period{std::chrono::milliseconds(20)};
};

inline constexpr const char* kClockTopic = "/clock";

/// Hybrid co-simulation core.
///
/// The time-driven side calls advance_tick() once per physics step; each call
/// moves the horizon forward by exactly one period and publishes the new
/// horizon on "/clock". The event-driven side may only execute events up to
/// the horizon via run_until(). Events are ordered by (fire_at, seq) where seq
/// is the insertion counter, so equal timestamps run in scheduling order.
class Kernel {
 public:
  using Dispatcher = std::function<void(const Event&)>;

  explicit Kernel(TickConfig config = {});

  /// Queues an event and returns its sequence number.
  /// Throws SyncViolation if fire_at < now().
  std::uint64_t schedule(SimTime fire_at, NodeId target, std::any payload = {});

  /// Executes every queued event with fire_at <= t and sets now() to t.
  /// Throws SyncViolation if t > horizon() or t < now().
  std::size_t run_until(SimTime t);

  /// Moves the horizon one period forward and publishes it on the clock topic.
  /// Throws SyncViolation if events at or before the current horizon are still queued.
  SimTime advance_tick();

  void set_dispatcher(Dispatcher dispatcher) { dispatcher_ = std::move(dispatcher); }

  /// Publishes on the bus stamped with now().
  void publish(const std::string& topic, std::any payload);

  SimTime now() const { return now_; }
  SimTime horizon() const { return horizon_; }
  Duration period() const { return config_.period; }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t ticks() const { return ticks_; }
  std::uint64_t executed() const { return executed_; }
  /// Number of times the now() <= horizon() check ran during event execution.
  std::uint64_t safety_checks() const { return safety_checks_; }

  MessageBus& bus() { return bus_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  TickConfig config_;
  SimTime now_{};
  SimTime horizon_{};
  std::uint64_t next_seq_ = 0;
  std::uint64_t ticks_ = 0;
  std::uint64_t executed_ = 0;
  std::uint64_t safety_checks_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  Dispatcher dispatcher_;
  MessageBus bus_;
};

}  // namespace platoon::cosim
