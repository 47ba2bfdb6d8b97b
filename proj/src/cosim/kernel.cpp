#include "platoon/cosim/kernel.hpp"

#include <string>

namespace platoon::cosim {

namespace {

std::string fmt_ns(SimTime t) { return std::to_string(t.nanos) + " ns"; }

}  // namespace

Kernel::Kernel(TickConfig config) : config_(config) {
  if (config_.period.count() <= 0) {
    throw std::invalid_argument("tick period must be positive");
  }
}

std::uint64_t Kernel::schedule(SimTime fire_at, NodeId target, std::any payload) {
  if (fire_at < now_) {
    throw SyncViolation("event scheduled in the past: fire_at " + fmt_ns(fire_at) +
                        " < now " + fmt_ns(now_));
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(Event{fire_at, seq, target, std::move(payload)});
  return seq;
}

std::size_t Kernel::run_until(SimTime t) {
  if (t > horizon_) {
    throw SyncViolation("run_until " + fmt_ns(t) + " beyond clock horizon " + fmt_ns(horizon_));
  }
  if (t < now_) {
    throw SyncViolation("run_until " + fmt_ns(t) + " before now " + fmt_ns(now_));
  }
  std::size_t count = 0;
  while (!queue_.empty() && queue_.top().fire_at <= t) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.fire_at;
    ++safety_checks_;
    if (now_ > horizon_) {
      throw SyncViolation("event executed at " + fmt_ns(now_) + " beyond horizon " +
                          fmt_ns(horizon_));
    }
    if (dispatcher_) dispatcher_(ev);
    ++executed_;
    ++count;
  }
  now_ = t;
  return count;
}

SimTime Kernel::advance_tick() {
  if (!queue_.empty() && queue_.top().fire_at <= horizon_) {
    throw SyncViolation("advance_tick with undrained events at " +
                        fmt_ns(queue_.top().fire_at));
  }
  horizon_ = horizon_ + config_.period;
  ++ticks_;
  bus_.publish(BusMessage{kClockTopic, horizon_, now_});
  return horizon_;
}

void Kernel::publish(const std::string& topic, std::any payload) {
  bus_.publish(BusMessage{topic, std::move(payload), now_});
}

}  // namespace platoon::cosim
