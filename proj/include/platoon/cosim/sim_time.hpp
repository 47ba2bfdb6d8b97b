#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace platoon::cosim {

using Duration = std::chrono::nanoseconds;

/// Simulation timestamp in integer nanoseconds since start of run.
struct SimTime {
  std::uint64_t nanos = 0;

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr double seconds() const { return static_cast<double>(nanos) * 1e-9; }
  constexpr std::uint64_t millis() const { return nanos / 1'000'000ULL; }

  static constexpr SimTime from_nanos(std::uint64_t ns) { return SimTime{ns}; }
};

constexpr SimTime operator+(SimTime t, Duration d) {
  if (d.count() < 0) {
    throw std::invalid_argument("negative duration added to SimTime");
  }
  return SimTime{t.nanos + static_cast<std::uint64_t>(d.count())};
}

constexpr Duration operator-(SimTime a, SimTime b) {
  return Duration{static_cast<std::int64_t>(a.nanos) - static_cast<std::int64_t>(b.nanos)};
}

constexpr double to_seconds(Duration d) { return static_cast<double>(d.count()) * 1e-9; }

/// Nearest-nanosecond duration for a value in seconds.
Duration from_seconds(double seconds);

/// Nearest-nanosecond period of a frequency in Hz. Throws on hz <= 0.
Duration period_from_hz(double hz);

}  // namespace platoon::cosim
