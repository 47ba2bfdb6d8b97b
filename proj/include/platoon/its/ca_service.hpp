#pragma once

#include "platoon/cosim/sim_time.hpp"
#include "platoon/dynamics/vehicle.hpp"
#include "platoon/its/cam.hpp"

#include <cstdint>
#include <optional>

namespace platoon::its {

struct CaServiceConfig {
  double generation_hz = 10.0;

  cosim::Duration period() const { return cosim::period_from_hz(generation_hz); }

  /// Throws std::invalid_argument unless the generation period is a positive
  /// exact multiple of tick_period.
  void validate(cosim::Duration tick_period) const;
};

/// Fixed-rate CAM generation: a frame is emitted exactly on multiples of the
/// generation period, starting at t = 0.
std::optional<EncodedFrame> ca_service_step(cosim::SimTime now, const CaServiceConfig& cfg,
                                            const dynamics::OdometrySample& odom,
                                            std::uint32_t station_id);

class CaService {
 public:
  CaService(std::uint32_t station_id, CaServiceConfig cfg) : station_id_(station_id), cfg_(cfg) {}

  std::optional<EncodedFrame> step(cosim::SimTime now, const dynamics::OdometrySample& odom);

  std::uint64_t sent() const { return sent_; }
  std::uint32_t station_id() const { return station_id_; }

 private:
  std::uint32_t station_id_;
  CaServiceConfig cfg_;
  std::uint64_t sent_ = 0;
};

}  // namespace platoon::its
