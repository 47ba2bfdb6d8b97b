#include "platoon/its/ca_service.hpp"

#include "platoon/its/vdp.hpp"

#include <stdexcept>
#include <string>

namespace platoon::its {

void CaServiceConfig::validate(cosim::Duration tick_period) const {
  if (!(generation_hz > 0.0)) {
    throw std::invalid_argument("cam_hz: must be positive");
  }
  if (tick_period.count() <= 0) {
    throw std::invalid_argument("tick period must be positive");
  }
  const auto p = period();
  if (p.count() % tick_period.count() != 0) {
    throw std::invalid_argument("cam_hz: generation period " + std::to_string(p.count()) +
                                " ns is not a multiple of the tick period " +
                                std::to_string(tick_period.count()) + " ns");
  }
}

std::optional<EncodedFrame> ca_service_step(cosim::SimTime now, const CaServiceConfig& cfg,
                                            const dynamics::OdometrySample& odom,
                                            std::uint32_t station_id) {
  const auto period = static_cast<std::uint64_t>(cfg.period().count());
  if (now.nanos % period != 0) return std::nullopt;
  return cam_encode(vdp_sample(odom, station_id, now));
}

std::optional<EncodedFrame> CaService::step(cosim::SimTime now,
                                            const dynamics::OdometrySample& odom) {
  auto frame = ca_service_step(now, cfg_, odom, station_id_);
  if (frame) ++sent_;
  return frame;
}

}  // namespace platoon::its
