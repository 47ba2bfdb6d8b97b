#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace platoon::its {

inline constexpr std::size_t kFrameSize = 18;
inline constexpr std::uint16_t kHeadingLimit = 3600;  // exclusive, deci-degrees

/// Cooperative awareness message in field form.
///
/// Positions are in the local planar frame (centimetres). Heading uses the
/// compass convention: 0 = +y axis, increasing clockwise, in 0.1 degree units.
struct Cam {
  std::uint32_t station_id = 0;
  std::uint16_t generation_delta_time = 0;  // ms mod 65536
  std::int32_t x_cm = 0;
  std::int32_t y_cm = 0;
  std::uint16_t heading_value = 0;  // deci-degrees, [0, 3600)
  std::uint16_t speed_value = 0;    // cm/s

  bool operator==(const Cam&) const = default;

  bool valid() const { return heading_value < kHeadingLimit; }
};

using EncodedFrame = std::array<std::uint8_t, kFrameSize>;

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed big-endian layout:
///
///   [0,4)   station_id             u32
///   [4,6)   generation_delta_time  u16
///   [6,10)  x_cm                   i32 (two's complement)
///   [10,14) y_cm                   i32
///   [14,16) heading_value          u16
///   [16,18) speed_value            u16
///
/// Throws CodecError if the CAM is invalid.
EncodedFrame cam_encode(const Cam& cam);

/// Throws CodecError on a length other than 18 or an out-of-range heading.
Cam cam_decode(std::span<const std::uint8_t> bytes);

}  // namespace platoon::its
