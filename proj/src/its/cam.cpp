#include "platoon/its/cam.hpp"

#include <bit>
#include <string>

namespace platoon::its {

namespace {

template <typename T>
void put_be(EncodedFrame& out, std::size_t offset, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out[offset + sizeof(T) - 1 - i] = static_cast<std::uint8_t>(u & 0xFFu);
    u = static_cast<U>(u >> 8);
  }
}

template <typename T>
T get_be(std::span<const std::uint8_t> in, std::size_t offset) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u = static_cast<U>((u << 8) | in[offset + i]);
  }
  return std::bit_cast<T>(u);
}

}  // namespace

EncodedFrame cam_encode(const Cam& cam) {
  if (!cam.valid()) {
    throw CodecError("cam_encode: heading_value " + std::to_string(cam.heading_value) +
                     " out of range [0, 3600)");
  }
  EncodedFrame out{};
  put_be<std::uint32_t>(out, 0, cam.station_id);
  put_be<std::uint16_t>(out, 4, cam.generation_delta_time);
  put_be<std::int32_t>(out, 6, cam.x_cm);
  put_be<std::int32_t>(out, 10, cam.y_cm);
  put_be<std::uint16_t>(out, 14, cam.heading_value);
  put_be<std::uint16_t>(out, 16, cam.speed_value);
  return out;
}

Cam cam_decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kFrameSize) {
    throw CodecError("cam_decode: expected " + std::to_string(kFrameSize) + " bytes, got " +
                     std::to_string(bytes.size()));
  }
  Cam cam;
  cam.station_id = get_be<std::uint32_t>(bytes, 0);
  cam.generation_delta_time = get_be<std::uint16_t>(bytes, 4);
  cam.x_cm = get_be<std::int32_t>(bytes, 6);
  cam.y_cm = get_be<std::int32_t>(bytes, 10);
  cam.heading_value = get_be<std::uint16_t>(bytes, 14);
  cam.speed_value = get_be<std::uint16_t>(bytes, 16);
  if (!cam.valid()) {
    throw CodecError("cam_decode: corrupt frame, heading_value " +
                     std::to_string(cam.heading_value));
  }
  return cam;
}

}  // namespace platoon::its
