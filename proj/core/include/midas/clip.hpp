#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace midas {

struct ClipShape {
  std::uint32_t frames = 0;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 0;

  std::size_t frame_size() const noexcept {
    return static_cast<std::size_t>(height) * width * channels;
  }
  std::size_t element_count() const noexcept { return frame_size() * frames; }

  friend bool operator==(const ClipShape&, const ClipShape&) = default;
};

std::string to_string(const ClipShape& shape);

/// T frames of H x W x Ch pixels in [0, 1], stored frame-major, row-major,
/// channel-last in one contiguous buffer.
class Clip {
 public:
  Clip() = default;
  Clip(std::string clip_id, ClipShape shape, std::vector<float> data);

  static Clip constant(std::string clip_id, ClipShape shape, float value);

  const std::string& id() const noexcept { return id_; }
  const ClipShape& shape() const noexcept { return shape_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<const float> frame(std::size_t t) const;
  float at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const;

  friend bool operator==(const Clip&, const Clip&) = default;

 private:
  std::string id_;
  ClipShape shape_;
  std::vector<float> data_;
};

// Clip binary: "MDSC", u32 T, H, W, Ch, reserved(0), then T*H*W*Ch float32,
// all little-endian.
inline constexpr char kClipMagic[4] = {'M', 'D', 'S', 'C'};

std::vector<std::uint8_t> encode_clip(const Clip& clip);
Clip decode_clip(std::span<const std::uint8_t> bytes, std::string clip_id);

void write_clip_file(const Clip& clip, const std::filesystem::path& path);
void write_clip_bytes(std::span<const std::uint8_t> bytes, const std::filesystem::path& path);
Clip read_clip_file(const std::filesystem::path& path, std::string clip_id);

}  // namespace midas
