#include "midas/clip.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "midas/error.hpp"

namespace midas {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 5 * 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::string to_string(const ClipShape& s) {
  return std::to_string(s.frames) + "x" + std::to_string(s.height) + "x" +
         std::to_string(s.width) + "x" + std::to_string(s.channels);
}

Clip::Clip(std::string clip_id, ClipShape shape, std::vector<float> data)
    : id_(std::move(clip_id)), shape_(shape), data_(std::move(data)) {
  if (shape_.frames == 0 || shape_.height == 0 || shape_.width == 0 || shape_.channels == 0) {
    throw Error(ErrorKind::kShapeMismatch, "clip '" + id_ + "' has a zero dimension");
  }
  if (data_.size() != shape_.element_count()) {
    throw Error(ErrorKind::kShapeMismatch,
                "clip '" + id_ + "' data length does not match shape " + to_string(shape_));
  }
  for (float v : data_) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) {
      throw Error(ErrorKind::kInvalidInput, "clip '" + id_ + "' has a value outside [0, 1]");
    }
  }
}

Clip Clip::constant(std::string clip_id, ClipShape shape, float value) {
  return Clip(std::move(clip_id), shape, std::vector<float>(shape.element_count(), value));
}

std::span<const float> Clip::frame(std::size_t t) const {
  return std::span<const float>(data_).subspan(t * shape_.frame_size(), shape_.frame_size());
}

float Clip::at(std::size_t t, std::size_t y, std::size_t x, std::size_t c) const {
  return data_[((t * shape_.height + y) * shape_.width + x) * shape_.channels + c];
}

std::vector<std::uint8_t> encode_clip(const Clip& clip) {
  const ClipShape& s = clip.shape();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + 4 * s.element_count());
  out.insert(out.end(), std::begin(kClipMagic), std::end(kClipMagic));
  put_u32(out, s.frames);
  put_u32(out, s.height);
  put_u32(out, s.width);
  put_u32(out, s.channels);
  put_u32(out, 0);
  for (float v : clip.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Clip decode_clip(std::span<const std::uint8_t> bytes, std::string clip_id) {
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kClipMagic, 4) != 0) {
    throw Error(ErrorKind::kMalformedRecord, "clip '" + clip_id + "' is not an MDSC file");
  }
  ClipShape s;
  s.frames = get_u32(bytes.data() + 4);
  s.height = get_u32(bytes.data() + 8);
  s.width = get_u32(bytes.data() + 12);
  s.channels = get_u32(bytes.data() + 16);
  if (get_u32(bytes.data() + 20) != 0) {
    throw Error(ErrorKind::kMalformedRecord, "clip '" + clip_id + "' has nonzero reserved field");
  }
  if (bytes.size() != kHeaderBytes + 4 * s.element_count()) {
    throw Error(ErrorKind::kMalformedRecord,
                "clip '" + clip_id + "' payload size does not match header " + to_string(s));
  }
  std::vector<float> data(s.element_count());
  const std::uint8_t* p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < data.size(); ++i, p += 4) {
    data[i] = std::bit_cast<float>(get_u32(p));
  }
  return Clip(std::move(clip_id), s, std::move(data));
}

void write_clip_file(const Clip& clip, const std::filesystem::path& path) {
  write_clip_bytes(encode_clip(clip), path);
}

void write_clip_bytes(std::span<const std::uint8_t> bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

Clip read_clip_file(const std::filesystem::path& path, std::string clip_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kMissingFile,
                "clip '" + clip_id + "': cannot open " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_clip(bytes, std::move(clip_id));
}

}  // namespace midas
