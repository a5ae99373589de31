// Copyright 2026 The convsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "convsim/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "convsim/error.hpp"

namespace convsim {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t get_u16(const std::uint8_t *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t> &out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

struct ParsedHeader {
  WavInfo info;
  std::uint16_t format = 0;
  std::streamoff data_offset = 0;
  std::uint32_t data_bytes = 0;
};

ParsedHeader parse_header(std::istream &is, const std::filesystem::path &path) {
  auto fail = [&](const std::string &why) {
    return Error(path.string() + ": " + why);
  };
  std::array<std::uint8_t, 12> riff{};
  if (!is.read(reinterpret_cast<char *>(riff.data()), riff.size()))
    throw fail("file too short for a RIFF header");
  if (std::memcmp(riff.data(), "RIFF", 4) != 0 ||
      std::memcmp(riff.data() + 8, "WAVE", 4) != 0)
    throw fail("not a RIFF/WAVE file");

  ParsedHeader h;
  bool have_fmt = false;
  std::array<std::uint8_t, 8> chunk{};
  while (is.read(reinterpret_cast<char *>(chunk.data()), chunk.size())) {
    const std::uint32_t size = get_u32(chunk.data() + 4);
    if (std::memcmp(chunk.data(), "fmt ", 4) == 0) {
      if (size < 16) throw fail("fmt chunk too short");
      std::vector<std::uint8_t> fmt(size);
      if (!is.read(reinterpret_cast<char *>(fmt.data()), size))
        throw fail("truncated fmt chunk");
      h.format = get_u16(fmt.data());
      h.info.channels = get_u16(fmt.data() + 2);
      h.info.sample_rate = static_cast<int>(get_u32(fmt.data() + 4));
      h.info.bits_per_sample = get_u16(fmt.data() + 14);
      if (h.format == kFormatExtensible) {
        if (size < 26) throw fail("extensible fmt chunk too short");
        // First two bytes of the sub-format GUID carry the actual format tag.
        h.format = get_u16(fmt.data() + 24);
      }
      if (size % 2 == 1) is.ignore(1);
      have_fmt = true;
    } else if (std::memcmp(chunk.data(), "data", 4) == 0) {
      if (!have_fmt) throw fail("data chunk precedes fmt chunk");
      h.data_offset = is.tellg();
      h.data_bytes = size;
      break;
    } else {
      is.seekg(size + (size % 2), std::ios::cur);
    }
  }
  if (!have_fmt) throw fail("missing fmt chunk");
  if (h.data_offset == 0) throw fail("missing data chunk");
  if (h.info.channels <= 0) throw fail("zero channels");
  if (h.info.sample_rate <= 0) throw fail("invalid sample rate");

  const bool int_ok = h.format == kFormatPcm &&
                      (h.info.bits_per_sample == 8 ||
                       h.info.bits_per_sample == 16 ||
                       h.info.bits_per_sample == 24 ||
                       h.info.bits_per_sample == 32);
  const bool float_ok = h.format == kFormatFloat &&
                        (h.info.bits_per_sample == 32 ||
                         h.info.bits_per_sample == 64);
  if (!int_ok && !float_ok)
    throw fail("unsupported encoding (format tag " + std::to_string(h.format) +
               ", " + std::to_string(h.info.bits_per_sample) + " bits)");

  const std::size_t frame_bytes =
      static_cast<std::size_t>(h.info.channels) * (h.info.bits_per_sample / 8);
  h.info.frames = h.data_bytes / frame_bytes;
  return h;
}

double decode_sample(const std::uint8_t *p, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    if (bits == 32) {
      float f;
      std::uint32_t u = get_u32(p);
      std::memcpy(&f, &u, sizeof f);
      return f;
    }
    std::uint64_t u = static_cast<std::uint64_t>(get_u32(p)) |
                      (static_cast<std::uint64_t>(get_u32(p + 4)) << 32);
    double d;
    std::memcpy(&d, &u, sizeof d);
    return d;
  }
  switch (bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(get_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default:
      return static_cast<std::int32_t>(get_u32(p)) / 2147483648.0;
  }
}

}  // namespace

WavInfo read_wav_info(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  return parse_header(is, path).info;
}

AudioBuffer read_wav(const std::filesystem::path &path,
                     std::optional<int> expected_rate) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  const ParsedHeader h = parse_header(is, path);
  if (expected_rate && *expected_rate != h.info.sample_rate)
    throw Error(path.string() + ": sample rate " +
                std::to_string(h.info.sample_rate) +
                " Hz does not match corpus rate " +
                std::to_string(*expected_rate) + " Hz");

  const int bytes_per_sample = h.info.bits_per_sample / 8;
  const std::size_t frame_bytes =
      static_cast<std::size_t>(h.info.channels) * bytes_per_sample;
  std::vector<std::uint8_t> raw(h.info.frames * frame_bytes);
  is.seekg(h.data_offset);
  if (!is.read(reinterpret_cast<char *>(raw.data()),
               static_cast<std::streamsize>(raw.size())))
    throw Error(path.string() + ": truncated data chunk");

  AudioBuffer out;
  out.sample_rate = h.info.sample_rate;
  out.samples.resize(h.info.frames);
  for (std::size_t i = 0; i < h.info.frames; ++i)
    out.samples[i] = decode_sample(raw.data() + i * frame_bytes, h.format,
                                   h.info.bits_per_sample);
  return out;
}

EncodedWav encode_wav(const AudioBuffer &buffer) {
  EncodedWav enc;
  const auto data_bytes = static_cast<std::uint32_t>(buffer.size() * 2);
  auto &b = enc.bytes;
  b.reserve(44 + data_bytes);
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  put_u32(b, 36 + data_bytes);
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(b, 16);
  put_u16(b, kFormatPcm);
  put_u16(b, 1);
  put_u32(b, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(b, static_cast<std::uint32_t>(buffer.sample_rate) * 2);
  put_u16(b, 2);
  put_u16(b, 16);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  put_u32(b, data_bytes);
  for (double s : buffer.samples) {
    double q = std::nearbyint(s * 32768.0);
    if (q > 32767.0 || q < -32768.0 || std::isnan(q)) {
      ++enc.clipped;
      q = std::isnan(q) ? 0.0 : std::clamp(q, -32768.0, 32767.0);
    }
    put_u16(b, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  return enc;
}

std::size_t write_wav(const std::filesystem::path &path,
                      const AudioBuffer &buffer) {
  const EncodedWav enc = encode_wav(buffer);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + path.string());
  os.write(reinterpret_cast<const char *>(enc.bytes.data()),
           static_cast<std::streamsize>(enc.bytes.size()));
  if (!os) throw Error("write failed: " + path.string());
  return enc.clipped;
}

}  // namespace convsim
