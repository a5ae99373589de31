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

#ifndef CONVSIM_WAV_HPP_
#define CONVSIM_WAV_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "convsim/audio.hpp"

namespace convsim {

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  std::size_t frames = 0;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

// Header-only probe.
WavInfo read_wav_info(const std::filesystem::path &path);

// Reads PCM (8/16/24/32-bit integer) or 32/64-bit float WAV. Multi-channel
// files yield their first channel. When `expected_rate` is set, a different
// file rate is an error; there is no resampling.
AudioBuffer read_wav(const std::filesystem::path &path,
                     std::optional<int> expected_rate = std::nullopt);

// 16-bit PCM mono encoding. Samples outside the representable range are
// clipped and counted.
struct EncodedWav {
  std::vector<std::uint8_t> bytes;
  std::size_t clipped = 0;
};
EncodedWav encode_wav(const AudioBuffer &buffer);

// Returns the number of clipped samples.
std::size_t write_wav(const std::filesystem::path &path,
                      const AudioBuffer &buffer);

}  // namespace convsim

#endif  // CONVSIM_WAV_HPP_
