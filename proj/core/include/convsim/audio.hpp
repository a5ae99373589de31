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

#ifndef CONVSIM_AUDIO_HPP_
#define CONVSIM_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace convsim {

inline constexpr int kDefaultSampleRate = 8000;

// Mono signal. Samples are nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  bool operator==(const AudioBuffer &) const = default;
};

struct Rir {
  std::string id;
  AudioBuffer impulse;
};

struct NoiseRecord {
  std::string id;
  AudioBuffer audio;
};

enum class ConvolutionMethod { kAuto, kDirect, kFft };

// Full linear convolution of signal and impulse, truncated to the signal
// length. No gain normalization. kAuto picks the FFT path when it is cheaper.
std::vector<double> convolve_truncated(
    std::span<const double> signal, std::span<const double> impulse,
    ConvolutionMethod method = ConvolutionMethod::kAuto);

// Reverberates `signal` with `rir`: truncated convolution followed by a gain
// that restores the input RMS. Throws on empty input or rate mismatch.
AudioBuffer convolve(const AudioBuffer &signal, const Rir &rir,
                     ConvolutionMethod method = ConvolutionMethod::kAuto);

// Mean squared amplitude; 0 for an empty span.
double mean_power(std::span<const double> samples);

// Scale for `noise` so that P_signal / (scale^2 * P_noise) equals snr_db.
double mixing_scale(double snr_db, double signal_power, double noise_power);
double mixing_scale(double snr_db, const AudioBuffer &signal,
                    const AudioBuffer &noise);

// Noise tiled end to end and cut to exactly `length` samples.
AudioBuffer repeat_to_length(const AudioBuffer &noise, std::size_t length);

// Adds `input` onto `out` starting at sample `pos`, zero-extending `out` when
// the input runs past its end.
void add_from_position(AudioBuffer &out, std::size_t pos,
                       std::span<const double> input);

// `id<TAB>wav_path` lists. Relative paths resolve against the list's folder.
std::vector<Rir> load_rirs(const std::filesystem::path &list, int sample_rate);
std::vector<NoiseRecord> load_noises(const std::filesystem::path &list,
                                     int sample_rate);

}  // namespace convsim

#endif  // CONVSIM_AUDIO_HPP_
