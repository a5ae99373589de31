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

// Fixtures shared by the unit and acceptance suites: temporary folders,
// synthetic speech-like audio, in-memory utterance pools and augmentation
// material.
#ifndef CONVSIM_TESTS_TEST_SUPPORT_HPP_
#define CONVSIM_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "convsim/audio.hpp"
#include "convsim/corpus.hpp"
#include "convsim/sim.hpp"
#include "convsim/wav.hpp"

namespace convsim::testing {

class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("convsim_test_" + std::to_string(rd()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path &path,
                       const std::string &text) {
  std::ofstream os(path, std::ios::trunc);
  os << text;
}

inline std::string read_bytes(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Non-silent, band-limited-ish signal with values well inside [-1, 1].
inline AudioBuffer synth_signal(std::size_t n, std::uint64_t seed,
                                int sample_rate = kDefaultSampleRate,
                                double amplitude = 0.3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(100.0, 900.0);
  const double f1 = freq(rng), f2 = freq(rng);
  AudioBuffer b;
  b.sample_rate = sample_rate;
  b.samples.resize(n);
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lp = 0.7 * lp + 0.3 * u(rng);
    const double t = static_cast<double>(i) / sample_rate;
    b.samples[i] = amplitude * (0.5 * std::sin(2 * M_PI * f1 * t) +
                                0.3 * std::sin(2 * M_PI * f2 * t) + 0.4 * lp);
  }
  return b;
}

// Decaying random impulse response with a unit direct path.
inline Rir synth_rir(std::string id, std::size_t taps, std::uint64_t seed,
                     int sample_rate = kDefaultSampleRate) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Rir r;
  r.id = std::move(id);
  r.impulse.sample_rate = sample_rate;
  r.impulse.samples.resize(taps);
  r.impulse.samples[0] = 1.0;
  for (std::size_t i = 1; i < taps; ++i)
    r.impulse.samples[i] =
        0.3 * g(rng) * std::exp(-6.0 * static_cast<double>(i) / taps);
  return r;
}

inline NoiseRecord synth_noise(std::string id, std::size_t n,
                               std::uint64_t seed,
                               int sample_rate = kDefaultSampleRate) {
  return {std::move(id), synth_signal(n, seed, sample_rate, 0.1)};
}

struct PoolSpec {
  std::size_t speakers = 10;
  std::size_t utterances_per_speaker = 4;
  std::size_t min_segments = 10;
  std::size_t max_segments = 30;
  // Lognormal segment length (seconds) and exponential intra-utterance pause.
  double segment_log_mean = std::log(3.0) - 0.18;
  double segment_log_sigma = 0.6;
  double min_segment = 0.3;
  double max_segment = 12.0;
  double mean_pause = 1.0;
  int sample_rate = kDefaultSampleRate;
  std::uint64_t seed = 1;
};

// Utterances whose audio lives in memory; loader() serves it by id.
struct MemoryCorpus {
  std::vector<Utterance> utterances;
  std::shared_ptr<std::map<std::string, AudioBuffer>> audio =
      std::make_shared<std::map<std::string, AudioBuffer>>();

  AudioLoader loader() const {
    auto store = audio;
    return [store](const Utterance &u) { return store->at(u.id); };
  }
  SpeakerPool pool(std::size_t max_refills = 0) const {
    return SpeakerPool(utterances, max_refills);
  }
};

inline MemoryCorpus make_memory_corpus(const PoolSpec &spec) {
  MemoryCorpus corpus;
  std::mt19937_64 rng(spec.seed);
  std::lognormal_distribution<double> seg_len(spec.segment_log_mean,
                                              spec.segment_log_sigma);
  std::exponential_distribution<double> pause(1.0 / spec.mean_pause);
  std::uniform_int_distribution<std::size_t> nseg(spec.min_segments,
                                                  spec.max_segments);
  for (std::size_t s = 0; s < spec.speakers; ++s) {
    for (std::size_t k = 0; k < spec.utterances_per_speaker; ++k) {
      Utterance u;
      u.speaker = "spk" + std::to_string(s);
      u.id = u.speaker + "_utt" + std::to_string(k);
      u.audio_path = u.id + ".wav";
      // Times on the millisecond grid so manifests round-trip exactly.
      double t = std::round(pause(rng) * 1000.0) / 1000.0;
      const std::size_t n = nseg(rng);
      for (std::size_t i = 0; i < n; ++i) {
        double len = std::clamp(seg_len(rng), spec.min_segment, spec.max_segment);
        len = std::round(len * 1000.0) / 1000.0;
        u.segments.push_back({t, len});
        t += len + std::round((0.05 + pause(rng)) * 1000.0) / 1000.0;
      }
      const auto n_samples =
          static_cast<std::size_t>(std::ceil((t + 0.5) * spec.sample_rate));
      (*corpus.audio)[u.id] = synth_signal(n_samples, rng(), spec.sample_rate);
      corpus.utterances.push_back(std::move(u));
    }
  }
  return corpus;
}

inline std::string format_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Writes every utterance as a WAV file plus `manifest.tsv` into `dir`.
inline std::filesystem::path write_corpus(const MemoryCorpus &corpus,
                                          const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.tsv");
  manifest << "# utterance\tspeaker\twav\tsegments\n";
  for (const auto &u : corpus.utterances) {
    write_wav(dir / u.audio_path, corpus.audio->at(u.id));
    manifest << u.id << '\t' << u.speaker << '\t' << u.audio_path.string()
             << '\t';
    for (std::size_t i = 0; i < u.segments.size(); ++i)
      manifest << (i ? "," : "") << format_ms(u.segments[i].onset) << ':'
               << format_ms(u.segments[i].duration);
    manifest << '\n';
  }
  return dir / "manifest.tsv";
}

// `id<TAB>file` list of WAVs written into `dir`.
template <typename Records, typename Audio>
std::filesystem::path write_audio_list(const Records &records, Audio audio_of,
                                       const std::filesystem::path &dir,
                                       const std::string &list_name) {
  std::filesystem::create_directories(dir);
  std::ofstream list(dir / list_name);
  for (const auto &r : records) {
    const std::string file = r.id + ".wav";
    write_wav(dir / file, audio_of(r));
    list << r.id << '\t' << file << '\n';
  }
  return dir / list_name;
}

}  // namespace convsim::testing

#endif  // CONVSIM_TESTS_TEST_SUPPORT_HPP_
