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

#ifndef CONVSIM_SIM_HPP_
#define CONVSIM_SIM_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "convsim/audio.hpp"
#include "convsim/corpus.hpp"
#include "convsim/random.hpp"
#include "convsim/rttm.hpp"
#include "convsim/stats.hpp"

namespace convsim {

// Background noise and reverberation settings shared by both generators.
struct AugmentationConfig {
  std::vector<double> snr_choices{5.0, 10.0, 15.0, 20.0};
  double rir_probability = 0.5;
  bool noise_enabled = true;
  bool rir_enabled = true;
  // Measure signal power over speech-covered samples only instead of the
  // whole conversation.
  bool snr_active_only = false;
};

struct SimulationConfig {
  std::size_t n_spk = 2;
  AugmentationConfig augment;
  std::uint64_t seed = 0;
  int sample_rate = kDefaultSampleRate;
  // Keep a copy of the noise-free mix in SimulatedConversation::clean.
  bool retain_clean = false;

  void validate() const;
};

struct MixtureConfig {
  std::size_t n_spk = 2;
  double beta = 2.0;  // mean pause length, seconds
  // Consecutive segments taken per speaker, drawn uniformly in [min, max].
  std::size_t min_segments = 10;
  std::size_t max_segments = 20;
  // Extra utterance draws allowed when one is too short for the window.
  std::size_t max_retries = 10;
  AugmentationConfig augment;
  std::uint64_t seed = 0;
  int sample_rate = kDefaultSampleRate;
  bool retain_clean = false;

  void validate() const;
};

struct Augmentations {
  std::span<const NoiseRecord> noises;
  std::span<const Rir> rirs;
};

// Returns the full audio of an utterance.
using AudioLoader = std::function<AudioBuffer(const Utterance &)>;
AudioLoader wav_loader(int sample_rate);

struct PlacedSegment {
  std::string speaker;
  std::size_t start = 0;   // samples
  std::size_t length = 0;  // samples
  std::string utterance_id;
  std::size_t source_index = 0;  // index into Utterance::segments

  std::size_t end() const { return start + length; }
  bool operator==(const PlacedSegment &) const = default;
};

struct SimulatedConversation {
  std::string recording_id;
  AudioBuffer audio;
  // Conversations: interleaving order. Mixtures: grouped by channel.
  std::vector<PlacedSegment> placements;
  std::size_t clamped_overlaps = 0;
  std::optional<AudioBuffer> clean;
  std::optional<double> snr_db;
  std::string noise_id;
  std::vector<std::string> rir_ids;  // per speaker slot, empty if dry

  RecordingAnnotation annotation() const;
};

struct InterleavedItem {
  std::size_t speaker = 0;  // index into the counts passed to interleave()
  std::size_t index = 0;    // position within that speaker's list

  bool operator==(const InterleavedItem &) const = default;
};

// Uniformly random merge of per-speaker lists with counts[s] items each,
// preserving each list's order.
std::vector<InterleavedItem> interleave(std::span<const std::size_t> counts,
                                        Rng &rng);

// Pool draws for one conversation: one utterance per sampled speaker.
struct ConversationDraw {
  std::vector<const Utterance *> utterances;
};
ConversationDraw draw_conversation(SpeakerPool &pool, std::size_t n_spk,
                                   Rng &rng);

// Builds a conversation from drawn utterances: optional per-speaker
// reverberation, random interleaving, gap-driven placement on one timeline
// and background noise at a sampled SNR.
//
// A sampled overlap that would start a segment before 0 or before the end of
// the same speaker's previous segment is clamped to that bound and counted in
// clamped_overlaps.
SimulatedConversation assemble_conversation(const ConversationDraw &draw,
                                            const ConversationStats &stats,
                                            const Augmentations &aug,
                                            const SimulationConfig &config,
                                            Rng &rng, const AudioLoader &loader,
                                            std::string recording_id);

SimulatedConversation simulate_conversation(SpeakerPool &pool,
                                            const ConversationStats &stats,
                                            const Augmentations &aug,
                                            const SimulationConfig &config,
                                            Rng &rng, const AudioLoader &loader,
                                            std::string recording_id = "sc");

struct MixtureDraw {
  std::vector<const Utterance *> utterances;
  std::vector<std::size_t> n_segments;  // window size per speaker
};
MixtureDraw draw_mixture(SpeakerPool &pool, const MixtureConfig &config,
                         Rng &rng);

// One speaker's independent channel: `n_segments` consecutive segments from a
// random window, each preceded by an exponential pause of mean beta, then
// optionally reverberated as a whole.
struct MixtureChannel {
  AudioBuffer audio;
  std::vector<PlacedSegment> placements;
  std::string rir_id;
};
MixtureChannel build_mixture_channel(const Utterance &utterance,
                                     std::size_t n_segments,
                                     const MixtureConfig &config,
                                     std::span<const Rir> rirs, Rng &rng,
                                     const AudioLoader &loader);

// Channels are built from per-slot generators derived from one draw of
// `rng`, so each channel is independent of how many other speakers exist.
SimulatedConversation assemble_mixture(const MixtureDraw &draw,
                                       const Augmentations &aug,
                                       const MixtureConfig &config, Rng &rng,
                                       const AudioLoader &loader,
                                       std::string recording_id);

SimulatedConversation simulate_mixture(SpeakerPool &pool,
                                       const Augmentations &aug,
                                       const MixtureConfig &config, Rng &rng,
                                       const AudioLoader &loader,
                                       std::string recording_id = "sm");

}  // namespace convsim

#endif  // CONVSIM_SIM_HPP_
