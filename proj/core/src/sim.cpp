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

#include "convsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "convsim/error.hpp"
#include "convsim/wav.hpp"

namespace convsim {

namespace {

void validate_augment(const AugmentationConfig &a) {
  if (a.noise_enabled && a.snr_choices.empty())
    throw Error("noise enabled but no SNR choices given");
  for (double snr : a.snr_choices)
    if (!std::isfinite(snr)) throw Error("SNR choices must be finite");
  if (!(a.rir_probability >= 0.0 && a.rir_probability <= 1.0))
    throw Error("RIR probability must be in [0, 1]");
}

void check_resources(const AugmentationConfig &a, const Augmentations &aug,
                     int sample_rate) {
  if (a.noise_enabled && aug.noises.empty())
    throw Error("noise enabled but no noise recordings supplied");
  if (a.rir_enabled && a.rir_probability > 0.0 && aug.rirs.empty())
    throw Error("reverberation enabled but no RIRs supplied");
  for (const auto &n : aug.noises)
    if (n.audio.sample_rate != sample_rate)
      throw Error("noise '" + n.id + "' is " +
                  std::to_string(n.audio.sample_rate) + " Hz, expected " +
                  std::to_string(sample_rate) + " Hz");
  for (const auto &r : aug.rirs)
    if (r.impulse.sample_rate != sample_rate)
      throw Error("RIR '" + r.id + "' is " +
                  std::to_string(r.impulse.sample_rate) + " Hz, expected " +
                  std::to_string(sample_rate) + " Hz");
}

AudioBuffer load_checked(const Utterance &u, const AudioLoader &loader,
                         int sample_rate) {
  AudioBuffer audio = loader(u);
  if (audio.sample_rate != sample_rate)
    throw Error("utterance '" + u.id + "' is " +
                std::to_string(audio.sample_rate) + " Hz, expected " +
                std::to_string(sample_rate) + " Hz");
  return audio;
}

// Sample range of a VAD segment, clipped to the audio.
std::pair<std::size_t, std::size_t> segment_range(const Segment &seg,
                                                  std::size_t audio_size,
                                                  int sample_rate) {
  const auto clip = [audio_size](std::int64_t v) {
    return static_cast<std::size_t>(
        std::clamp<std::int64_t>(v, 0, static_cast<std::int64_t>(audio_size)));
  };
  return {clip(seconds_to_samples(seg.onset, sample_rate)),
          clip(seconds_to_samples(seg.offset(), sample_rate))};
}

const Rir *maybe_pick_rir(const AugmentationConfig &a,
                          std::span<const Rir> rirs, Rng &rng) {
  if (!a.rir_enabled || !bernoulli(a.rir_probability, rng)) return nullptr;
  return &rirs[uniform_index(rirs.size(), rng)];
}

double active_power(const AudioBuffer &y,
                    const std::vector<PlacedSegment> &placements) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(placements.size());
  for (const auto &p : placements) spans.emplace_back(p.start, p.end());
  std::sort(spans.begin(), spans.end());
  double acc = 0.0;
  std::size_t count = 0;
  std::size_t covered = 0;  // samples before this index already counted
  for (auto [b, e] : spans) {
    b = std::max(b, covered);
    e = std::min(e, y.size());
    for (std::size_t i = b; i < e; ++i) acc += y.samples[i] * y.samples[i];
    if (e > b) count += e - b;
    covered = std::max(covered, e);
  }
  return count == 0 ? 0.0 : acc / static_cast<double>(count);
}

// Tiles a sampled noise under `y` at a sampled SNR.
void add_background_noise(SimulatedConversation &conv,
                          const AugmentationConfig &a,
                          std::span<const NoiseRecord> noises, bool retain,
                          Rng &rng) {
  if (retain) conv.clean = conv.audio;
  if (!a.noise_enabled) return;
  const NoiseRecord &noise = noises[uniform_index(noises.size(), rng)];
  const double snr = a.snr_choices[uniform_index(a.snr_choices.size(), rng)];
  const AudioBuffer tiled = repeat_to_length(noise.audio, conv.audio.size());
  const double signal_power = a.snr_active_only
                                  ? active_power(conv.audio, conv.placements)
                                  : mean_power(conv.audio.samples);
  const double scale =
      mixing_scale(snr, signal_power, mean_power(tiled.samples));
  for (std::size_t i = 0; i < conv.audio.size(); ++i)
    conv.audio.samples[i] += scale * tiled.samples[i];
  conv.noise_id = noise.id;
  conv.snr_db = snr;
}

}  // namespace

void SimulationConfig::validate() const {
  if (n_spk == 0) throw Error("n_spk must be at least 1");
  if (sample_rate <= 0) throw Error("sample rate must be positive");
  validate_augment(augment);
}

void MixtureConfig::validate() const {
  if (n_spk == 0) throw Error("n_spk must be at least 1");
  if (sample_rate <= 0) throw Error("sample rate must be positive");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error("beta must be positive");
  if (min_segments == 0 || min_segments > max_segments)
    throw Error("segment window must satisfy 1 <= min <= max");
  validate_augment(augment);
}

AudioLoader wav_loader(int sample_rate) {
  return [sample_rate](const Utterance &u) {
    return read_wav(u.audio_path, sample_rate);
  };
}

RecordingAnnotation SimulatedConversation::annotation() const {
  RecordingAnnotation a;
  a.recording_id = recording_id;
  a.total_duration = audio.duration();
  const double sr = audio.sample_rate;
  for (const auto &p : placements)
    a.segments.push_back({recording_id, p.speaker,
                          Segment{static_cast<double>(p.start) / sr,
                                  static_cast<double>(p.length) / sr}});
  a.canonicalize();
  return a;
}

std::vector<InterleavedItem> interleave(std::span<const std::size_t> counts,
                                        Rng &rng) {
  std::vector<std::size_t> remaining(counts.begin(), counts.end());
  std::size_t total =
      std::accumulate(remaining.begin(), remaining.end(), std::size_t{0});
  if (total == 0) throw Error("interleave: all segment lists are empty");
  std::vector<std::size_t> next(counts.size(), 0);
  std::vector<InterleavedItem> out;
  out.reserve(total);
  // Picking the next speaker with probability proportional to its remaining
  // count makes every order-preserving interleaving equally likely.
  for (; total > 0; --total) {
    std::size_t r = uniform_index(total, rng);
    std::size_t s = 0;
    while (r >= remaining[s]) r -= remaining[s++];
    out.push_back({s, next[s]++});
    --remaining[s];
  }
  return out;
}

ConversationDraw draw_conversation(SpeakerPool &pool, std::size_t n_spk,
                                   Rng &rng) {
  ConversationDraw draw;
  for (const auto &spk : pool.sample_speakers(n_spk, rng))
    draw.utterances.push_back(&pool.draw_utterance(spk, rng));
  return draw;
}

SimulatedConversation assemble_conversation(const ConversationDraw &draw,
                                            const ConversationStats &stats,
                                            const Augmentations &aug,
                                            const SimulationConfig &config,
                                            Rng &rng, const AudioLoader &loader,
                                            std::string recording_id) {
  config.validate();
  check_resources(config.augment, aug, config.sample_rate);
  const std::size_t n = draw.utterances.size();

  SimulatedConversation conv;
  conv.recording_id = std::move(recording_id);
  conv.audio.sample_rate = config.sample_rate;
  conv.rir_ids.resize(n);

  // Per speaker: cut the VAD segments, reverberate them with one RIR.
  std::vector<std::vector<std::vector<double>>> pieces(n);
  std::vector<std::vector<std::size_t>> source_index(n);
  for (std::size_t s = 0; s < n; ++s) {
    const Utterance &u = *draw.utterances[s];
    const AudioBuffer audio = load_checked(u, loader, config.sample_rate);
    for (std::size_t k = 0; k < u.segments.size(); ++k) {
      auto [b, e] = segment_range(u.segments[k], audio.size(),
                                  config.sample_rate);
      if (e <= b) continue;
      pieces[s].emplace_back(audio.samples.begin() + static_cast<std::ptrdiff_t>(b),
                             audio.samples.begin() + static_cast<std::ptrdiff_t>(e));
      source_index[s].push_back(k);
    }
    if (const Rir *rir = maybe_pick_rir(config.augment, aug.rirs, rng)) {
      conv.rir_ids[s] = rir->id;
      for (auto &piece : pieces[s]) {
        AudioBuffer dry{std::move(piece), config.sample_rate};
        piece = convolve(dry, *rir).samples;
      }
    }
  }

  std::vector<std::size_t> counts(n);
  for (std::size_t s = 0; s < n; ++s) counts[s] = pieces[s].size();
  if (std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == 0)
    throw Error(conv.recording_id + ": drawn utterances have no usable segments");
  const auto order = interleave(counts, rng);

  std::vector<std::int64_t> speaker_end(n, 0);
  std::int64_t pos = 0;
  for (std::size_t t = 0; t < order.size(); ++t) {
    const auto [s, k] = order[t];
    const auto &piece = pieces[s][k];
    std::int64_t start = 0;
    if (t > 0) {
      double gap;
      if (order[t - 1].speaker == s)
        gap = sample_same_speaker_pause(stats, rng);
      else
        gap = sample_pause_or_overlap(stats, rng).value;
      start = pos + seconds_to_samples(gap, config.sample_rate);
      if (start < speaker_end[s]) {
        start = speaker_end[s];
        ++conv.clamped_overlaps;
      }
    }
    add_from_position(conv.audio, static_cast<std::size_t>(start), piece);
    const Utterance &u = *draw.utterances[s];
    conv.placements.push_back({u.speaker, static_cast<std::size_t>(start),
                               piece.size(), u.id, source_index[s][k]});
    pos = start + static_cast<std::int64_t>(piece.size());
    speaker_end[s] = pos;
  }

  add_background_noise(conv, config.augment, aug.noises, config.retain_clean,
                       rng);
  return conv;
}

SimulatedConversation simulate_conversation(SpeakerPool &pool,
                                            const ConversationStats &stats,
                                            const Augmentations &aug,
                                            const SimulationConfig &config,
                                            Rng &rng, const AudioLoader &loader,
                                            std::string recording_id) {
  config.validate();
  const ConversationDraw draw = draw_conversation(pool, config.n_spk, rng);
  return assemble_conversation(draw, stats, aug, config, rng, loader,
                               std::move(recording_id));
}

MixtureDraw draw_mixture(SpeakerPool &pool, const MixtureConfig &config,
                         Rng &rng) {
  config.validate();
  MixtureDraw draw;
  for (const auto &spk : pool.sample_speakers(config.n_spk, rng)) {
    const std::size_t window =
        config.min_segments +
        uniform_index(config.max_segments - config.min_segments + 1, rng);
    const Utterance *u = &pool.draw_utterance(spk, rng);
    for (std::size_t retry = 0; u->segments.size() < window; ++retry) {
      if (retry == config.max_retries)
        throw Error("speaker '" + spk + "': no utterance with at least " +
                    std::to_string(window) + " segments after " +
                    std::to_string(config.max_retries) + " retries");
      u = &pool.draw_utterance(spk, rng);
    }
    draw.utterances.push_back(u);
    draw.n_segments.push_back(window);
  }
  return draw;
}

MixtureChannel build_mixture_channel(const Utterance &utterance,
                                     std::size_t n_segments,
                                     const MixtureConfig &config,
                                     std::span<const Rir> rirs, Rng &rng,
                                     const AudioLoader &loader) {
  if (n_segments == 0 || utterance.segments.size() < n_segments)
    throw Error("utterance '" + utterance.id + "' has " +
                std::to_string(utterance.segments.size()) +
                " segments, window needs " + std::to_string(n_segments));
  const AudioBuffer audio = load_checked(utterance, loader, config.sample_rate);
  const std::size_t first =
      uniform_index(utterance.segments.size() - n_segments + 1, rng);
  std::exponential_distribution<double> pause(1.0 / config.beta);

  MixtureChannel ch;
  ch.audio.sample_rate = config.sample_rate;
  std::size_t pos = 0;
  for (std::size_t k = first; k < first + n_segments; ++k) {
    pos += static_cast<std::size_t>(
        seconds_to_samples(pause(rng), config.sample_rate));
    auto [b, e] =
        segment_range(utterance.segments[k], audio.size(), config.sample_rate);
    if (e <= b) continue;
    std::span<const double> piece(audio.samples.data() + b, e - b);
    add_from_position(ch.audio, pos, piece);
    ch.placements.push_back({utterance.speaker, pos, piece.size(),
                             utterance.id, k});
    pos += piece.size();
  }
  if (ch.audio.empty())
    throw Error("utterance '" + utterance.id + "': empty mixture channel");
  if (const Rir *rir = maybe_pick_rir(config.augment, rirs, rng)) {
    ch.audio = convolve(ch.audio, *rir);
    ch.rir_id = rir->id;
  }
  return ch;
}

SimulatedConversation assemble_mixture(const MixtureDraw &draw,
                                       const Augmentations &aug,
                                       const MixtureConfig &config, Rng &rng,
                                       const AudioLoader &loader,
                                       std::string recording_id) {
  config.validate();
  check_resources(config.augment, aug, config.sample_rate);
  SimulatedConversation conv;
  conv.recording_id = std::move(recording_id);
  conv.audio.sample_rate = config.sample_rate;

  const std::uint64_t channel_base = rng();
  for (std::size_t s = 0; s < draw.utterances.size(); ++s) {
    Rng channel_rng(derive_seed(channel_base, s));
    MixtureChannel ch =
        build_mixture_channel(*draw.utterances[s], draw.n_segments[s], config,
                              aug.rirs, channel_rng, loader);
    add_from_position(conv.audio, 0, ch.audio.samples);
    conv.placements.insert(conv.placements.end(), ch.placements.begin(),
                           ch.placements.end());
    conv.rir_ids.push_back(std::move(ch.rir_id));
  }
  add_background_noise(conv, config.augment, aug.noises, config.retain_clean,
                       rng);
  return conv;
}

SimulatedConversation simulate_mixture(SpeakerPool &pool,
                                       const Augmentations &aug,
                                       const MixtureConfig &config, Rng &rng,
                                       const AudioLoader &loader,
                                       std::string recording_id) {
  const MixtureDraw draw = draw_mixture(pool, config, rng);
  return assemble_mixture(draw, aug, config, rng, loader,
                          std::move(recording_id));
}

}  // namespace convsim
