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

#ifndef CONVSIM_CORPUS_HPP_
#define CONVSIM_CORPUS_HPP_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "convsim/random.hpp"
#include "convsim/segment.hpp"

namespace convsim {

// One speaker's side of a source recording: its audio and the VAD segments
// that belong to that speaker.
struct Utterance {
  std::string id;
  std::string speaker;
  std::filesystem::path audio_path;
  std::vector<Segment> segments;  // sorted, pairwise disjoint

  bool operator==(const Utterance &) const = default;
};

// Sorts by onset and merges segments that overlap or touch.
std::vector<Segment> merge_segments(std::vector<Segment> segments);

struct ManifestOptions {
  // Probe each WAV header: check the rate and that no segment runs past the
  // end of the audio.
  bool check_audio = true;
  std::optional<int> sample_rate;
};

// Pool of utterances grouped by speaker, drawn without replacement.
//
// A cycle ends when a request cannot be served from the un-consumed
// utterances. The pool then restores every utterance (a refill) if fewer than
// max_refills refills happened so far, and throws PoolExhausted otherwise.
class SpeakerPool {
 public:
  SpeakerPool() = default;
  explicit SpeakerPool(std::vector<Utterance> utterances,
                       std::size_t max_refills = 0);

  std::size_t speaker_count() const { return speakers_.size(); }
  std::size_t utterance_count() const;
  std::vector<std::string> speakers() const;
  bool has_speaker(const std::string &speaker) const;
  const std::vector<Utterance> &utterances_of(const std::string &speaker) const;
  // Un-consumed utterances for the speaker in the current cycle.
  std::size_t available(const std::string &speaker) const;

  std::size_t refill_count() const { return refill_count_; }
  std::size_t max_refills() const { return max_refills_; }
  void set_max_refills(std::size_t n) { max_refills_ = n; }

  // n distinct speakers, uniformly among those with at least one un-consumed
  // utterance, in random order.
  std::vector<std::string> sample_speakers(std::size_t n, Rng &rng);

  // Uniformly chosen un-consumed utterance of `speaker`, marked consumed. The
  // reference stays valid for the pool's lifetime.
  const Utterance &draw_utterance(const std::string &speaker, Rng &rng);

  void refill();

  bool operator==(const SpeakerPool &) const = default;

 private:
  struct Entry {
    std::vector<Utterance> utterances;
    std::vector<std::size_t> remaining;
    bool operator==(const Entry &) const = default;
  };
  bool try_refill();

  std::map<std::string, Entry> speakers_;
  std::size_t refill_count_ = 0;
  std::size_t max_refills_ = 0;
};

// Manifest lines: `utterance_id<TAB>speaker_id<TAB>wav_path<TAB>segments`,
// segments as `onset:duration[,onset:duration...]` in seconds. `#` starts a
// comment line. Relative wav paths resolve against `base_dir`.
std::vector<Utterance> parse_manifest(std::istream &is,
                                      const std::filesystem::path &base_dir,
                                      const ManifestOptions &options = {});

SpeakerPool load_manifest(const std::filesystem::path &path,
                          const ManifestOptions &options = {},
                          std::size_t max_refills = 0);

}  // namespace convsim

#endif  // CONVSIM_CORPUS_HPP_
