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

#ifndef CONVSIM_STATS_HPP_
#define CONVSIM_STATS_HPP_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "convsim/random.hpp"
#include "convsim/rttm.hpp"

namespace convsim {

// Turn-taking statistics of real conversations: the observed gaps between
// consecutive segments, split by whether the speaker changes and, if it does,
// whether the gap is a pause or an overlap. Distributions are the empirical
// multisets themselves.
struct ConversationStats {
  std::vector<double> same_speaker_pauses;  // >= 0
  std::vector<double> diff_speaker_pauses;  // >= 0
  std::vector<double> overlaps;             // > 0, stored as lengths

  std::size_t ds() const { return diff_speaker_pauses.size(); }
  std::size_t ov() const { return overlaps.size(); }
  std::size_t observations() const {
    return same_speaker_pauses.size() + ds() + ov();
  }
  bool usable() const { return ds() + ov() >= 1; }

  // ds / (ds + ov). Throws when there are no different-speaker transitions.
  double pause_probability() const;

  void merge(const ConversationStats &other);
  bool operator==(const ConversationStats &) const = default;
};

enum class GapKind { kSameSpeakerPause, kDiffSpeakerPause, kOverlap };

// Signed gap in seconds; negative exactly when kind is kOverlap.
struct GapSample {
  double value = 0.0;
  GapKind kind = GapKind::kSameSpeakerPause;
};

struct EstimateOptions {
  // When positive, every observation is replaced by the centre of its
  // [k*w, (k+1)*w) bin, turning the empirical distribution into a histogram.
  double bin_width = 0.0;
};

// Gaps of one recording. Overlapping same-speaker segments are merged first;
// "consecutive" follows the canonical (onset, speaker) order.
ConversationStats estimate_recording(const RecordingAnnotation &annotation,
                                     const EstimateOptions &options = {});

// Pools the gaps of all recordings with equal weight. Throws if no pair of
// consecutive segments exists anywhere.
ConversationStats estimate_stats(std::span<const RecordingAnnotation> recordings,
                                 const EstimateOptions &options = {});

double sample_same_speaker_pause(const ConversationStats &stats, Rng &rng);
double sample_diff_speaker_pause(const ConversationStats &stats, Rng &rng);
double sample_overlap(const ConversationStats &stats, Rng &rng);

// Bernoulli(p) chooses a pause (value >= 0) over an overlap (value < 0).
GapSample sample_pause_or_overlap(const ConversationStats &stats, Rng &rng);

// Text format: `convsim-stats v1` header, then [same_speaker], [diff_speaker]
// and [overlap] sections with one value in seconds per line. Values are
// written in shortest round-trip form with at least three decimals.
void save_stats(const ConversationStats &stats, std::ostream &os);
ConversationStats load_stats(std::istream &is);

}  // namespace convsim

#endif  // CONVSIM_STATS_HPP_
