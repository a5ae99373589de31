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

#ifndef CONVSIM_RTTM_HPP_
#define CONVSIM_RTTM_HPP_

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "convsim/segment.hpp"

namespace convsim {

struct LabeledSegment {
  std::string recording_id;
  std::string speaker;
  Segment segment;

  bool operator==(const LabeledSegment &) const = default;
};

struct RecordingAnnotation {
  std::string recording_id;
  std::optional<double> total_duration;
  std::vector<LabeledSegment> segments;

  // Sorts segments by (onset, speaker, duration).
  void canonicalize();
  bool operator==(const RecordingAnnotation &) const = default;
};

// Reads SPEAKER lines; every other line type is skipped. One annotation per
// recording id, in order of first appearance, each canonically sorted.
// Zero-length segments are dropped.
std::vector<RecordingAnnotation> parse_rttm(std::istream &is);
std::vector<RecordingAnnotation> read_rttm_file(
    const std::filesystem::path &path);

// `SPEAKER <rec> 1 <onset> <dur> <NA> <NA> <spk> <NA> <NA>` per segment,
// canonical order, times in milliseconds rounded half to even.
void emit_rttm(const RecordingAnnotation &annotation, std::ostream &os);
std::string emit_rttm(const RecordingAnnotation &annotation);

// Seconds with exactly three decimals, e.g. 1.2345 -> "1.234".
std::string format_seconds_ms(double seconds);

}  // namespace convsim

#endif  // CONVSIM_RTTM_HPP_
