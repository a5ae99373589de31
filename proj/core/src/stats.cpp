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

#include "convsim/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "convsim/error.hpp"

namespace convsim {

namespace {

constexpr const char *kStatsHeader = "convsim-stats v1";

double to_bin_centre(double value, double width) {
  return (std::floor(value / width) + 0.5) * width;
}

double sample_from(const std::vector<double> &values, const char *name,
                   Rng &rng) {
  if (values.empty())
    throw Error(std::string("cannot sample from empty ") + name +
                " distribution");
  return values[uniform_index(values.size(), rng)];
}

// Merges overlapping segments of the same speaker, keeping the canonical
// order of the result.
std::vector<LabeledSegment> merge_same_speaker(
    const RecordingAnnotation &annotation) {
  std::map<std::string, std::vector<Segment>> by_speaker;
  for (const auto &ls : annotation.segments)
    by_speaker[ls.speaker].push_back(ls.segment);
  RecordingAnnotation merged{annotation.recording_id, {}, {}};
  for (auto &[spk, segs] : by_speaker) {
    std::sort(segs.begin(), segs.end(), [](const Segment &a, const Segment &b) {
      return a.onset < b.onset;
    });
    std::vector<Segment> out;
    for (const Segment &s : segs) {
      if (!out.empty() && s.onset < out.back().offset()) {
        Segment &last = out.back();
        last.duration = std::max(last.offset(), s.offset()) - last.onset;
      } else {
        out.push_back(s);
      }
    }
    for (const Segment &s : out)
      merged.segments.push_back({annotation.recording_id, spk, s});
  }
  merged.canonicalize();
  return std::move(merged.segments);
}

std::string format_value(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    s += ".000";
  } else {
    while (s.size() - dot - 1 < 3) s += '0';
  }
  return s;
}

}  // namespace

double ConversationStats::pause_probability() const {
  if (!usable())
    throw Error("pause probability undefined: no different-speaker "
                "transitions observed");
  return static_cast<double>(ds()) / static_cast<double>(ds() + ov());
}

void ConversationStats::merge(const ConversationStats &other) {
  same_speaker_pauses.insert(same_speaker_pauses.end(),
                             other.same_speaker_pauses.begin(),
                             other.same_speaker_pauses.end());
  diff_speaker_pauses.insert(diff_speaker_pauses.end(),
                             other.diff_speaker_pauses.begin(),
                             other.diff_speaker_pauses.end());
  overlaps.insert(overlaps.end(), other.overlaps.begin(), other.overlaps.end());
}

ConversationStats estimate_recording(const RecordingAnnotation &annotation,
                                     const EstimateOptions &options) {
  ConversationStats stats;
  const auto segs = merge_same_speaker(annotation);
  const double w = options.bin_width;
  for (std::size_t t = 1; t < segs.size(); ++t) {
    const auto &prev = segs[t - 1];
    const auto &cur = segs[t];
    const double gap = cur.segment.onset - prev.segment.offset();
    if (prev.speaker == cur.speaker) {
      stats.same_speaker_pauses.push_back(w > 0 ? to_bin_centre(gap, w) : gap);
    } else if (gap >= 0.0) {
      stats.diff_speaker_pauses.push_back(w > 0 ? to_bin_centre(gap, w) : gap);
    } else {
      stats.overlaps.push_back(w > 0 ? to_bin_centre(-gap, w) : -gap);
    }
  }
  return stats;
}

ConversationStats estimate_stats(std::span<const RecordingAnnotation> recordings,
                                 const EstimateOptions &options) {
  if (options.bin_width < 0.0 || !std::isfinite(options.bin_width))
    throw Error("bin width must be a non-negative number");
  ConversationStats stats;
  for (const auto &rec : recordings)
    stats.merge(estimate_recording(rec, options));
  if (stats.observations() == 0)
    throw Error("no consecutive segment pairs found: statistics unusable");
  return stats;
}

double sample_same_speaker_pause(const ConversationStats &stats, Rng &rng) {
  return sample_from(stats.same_speaker_pauses, "same-speaker pause", rng);
}

double sample_diff_speaker_pause(const ConversationStats &stats, Rng &rng) {
  return sample_from(stats.diff_speaker_pauses, "different-speaker pause", rng);
}

double sample_overlap(const ConversationStats &stats, Rng &rng) {
  return sample_from(stats.overlaps, "overlap", rng);
}

GapSample sample_pause_or_overlap(const ConversationStats &stats, Rng &rng) {
  if (bernoulli(stats.pause_probability(), rng))
    return {sample_diff_speaker_pause(stats, rng), GapKind::kDiffSpeakerPause};
  return {-sample_overlap(stats, rng), GapKind::kOverlap};
}

void save_stats(const ConversationStats &stats, std::ostream &os) {
  os << kStatsHeader << '\n';
  auto section = [&os](const char *name, const std::vector<double> &values) {
    os << '[' << name << "]\n";
    for (double v : values) os << format_value(v) << '\n';
  };
  section("same_speaker", stats.same_speaker_pauses);
  section("diff_speaker", stats.diff_speaker_pauses);
  section("overlap", stats.overlaps);
}

ConversationStats load_stats(std::istream &is) {
  ConversationStats stats;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> *current = nullptr;
  bool in_overlap = false;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kStatsHeader)
        throw ParseError("expected header '" + std::string(kStatsHeader) + "'",
                         line_no);
      header_seen = true;
      continue;
    }
    if (line == "[same_speaker]") {
      current = &stats.same_speaker_pauses;
      in_overlap = false;
    } else if (line == "[diff_speaker]") {
      current = &stats.diff_speaker_pauses;
      in_overlap = false;
    } else if (line == "[overlap]") {
      current = &stats.overlaps;
      in_overlap = true;
    } else {
      if (current == nullptr)
        throw ParseError("value outside of a section", line_no);
      double v = 0.0;
      const char *end = line.data() + line.size();
      auto res = std::from_chars(line.data(), end, v);
      if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v))
        throw ParseError("malformed value '" + line + "'", line_no);
      if (v < 0.0 || (in_overlap && v == 0.0))
        throw ParseError(std::string(in_overlap ? "overlap" : "pause") +
                             " value must be " +
                             (in_overlap ? "positive" : "non-negative") +
                             ", got " + line,
                         line_no);
      current->push_back(v);
    }
  }
  if (!header_seen) throw ParseError("empty stats stream", 0);
  return stats;
}

}  // namespace convsim
