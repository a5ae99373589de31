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

#include "convsim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <vector>

#include "convsim/error.hpp"

namespace convsim {

namespace {

struct Event {
  double time;
  int delta;
};

std::string fmt(const char *spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

TimelineStats timeline_stats(const RecordingAnnotation &annotation,
                             double duration) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw Error(annotation.recording_id + ": duration must be positive");

  // Same-speaker overlaps count once: union per speaker first.
  std::map<std::string, std::vector<std::pair<double, double>>> by_speaker;
  for (const auto &ls : annotation.segments) {
    const double end = ls.segment.offset();
    if (end > duration + kDurationSlack)
      throw Error(annotation.recording_id + ": segment of " + ls.speaker +
                  " ends at " + std::to_string(end) + " s, past duration " +
                  std::to_string(duration) + " s");
    by_speaker[ls.speaker].emplace_back(ls.segment.onset,
                                        std::min(end, duration));
  }
  std::vector<Event> events;
  for (auto &[spk, spans] : by_speaker) {
    std::sort(spans.begin(), spans.end());
    double b = spans.front().first, e = spans.front().second;
    for (const auto &[sb, se] : spans) {
      if (sb > e) {
        events.push_back({b, +1});
        events.push_back({e, -1});
        b = sb;
        e = se;
      } else {
        e = std::max(e, se);
      }
    }
    events.push_back({b, +1});
    events.push_back({e, -1});
  }
  std::sort(events.begin(), events.end(), [](const Event &x, const Event &y) {
    return x.time < y.time || (x.time == y.time && x.delta < y.delta);
  });

  double time_by_k[3] = {0.0, 0.0, 0.0};  // 0, 1, >= 2 speakers
  int active = 0;
  double cursor = 0.0;
  for (const Event &ev : events) {
    const double t = std::clamp(ev.time, 0.0, duration);
    time_by_k[std::min(active, 2)] += t - cursor;
    cursor = t;
    active += ev.delta;
  }
  time_by_k[0] += duration - cursor;

  TimelineStats s;
  s.n_files = 1;
  s.total_seconds = duration;
  s.average_duration_s = duration;
  s.pct_silence = 100.0 * time_by_k[0] / duration;
  s.pct_single_speaker = 100.0 * time_by_k[1] / duration;
  s.pct_overlap = 100.0 * time_by_k[2] / duration;
  s.weighted_pct_silence = s.pct_silence;
  s.weighted_pct_single_speaker = s.pct_single_speaker;
  s.weighted_pct_overlap = s.pct_overlap;
  return s;
}

TimelineStats aggregate_stats(std::span<const TimelineStats> per_file) {
  if (per_file.empty()) throw Error("aggregate_stats: no files");
  TimelineStats agg;
  double files = 0.0;
  for (const auto &f : per_file) {
    agg.n_files += f.n_files;
    agg.total_seconds += f.total_seconds;
    const double n = static_cast<double>(f.n_files);
    files += n;
    agg.pct_silence += f.pct_silence * n;
    agg.pct_single_speaker += f.pct_single_speaker * n;
    agg.pct_overlap += f.pct_overlap * n;
    agg.weighted_pct_silence += f.weighted_pct_silence * f.total_seconds;
    agg.weighted_pct_single_speaker +=
        f.weighted_pct_single_speaker * f.total_seconds;
    agg.weighted_pct_overlap += f.weighted_pct_overlap * f.total_seconds;
  }
  agg.average_duration_s = agg.total_seconds / files;
  agg.pct_silence /= files;
  agg.pct_single_speaker /= files;
  agg.pct_overlap /= files;
  agg.weighted_pct_silence /= agg.total_seconds;
  agg.weighted_pct_single_speaker /= agg.total_seconds;
  agg.weighted_pct_overlap /= agg.total_seconds;
  return agg;
}

void print_table(std::ostream &os, std::span<const ReportRow> rows) {
  std::size_t name_w = 7;
  for (const auto &r : rows) name_w = std::max(name_w, r.name.size());
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %8s %10s %10s %7s %7s %7s\n",
                static_cast<int>(name_w), "Dataset", "#files", "audio(h)",
                "avgdur(s)", "sil.", "1spk", "over.");
  os << line;
  for (const auto &r : rows) {
    const auto &s = r.stats;
    std::snprintf(line, sizeof line,
                  "%-*s %8zu %10.2f %10.2f %7.2f %7.2f %7.2f\n",
                  static_cast<int>(name_w), r.name.c_str(), s.n_files,
                  s.total_audio_hours(), s.average_duration_s, s.pct_silence,
                  s.pct_single_speaker, s.pct_overlap);
    os << line;
  }
}

void print_key_values(std::ostream &os, const ReportRow &row) {
  const auto &s = row.stats;
  const std::string p = row.name + ".";
  os << p << "n_files=" << s.n_files << '\n'
     << p << "total_audio_hours=" << fmt("%.6f", s.total_audio_hours()) << '\n'
     << p << "average_duration_s=" << fmt("%.6f", s.average_duration_s) << '\n'
     << p << "pct_silence=" << fmt("%.6f", s.pct_silence) << '\n'
     << p << "pct_single_speaker=" << fmt("%.6f", s.pct_single_speaker) << '\n'
     << p << "pct_overlap=" << fmt("%.6f", s.pct_overlap) << '\n'
     << p << "weighted_pct_silence=" << fmt("%.6f", s.weighted_pct_silence)
     << '\n'
     << p << "weighted_pct_single_speaker="
     << fmt("%.6f", s.weighted_pct_single_speaker) << '\n'
     << p << "weighted_pct_overlap=" << fmt("%.6f", s.weighted_pct_overlap)
     << '\n';
}

}  // namespace convsim
