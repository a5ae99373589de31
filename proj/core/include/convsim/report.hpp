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

#ifndef CONVSIM_REPORT_HPP_
#define CONVSIM_REPORT_HPP_

#include <cstddef>
#include <ostream>
#include <span>
#include <string>

#include "convsim/rttm.hpp"

namespace convsim {

// Share of time with zero, one, or several active speakers. The pct_* fields
// are unweighted means over files; weighted_pct_* weight each file by its
// duration. For a single file both agree.
struct TimelineStats {
  std::size_t n_files = 0;
  double total_seconds = 0.0;
  double average_duration_s = 0.0;
  double pct_silence = 0.0;
  double pct_single_speaker = 0.0;
  double pct_overlap = 0.0;
  double weighted_pct_silence = 0.0;
  double weighted_pct_single_speaker = 0.0;
  double weighted_pct_overlap = 0.0;

  double total_audio_hours() const { return total_seconds / 3600.0; }
};

// Segment ends may exceed `duration` by at most this much (millisecond
// rounding of annotation times); they are clipped to the duration.
inline constexpr double kDurationSlack = 1e-3;

TimelineStats timeline_stats(const RecordingAnnotation &annotation,
                             double duration);

TimelineStats aggregate_stats(std::span<const TimelineStats> per_file);

struct ReportRow {
  std::string name;
  TimelineStats stats;
};

// Aligned table: Dataset, #files, Total audio (h), Average dur. (s), sil.,
// 1spk, over.
void print_table(std::ostream &os, std::span<const ReportRow> rows);

// `name.key=value` lines for every TimelineStats field.
void print_key_values(std::ostream &os, const ReportRow &row);

}  // namespace convsim

#endif  // CONVSIM_REPORT_HPP_
