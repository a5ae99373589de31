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

#include "convsim/rttm.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "convsim/error.hpp"

namespace convsim {

namespace {

bool to_double(const std::string &s, double &out) {
  const char *end = s.data() + s.size();
  auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

}  // namespace

void RecordingAnnotation::canonicalize() {
  std::stable_sort(segments.begin(), segments.end(),
                   [](const LabeledSegment &a, const LabeledSegment &b) {
                     if (a.segment.onset != b.segment.onset)
                       return a.segment.onset < b.segment.onset;
                     if (a.speaker != b.speaker) return a.speaker < b.speaker;
                     return a.segment.duration < b.segment.duration;
                   });
}

std::vector<RecordingAnnotation> parse_rttm(std::istream &is) {
  std::vector<RecordingAnnotation> out;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.empty() || tok[0] != "SPEAKER") continue;
    if (tok.size() < 8)
      throw ParseError("SPEAKER line needs at least 8 fields, got " +
                           std::to_string(tok.size()),
                       line_no);
    LabeledSegment ls;
    ls.recording_id = tok[1];
    ls.speaker = tok[7];
    if (!to_double(tok[3], ls.segment.onset))
      throw ParseError("non-numeric onset '" + tok[3] + "'", line_no);
    if (!to_double(tok[4], ls.segment.duration))
      throw ParseError("non-numeric duration '" + tok[4] + "'", line_no);
    if (ls.segment.duration < 0.0)
      throw ParseError("negative duration " + tok[4], line_no);
    if (ls.segment.onset < 0.0)
      throw ParseError("negative onset " + tok[3], line_no);
    if (ls.segment.duration == 0.0) continue;

    auto [it, inserted] = index.try_emplace(ls.recording_id, out.size());
    if (inserted) out.push_back(RecordingAnnotation{ls.recording_id, {}, {}});
    out[it->second].segments.push_back(std::move(ls));
  }
  for (auto &a : out) a.canonicalize();
  return out;
}

std::vector<RecordingAnnotation> read_rttm_file(
    const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open RTTM " + path.string());
  try {
    return parse_rttm(is);
  } catch (const ParseError &e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

std::string format_seconds_ms(double seconds) {
  const std::int64_t ms = seconds_to_ms(seconds);
  const std::int64_t mag = ms < 0 ? -ms : ms;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", ms < 0 ? "-" : "",
                static_cast<long long>(mag / 1000),
                static_cast<long long>(mag % 1000));
  return buf;
}

void emit_rttm(const RecordingAnnotation &annotation, std::ostream &os) {
  RecordingAnnotation sorted = annotation;
  sorted.canonicalize();
  for (const auto &ls : sorted.segments) {
    os << "SPEAKER " << sorted.recording_id << " 1 "
       << format_seconds_ms(ls.segment.onset) << ' '
       << format_seconds_ms(ls.segment.duration) << " <NA> <NA> "
       << ls.speaker << " <NA> <NA>\n";
  }
}

std::string emit_rttm(const RecordingAnnotation &annotation) {
  std::ostringstream os;
  emit_rttm(annotation, os);
  return os.str();
}

}  // namespace convsim
