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

#include "convsim/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <set>
#include <string_view>

#include "convsim/error.hpp"
#include "convsim/wav.hpp"

namespace convsim {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(std::string_view s, double &out) {
  while (!s.empty() && (s.front() == ' ')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ')) s.remove_suffix(1);
  if (s.empty()) return false;
  const auto *end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

}  // namespace

std::vector<Segment> merge_segments(std::vector<Segment> segments) {
  std::sort(segments.begin(), segments.end(),
            [](const Segment &a, const Segment &b) {
              return a.onset < b.onset ||
                     (a.onset == b.onset && a.duration < b.duration);
            });
  std::vector<Segment> merged;
  for (const Segment &s : segments) {
    if (!merged.empty() && s.onset <= merged.back().offset()) {
      Segment &last = merged.back();
      last.duration = std::max(last.offset(), s.offset()) - last.onset;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

SpeakerPool::SpeakerPool(std::vector<Utterance> utterances,
                         std::size_t max_refills)
    : max_refills_(max_refills) {
  std::set<std::string> ids;
  for (auto &u : utterances) {
    if (!ids.insert(u.id).second)
      throw Error("duplicate utterance id '" + u.id + "'");
    speakers_[u.speaker].utterances.push_back(std::move(u));
  }
  refill();
  refill_count_ = 0;
}

std::size_t SpeakerPool::utterance_count() const {
  std::size_t n = 0;
  for (const auto &[spk, e] : speakers_) n += e.utterances.size();
  return n;
}

std::vector<std::string> SpeakerPool::speakers() const {
  std::vector<std::string> out;
  out.reserve(speakers_.size());
  for (const auto &[spk, e] : speakers_) out.push_back(spk);
  return out;
}

bool SpeakerPool::has_speaker(const std::string &speaker) const {
  return speakers_.count(speaker) > 0;
}

const std::vector<Utterance> &SpeakerPool::utterances_of(
    const std::string &speaker) const {
  auto it = speakers_.find(speaker);
  if (it == speakers_.end())
    throw Error("unknown speaker '" + speaker + "'");
  return it->second.utterances;
}

std::size_t SpeakerPool::available(const std::string &speaker) const {
  auto it = speakers_.find(speaker);
  return it == speakers_.end() ? 0 : it->second.remaining.size();
}

void SpeakerPool::refill() {
  for (auto &[spk, e] : speakers_) {
    e.remaining.resize(e.utterances.size());
    std::iota(e.remaining.begin(), e.remaining.end(), std::size_t{0});
  }
  ++refill_count_;
}

bool SpeakerPool::try_refill() {
  if (refill_count_ >= max_refills_) return false;
  refill();
  return true;
}

std::vector<std::string> SpeakerPool::sample_speakers(std::size_t n,
                                                      Rng &rng) {
  if (n == 0) throw Error("sample_speakers: n_spk must be positive");
  if (speakers_.size() < n)
    throw PoolExhausted("pool has " + std::to_string(speakers_.size()) +
                        " speakers, " + std::to_string(n) + " requested");
  auto eligible = [this] {
    std::vector<std::string> out;
    for (const auto &[spk, e] : speakers_)
      if (!e.remaining.empty()) out.push_back(spk);
    return out;
  };
  std::vector<std::string> candidates = eligible();
  if (candidates.size() < n) {
    if (!try_refill())
      throw PoolExhausted("only " + std::to_string(candidates.size()) +
                          " speakers with unused utterances left, " +
                          std::to_string(n) +
                          " requested; refill limit reached (" +
                          std::to_string(max_refills_) + ")");
    candidates = eligible();
  }
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + uniform_index(candidates.size() - i, rng);
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(n);
  return candidates;
}

const Utterance &SpeakerPool::draw_utterance(const std::string &speaker,
                                             Rng &rng) {
  auto it = speakers_.find(speaker);
  if (it == speakers_.end())
    throw Error("unknown speaker '" + speaker + "'");
  Entry &e = it->second;
  if (e.remaining.empty() && !try_refill())
    throw PoolExhausted("speaker '" + speaker +
                        "' has no unused utterances; refill limit reached (" +
                        std::to_string(max_refills_) + ")");
  const std::size_t k = uniform_index(e.remaining.size(), rng);
  const std::size_t index = e.remaining[k];
  e.remaining[k] = e.remaining.back();
  e.remaining.pop_back();
  return e.utterances[index];
}

std::vector<Utterance> parse_manifest(std::istream &is,
                                      const std::filesystem::path &base_dir,
                                      const ManifestOptions &options) {
  std::vector<Utterance> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 4)
      throw ParseError("expected 4 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    Utterance u;
    u.id = std::string(fields[0]);
    u.speaker = std::string(fields[1]);
    u.audio_path = std::string(fields[2]);
    if (u.id.empty() || u.speaker.empty() || u.audio_path.empty())
      throw ParseError("empty utterance, speaker or path field", line_no);
    if (u.audio_path.is_relative()) u.audio_path = base_dir / u.audio_path;
    if (fields[3].empty())
      throw ParseError("utterance '" + u.id + "' has no segments", line_no);

    for (std::string_view item : split(fields[3], ',')) {
      const auto colon = item.find(':');
      Segment seg;
      if (colon == std::string_view::npos ||
          !parse_double(item.substr(0, colon), seg.onset) ||
          !parse_double(item.substr(colon + 1), seg.duration))
        throw ParseError("utterance '" + u.id + "': malformed segment '" +
                             std::string(item) + "'",
                         line_no);
      if (!seg.valid())
        throw ParseError("utterance '" + u.id + "': invalid segment '" +
                             std::string(item) +
                             "' (onset must be >= 0, duration > 0)",
                         line_no);
      u.segments.push_back(seg);
    }
    u.segments = merge_segments(std::move(u.segments));

    if (options.check_audio) {
      const WavInfo info = read_wav_info(u.audio_path);
      if (options.sample_rate && info.sample_rate != *options.sample_rate)
        throw Error("utterance '" + u.id + "': " + u.audio_path.string() +
                    " is " + std::to_string(info.sample_rate) +
                    " Hz, corpus rate is " +
                    std::to_string(*options.sample_rate) + " Hz");
      // One sample of slack for millisecond-rounded VAD output.
      const double limit = info.duration() + 1.0 / info.sample_rate;
      if (u.segments.back().offset() > limit)
        throw Error("utterance '" + u.id + "': segment ends at " +
                    std::to_string(u.segments.back().offset()) +
                    " s, audio is " + std::to_string(info.duration()) + " s");
    }
    out.push_back(std::move(u));
  }
  return out;
}

SpeakerPool load_manifest(const std::filesystem::path &path,
                          const ManifestOptions &options,
                          std::size_t max_refills) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open manifest " + path.string());
  try {
    return SpeakerPool(parse_manifest(is, path.parent_path(), options),
                       max_refills);
  } catch (const ParseError &e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

}  // namespace convsim
