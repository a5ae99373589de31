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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "convsim/error.hpp"
#include "convsim/stats.hpp"

namespace convsim {
namespace {

RecordingAnnotation rec(std::initializer_list<std::tuple<const char *, double, double>> segs) {
  RecordingAnnotation a{"r", std::nullopt, {}};
  for (auto [spk, b, e] : segs) a.segments.push_back({"r", spk, {b, e - b}});
  a.canonicalize();
  return a;
}

ConversationStats estimate_one(const RecordingAnnotation &a) {
  return estimate_stats(std::span<const RecordingAnnotation>(&a, 1));
}

TEST(Estimate, SameSpeakerPair) {
  const auto s = estimate_one(rec({{"A", 0, 1}, {"A", 2, 3}}));
  EXPECT_EQ(s.same_speaker_pauses, std::vector<double>{1.0});
  EXPECT_EQ(s.ds(), 0u);
  EXPECT_EQ(s.ov(), 0u);
  EXPECT_FALSE(s.usable());
  EXPECT_THROW(s.pause_probability(), Error);
}

TEST(Estimate, DifferentSpeakerOverlap) {
  const auto s = estimate_one(rec({{"A", 0, 2}, {"B", 1.5, 3}}));
  ASSERT_EQ(s.ov(), 1u);
  EXPECT_DOUBLE_EQ(s.overlaps[0], 0.5);
  EXPECT_EQ(s.pause_probability(), 0.0);
}

TEST(Estimate, DifferentSpeakerPauses) {
  const auto s = estimate_one(rec({{"A", 0, 1}, {"B", 2, 3}, {"A", 3.5, 4}}));
  EXPECT_EQ(s.diff_speaker_pauses, (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(s.ds(), 2u);
  EXPECT_EQ(s.ov(), 0u);
  EXPECT_EQ(s.pause_probability(), 1.0);
}

TEST(Estimate, AbutmentIsZeroPause) {
  const auto s = estimate_one(rec({{"A", 0, 1}, {"B", 1, 2}}));
  EXPECT_EQ(s.diff_speaker_pauses, std::vector<double>{0.0});
  EXPECT_EQ(s.ov(), 0u);
}

TEST(Estimate, SameSpeakerOverlapMergedFirst) {
  // A's two segments overlap -> one A segment [0,3]; then B at 4.
  const auto s = estimate_one(rec({{"A", 0, 2}, {"A", 1, 3}, {"B", 4, 5}}));
  EXPECT_TRUE(s.same_speaker_pauses.empty());
  EXPECT_EQ(s.diff_speaker_pauses, std::vector<double>{1.0});
}

TEST(Estimate, PoolsRecordingsAndRejectsEmpty) {
  std::vector<RecordingAnnotation> recs{rec({{"A", 0, 1}, {"B", 2, 3}}),
                                        rec({{"A", 0, 1}}),
                                        rec({{"A", 0, 2}, {"B", 1, 3}})};
  const auto s = estimate_stats(recs);
  EXPECT_EQ(s.ds(), 1u);
  EXPECT_EQ(s.ov(), 1u);
  EXPECT_DOUBLE_EQ(s.pause_probability(), 0.5);

  std::vector<RecordingAnnotation> lonely{rec({{"A", 0, 1}})};
  EXPECT_THROW(estimate_stats(lonely), Error);
  EXPECT_THROW(estimate_stats({}), Error);
}

TEST(Estimate, BinWidthQuantizes) {
  EstimateOptions o;
  o.bin_width = 0.5;
  const auto a = rec({{"A", 0, 1}, {"B", 1.7, 2}, {"A", 2.1, 3}});
  const auto s = estimate_stats(std::span<const RecordingAnnotation>(&a, 1), o);
  // gaps 0.7 -> bin [0.5,1) centre 0.75; 0.1 -> [0,0.5) centre 0.25
  EXPECT_EQ(s.diff_speaker_pauses, (std::vector<double>{0.75, 0.25}));
}

// n segments with disjoint same-speaker material give exactly n-1 gaps,
// split consistently with the sign of each gap.
TEST(Estimate, PairingCompletenessProperty) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    RecordingAnnotation a{"r", std::nullopt, {}};
    std::vector<double> speaker_end(3, 0.0);
    const std::size_t n = 2 + uniform_index(40, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t spk = uniform_index(3, rng);
      const double onset =
          speaker_end[spk] + static_cast<double>(1 + uniform_index(3000, rng)) / 1000.0;
      const double dur = static_cast<double>(1 + uniform_index(4000, rng)) / 1000.0;
      a.segments.push_back({"r", "s" + std::to_string(spk), {onset, dur}});
      speaker_end[spk] = onset + dur;
    }
    a.canonicalize();
    const auto s = estimate_recording(a);
    ASSERT_EQ(s.observations(), n - 1);
    std::size_t same = 0, pauses = 0, overlaps = 0;
    for (std::size_t t = 1; t < n; ++t) {
      const auto &p = a.segments[t - 1];
      const auto &c = a.segments[t];
      const double gap = c.segment.onset - p.segment.offset();
      if (p.speaker == c.speaker)
        ++same;
      else if (gap >= 0)
        ++pauses;
      else
        ++overlaps;
    }
    EXPECT_EQ(s.same_speaker_pauses.size(), same);
    EXPECT_EQ(s.ds(), pauses);
    EXPECT_EQ(s.ov(), overlaps);
    if (s.usable())
      EXPECT_EQ(s.pause_probability(),
                static_cast<double>(pauses) / static_cast<double>(pauses + overlaps));
  }
}

TEST(Sampling, SingletonAlwaysReturned) {
  ConversationStats s;
  s.same_speaker_pauses = {0.3};
  s.diff_speaker_pauses = {0.3};
  s.overlaps = {0.3};
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_same_speaker_pause(s, rng), 0.3);
    EXPECT_EQ(sample_diff_speaker_pause(s, rng), 0.3);
    EXPECT_EQ(sample_overlap(s, rng), 0.3);
  }
}

// Mean of {0.1 x9, 1.0}: 0.19. 10000 draws: sd of the mean ~0.0027.
TEST(Sampling, EmpiricalMean) {
  ConversationStats s;
  s.same_speaker_pauses.assign(9, 0.1);
  s.same_speaker_pauses.push_back(1.0);
  Rng rng(5);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) sum += sample_same_speaker_pause(s, rng);
  const double mean = sum / 10000;
  EXPECT_GE(mean, 0.15);
  EXPECT_LE(mean, 0.23);
}

TEST(Sampling, EmptyMultisetThrows) {
  ConversationStats s;
  Rng rng(1);
  EXPECT_THROW(sample_same_speaker_pause(s, rng), Error);
  EXPECT_THROW(sample_diff_speaker_pause(s, rng), Error);
  EXPECT_THROW(sample_overlap(s, rng), Error);
  EXPECT_THROW(sample_pause_or_overlap(s, rng), Error);
}

TEST(Sampling, SupportIsTheMultiset) {
  ConversationStats s;
  s.diff_speaker_pauses = {0.2, 0.4, 1.3};
  s.overlaps = {0.1, 0.7};
  const std::set<double> pauses(s.diff_speaker_pauses.begin(),
                                s.diff_speaker_pauses.end());
  const std::set<double> ovs(s.overlaps.begin(), s.overlaps.end());
  Rng rng(8);
  for (int i = 0; i < 2000; ++i) {
    const GapSample g = sample_pause_or_overlap(s, rng);
    if (g.kind == GapKind::kOverlap) {
      EXPECT_LT(g.value, 0.0);
      EXPECT_TRUE(ovs.count(-g.value));
    } else {
      EXPECT_EQ(g.kind, GapKind::kDiffSpeakerPause);
      EXPECT_TRUE(pauses.count(g.value));
    }
  }
}

TEST(Sampling, DegenerateProbabilities) {
  ConversationStats only_pauses;
  only_pauses.diff_speaker_pauses = {0.5};
  ConversationStats only_overlaps;
  only_overlaps.overlaps = {0.25};
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    EXPECT_EQ(sample_pause_or_overlap(only_pauses, rng).value, 0.5);
    EXPECT_EQ(sample_pause_or_overlap(only_overlaps, rng).value, -0.25);
  }
}

// p = 0.5; 10000 draws; binomial sd 0.005, so +-0.02 is a 4 sigma band.
TEST(Sampling, PauseFraction) {
  ConversationStats s;
  s.diff_speaker_pauses.assign(50, 0.4);
  s.overlaps.assign(50, 0.2);
  Rng rng(17);
  int pauses = 0;
  for (int i = 0; i < 10000; ++i)
    pauses += sample_pause_or_overlap(s, rng).kind == GapKind::kDiffSpeakerPause;
  EXPECT_NEAR(pauses / 10000.0, 0.5, 0.02);
}

TEST(StatsFile, RoundTrip) {
  ConversationStats s;
  s.same_speaker_pauses = {0.0, 1.0, 0.1 + 0.2, 1e-7, 123.456789};
  s.diff_speaker_pauses = {2.5};
  s.overlaps = {0.001, 3.14159};
  std::stringstream ss;
  save_stats(s, ss);
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("convsim-stats v1\n[same_speaker]\n0.000\n1.000\n", 0),
            0u);
  EXPECT_EQ(load_stats(ss), s);
}

TEST(StatsFile, Fixture) {
  std::istringstream is(
      "convsim-stats v1\n"
      "[same_speaker]\n0.250\n0.500\n1.125\n"
      "[diff_speaker]\n0.100\n0.200\n0.300\n"
      "[overlap]\n0.050\n0.150\n0.450\n");
  const auto s = load_stats(is);
  EXPECT_EQ(s.same_speaker_pauses.size(), 3u);
  EXPECT_EQ(s.ds(), 3u);
  EXPECT_EQ(s.ov(), 3u);
  EXPECT_DOUBLE_EQ(s.overlaps[2], 0.45);
}

TEST(StatsFile, Malformed) {
  for (const char *text :
       {"", "wrong header\n", "convsim-stats v1\n0.5\n",
        "convsim-stats v1\n[overlap]\n-0.5\n", "convsim-stats v1\n[overlap]\n0\n",
        "convsim-stats v1\n[same_speaker]\nabc\n",
        "convsim-stats v1\n[diff_speaker]\n-1.000\n"}) {
    std::istringstream is(text);
    EXPECT_THROW(load_stats(is), ParseError) << text;
  }
}

}  // namespace
}  // namespace convsim
