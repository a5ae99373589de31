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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "convsim/error.hpp"
#include "convsim/generate.hpp"
#include "convsim/rttm.hpp"
#include "convsim/wav.hpp"
#include "test_support.hpp"

namespace convsim {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

ConversationStats small_stats() {
  ConversationStats s;
  s.same_speaker_pauses = {0.2, 0.5, 1.1};
  s.diff_speaker_pauses = {0.1, 0.4};
  s.overlaps = {0.3};
  return s;
}

std::vector<std::string> lines_of(const fs::path &p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::string report_value(const fs::path &dir, const std::string &key) {
  for (const auto &line : lines_of(dir / "report.txt"))
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  return {};
}

struct Fixture {
  testing::MemoryCorpus corpus = testing::make_memory_corpus({.speakers = 6});
  std::vector<NoiseRecord> noises{testing::synth_noise("n0", 3000, 1),
                                  testing::synth_noise("n1", 5000, 2)};
  std::vector<Rir> rirs{testing::synth_rir("r0", 500, 3),
                        testing::synth_rir("r1", 900, 4)};
  Augmentations aug() const { return {noises, rirs}; }
};

TEST(Generate, ExactCount) {
  Fixture f;
  TempDir dir;
  SpeakerPool pool = f.corpus.pool(5);
  SimulationConfig cfg;
  cfg.seed = 3;
  const auto report =
      generate_conversations(pool, small_stats(), f.aug(), cfg,
                             GenerationTarget::count(3), {dir.path(), 1},
                             f.corpus.loader());
  EXPECT_EQ(report.conversations, 3u);
  EXPECT_TRUE(report.target_reached);
  std::size_t wavs = 0, rttms = 0;
  for (const auto &e : fs::directory_iterator(dir.path())) {
    wavs += e.path().extension() == ".wav";
    rttms += e.path().extension() == ".rttm";
  }
  EXPECT_EQ(wavs, 3u);
  EXPECT_EQ(rttms, 3u);
  const auto index = lines_of(dir / "corpus.tsv");
  ASSERT_EQ(index.size(), 3u);
  EXPECT_EQ(index[0].substr(0, index[0].find('\t')), "sc_3_0");
  EXPECT_EQ(report_value(dir.path(), "complete"), "true");

  // Every RTTM describes its own WAV.
  for (int i = 0; i < 3; ++i) {
    const std::string id = "sc_3_" + std::to_string(i);
    const auto info = read_wav_info(dir / (id + ".wav"));
    EXPECT_EQ(info.sample_rate, 8000);
    const auto recs = read_rttm_file(dir / (id + ".rttm"));
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].recording_id, id);
    for (const auto &s : recs[0].segments)
      EXPECT_LE(s.segment.offset(), info.duration() + 1e-3);
  }
}

TEST(Generate, StopsOnceHoursReached) {
  Fixture f;
  TempDir dir;
  SpeakerPool pool = f.corpus.pool(100);
  SimulationConfig cfg;
  cfg.augment.rir_enabled = false;
  const auto report = generate_conversations(
      pool, small_stats(), f.aug(), cfg, GenerationTarget::duration_hours(0.05),
      {dir.path(), 2}, f.corpus.loader());
  ASSERT_TRUE(report.target_reached);
  EXPECT_GE(report.total_seconds, 180.0);
  // Dropping the last conversation would fall short.
  const auto index = lines_of(dir / "corpus.tsv");
  ASSERT_EQ(index.size(), report.conversations);
  const double last = std::stod(index.back().substr(index.back().find('\t') + 1));
  EXPECT_LT(report.total_seconds - last, 180.0);
  double sum = 0.0;
  for (const auto &line : index) sum += std::stod(line.substr(line.find('\t') + 1));
  EXPECT_NEAR(sum, report.total_seconds, 1e-5 * index.size());
}

std::map<std::string, std::string> snapshot(const fs::path &dir) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::directory_iterator(dir))
    out[e.path().filename().string()] = testing::read_bytes(e.path());
  return out;
}

TEST(Generate, WorkerCountDoesNotChangeOutput) {
  Fixture f;
  TempDir a, b;
  SimulationConfig cfg;
  cfg.seed = 17;
  SpeakerPool p1 = f.corpus.pool(10), p4 = f.corpus.pool(10);
  generate_conversations(p1, small_stats(), f.aug(), cfg,
                         GenerationTarget::count(9), {a.path(), 1},
                         f.corpus.loader());
  generate_conversations(p4, small_stats(), f.aug(), cfg,
                         GenerationTarget::count(9), {b.path(), 4},
                         f.corpus.loader());
  const auto sa = snapshot(a.path()), sb = snapshot(b.path());
  EXPECT_EQ(sa.size(), 9u * 2 + 2);
  EXPECT_TRUE(sa == sb);
}

TEST(Generate, MixturesDeterministicAcrossWorkers) {
  testing::MemoryCorpus corpus =
      testing::make_memory_corpus({.speakers = 4, .min_segments = 20});
  Fixture f;
  TempDir a, b;
  MixtureConfig cfg;
  cfg.seed = 5;
  SpeakerPool p1 = corpus.pool(10), p3 = corpus.pool(10);
  generate_mixtures(p1, f.aug(), cfg, GenerationTarget::count(5), {a.path(), 1},
                    corpus.loader());
  generate_mixtures(p3, f.aug(), cfg, GenerationTarget::count(5), {b.path(), 3},
                    corpus.loader());
  EXPECT_TRUE(snapshot(a.path()) == snapshot(b.path()));
  EXPECT_TRUE(fs::exists(a / "sm_5_4.wav"));
}

TEST(Generate, ExhaustedPoolGivesPartialOutput) {
  const auto corpus = testing::make_memory_corpus(
      {.speakers = 2, .utterances_per_speaker = 2, .min_segments = 3,
       .max_segments = 5});
  TempDir dir;
  SpeakerPool pool = corpus.pool(0);
  SimulationConfig cfg;
  cfg.augment.noise_enabled = false;
  cfg.augment.rir_enabled = false;
  const auto report =
      generate_conversations(pool, small_stats(), {}, cfg,
                             GenerationTarget::count(10), {dir.path(), 1},
                             corpus.loader());
  EXPECT_EQ(report.conversations, 2u);
  EXPECT_FALSE(report.target_reached);
  EXPECT_FALSE(report.stop_reason.empty());
  EXPECT_EQ(lines_of(dir / "corpus.tsv").size(), 2u);
  EXPECT_EQ(report_value(dir.path(), "complete"), "false");
  EXPECT_EQ(report_value(dir.path(), "conversations"), "2");
}

TEST(Generate, RefillsAreReported) {
  const auto corpus = testing::make_memory_corpus(
      {.speakers = 2, .utterances_per_speaker = 1, .min_segments = 3,
       .max_segments = 5});
  TempDir dir;
  SpeakerPool pool = corpus.pool(3);
  SimulationConfig cfg;
  cfg.augment.noise_enabled = false;
  cfg.augment.rir_enabled = false;
  const auto report =
      generate_conversations(pool, small_stats(), {}, cfg,
                             GenerationTarget::count(3), {dir.path(), 1},
                             corpus.loader());
  EXPECT_TRUE(report.target_reached);
  EXPECT_EQ(report.pool_refills, 2u);  // one refill per conversation after the first
  EXPECT_EQ(report_value(dir.path(), "pool_refills"), "2");
}

TEST(Generate, InvalidTargets) {
  Fixture f;
  TempDir dir;
  SpeakerPool pool = f.corpus.pool();
  SimulationConfig cfg;
  EXPECT_THROW(generate_conversations(pool, small_stats(), f.aug(), cfg, {},
                                      {dir.path(), 1}, f.corpus.loader()),
               Error);
  EXPECT_THROW(generate_conversations(pool, small_stats(), f.aug(), cfg,
                                      GenerationTarget::duration_hours(-1),
                                      {dir.path(), 1}, f.corpus.loader()),
               Error);
}

TEST(Generate, AssemblyErrorsPropagate) {
  Fixture f;
  TempDir dir;
  SpeakerPool pool = f.corpus.pool(5);
  SimulationConfig cfg;
  AudioLoader broken = [](const Utterance &u) -> AudioBuffer {
    throw Error("cannot load " + u.id);
  };
  EXPECT_THROW(generate_conversations(pool, small_stats(), f.aug(), cfg,
                                      GenerationTarget::count(4),
                                      {dir.path(), 2}, broken),
               Error);
}

}  // namespace
}  // namespace convsim
