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

#include <benchmark/benchmark.h>

#include "convsim/audio.hpp"
#include "convsim/sim.hpp"
#include "test_support.hpp"

namespace convsim {
namespace {

void BM_Convolve(benchmark::State &state, ConvolutionMethod method) {
  const auto x = testing::synth_signal(static_cast<std::size_t>(state.range(0)), 1);
  const auto h = testing::synth_rir("r", static_cast<std::size_t>(state.range(1)), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        convolve_truncated(x.samples, h.impulse.samples, method));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Convolve, direct, ConvolutionMethod::kDirect)
    ->Args({24000, 64})
    ->Args({24000, 2400});
BENCHMARK_CAPTURE(BM_Convolve, fft, ConvolutionMethod::kFft)
    ->Args({24000, 64})
    ->Args({24000, 2400})
    ->Args({480000, 4000});

void BM_Conversation(benchmark::State &state) {
  const bool augment = state.range(0) != 0;
  const auto corpus = testing::make_memory_corpus(
      {.speakers = 10, .utterances_per_speaker = 4});
  std::vector<NoiseRecord> noises{testing::synth_noise("n", 16000, 3)};
  std::vector<Rir> rirs{testing::synth_rir("r", 2400, 4)};
  ConversationStats stats;
  stats.same_speaker_pauses = {0.2, 0.6};
  stats.diff_speaker_pauses = {0.1, 0.4};
  stats.overlaps = {0.3};
  SimulationConfig cfg;
  cfg.augment.noise_enabled = cfg.augment.rir_enabled = augment;
  SpeakerPool pool = corpus.pool(1'000'000);
  Rng rng(1);
  double seconds = 0.0;
  for (auto _ : state) {
    auto conv = simulate_conversation(pool, stats, {noises, rirs}, cfg, rng,
                                      corpus.loader());
    seconds += conv.audio.duration();
    benchmark::DoNotOptimize(conv.audio.samples.data());
  }
  state.counters["audio_s_per_s"] =
      benchmark::Counter(seconds, benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Conversation)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace convsim

BENCHMARK_MAIN();
