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

#ifndef CONVSIM_GENERATE_HPP_
#define CONVSIM_GENERATE_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "convsim/sim.hpp"

namespace convsim {

// Stop after a number of conversations, or at the first conversation that
// brings the cumulative audio to at least `hours`.
struct GenerationTarget {
  std::optional<std::size_t> conversations;
  std::optional<double> hours;

  static GenerationTarget count(std::size_t n) { return {n, std::nullopt}; }
  static GenerationTarget duration_hours(double h) { return {std::nullopt, h}; }
};

struct GenerationOptions {
  std::filesystem::path output_dir;
  std::size_t workers = 1;
};

struct GenerationReport {
  std::size_t conversations = 0;
  double total_seconds = 0.0;
  std::size_t clamped_overlaps = 0;
  std::size_t pool_refills = 0;
  std::size_t clipped_samples = 0;
  bool target_reached = false;
  std::string stop_reason;  // set when the pool ran dry first

  double hours() const { return total_seconds / 3600.0; }
  // `key=value` lines: conversations, hours, clamped_overlaps, pool_refills,
  // clipped_samples, complete.
  void write(std::ostream &os) const;
};

// Writes `<id>.wav` and `<id>.rttm` per conversation into the output folder,
// plus `corpus.tsv` (id, duration in seconds, wav, rttm) and `report.txt`.
//
// Pool draws happen sequentially in conversation order; assembly runs on
// `workers` threads with a generator seeded from (seed, index), so the files
// do not depend on the worker count. Pool exhaustion before the target keeps
// the partial output and is reported through target_reached/stop_reason.
GenerationReport generate_conversations(SpeakerPool &pool,
                                        const ConversationStats &stats,
                                        const Augmentations &aug,
                                        const SimulationConfig &config,
                                        const GenerationTarget &target,
                                        const GenerationOptions &options,
                                        const AudioLoader &loader);

GenerationReport generate_mixtures(SpeakerPool &pool, const Augmentations &aug,
                                   const MixtureConfig &config,
                                   const GenerationTarget &target,
                                   const GenerationOptions &options,
                                   const AudioLoader &loader);

}  // namespace convsim

#endif  // CONVSIM_GENERATE_HPP_
