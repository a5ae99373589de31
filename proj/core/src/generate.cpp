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

#include "convsim/generate.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>
#include <utility>
#include <vector>

#include "convsim/error.hpp"
#include "convsim/wav.hpp"

namespace convsim {

namespace {

constexpr std::uint64_t kPoolStream = ~std::uint64_t{0};

struct Assembled {
  std::string id;
  EncodedWav wav;
  std::string rttm;
  double seconds = 0.0;
  std::size_t clamped = 0;
};

template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn &&fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  const std::size_t count = std::min(workers, n);
  threads.reserve(count);
  for (std::size_t w = 0; w < count; ++w)
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
}

void write_bytes(const std::filesystem::path &path, const void *data,
                 std::size_t size) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + path.string());
  os.write(static_cast<const char *>(data), static_cast<std::streamsize>(size));
  if (!os) throw Error("write failed: " + path.string());
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

template <typename Draw, typename DrawFn, typename AssembleFn>
GenerationReport run_generation(SpeakerPool &pool, std::uint64_t seed,
                                const std::string &prefix,
                                const GenerationTarget &target,
                                const GenerationOptions &options,
                                DrawFn &&draw_one, AssembleFn &&assemble_one) {
  if (target.conversations.has_value() == target.hours.has_value())
    throw Error("generation target needs exactly one of a conversation "
                "count or a number of hours");
  if (target.hours && !(*target.hours > 0.0))
    throw Error("target hours must be positive");

  std::filesystem::create_directories(options.output_dir);
  std::ofstream index_file(options.output_dir / "corpus.tsv",
                           std::ios::trunc);
  if (!index_file)
    throw Error("cannot write " + (options.output_dir / "corpus.tsv").string());

  const std::size_t workers = std::max<std::size_t>(1, options.workers);
  const std::size_t batch = 4 * workers;
  const std::size_t refills_at_start = pool.refill_count();
  Rng pool_rng(derive_seed(seed, kPoolStream));

  GenerationReport report;
  auto reached = [&] {
    return target.conversations
               ? report.conversations >= *target.conversations
               : report.total_seconds >= *target.hours * 3600.0;
  };
  report.target_reached = reached();

  std::size_t next_index = 0;
  bool exhausted = false;
  while (!report.target_reached && !exhausted) {
    std::size_t want = batch;
    if (target.conversations)
      want = std::min(want, *target.conversations - next_index);

    std::vector<Draw> draws;
    std::vector<std::size_t> refills_after;
    for (std::size_t i = 0; i < want; ++i) {
      try {
        draws.push_back(draw_one(pool, pool_rng));
      } catch (const PoolExhausted &e) {
        exhausted = true;
        report.stop_reason = e.what();
        break;
      }
      refills_after.push_back(pool.refill_count() - refills_at_start);
    }

    std::vector<Assembled> results(draws.size());
    std::vector<std::exception_ptr> errors(draws.size());
    parallel_for(draws.size(), workers, [&](std::size_t j) {
      const std::size_t index = next_index + j;
      try {
        Rng rng(derive_seed(seed, index));
        std::string id =
            prefix + "_" + std::to_string(seed) + "_" + std::to_string(index);
        SimulatedConversation conv = assemble_one(draws[j], rng, id);
        Assembled &out = results[j];
        out.id = std::move(id);
        out.wav = encode_wav(conv.audio);
        out.rttm = emit_rttm(conv.annotation());
        out.seconds = conv.audio.duration();
        out.clamped = conv.clamped_overlaps;
      } catch (...) {
        errors[j] = std::current_exception();
      }
    });

    for (std::size_t j = 0; j < results.size(); ++j) {
      if (errors[j]) std::rethrow_exception(errors[j]);
      const Assembled &a = results[j];
      const std::string wav_name = a.id + ".wav";
      const std::string rttm_name = a.id + ".rttm";
      write_bytes(options.output_dir / wav_name, a.wav.bytes.data(),
                  a.wav.bytes.size());
      write_bytes(options.output_dir / rttm_name, a.rttm.data(), a.rttm.size());
      index_file << a.id << '\t' << fixed(a.seconds, 6) << '\t' << wav_name
                 << '\t' << rttm_name << '\n';
      ++report.conversations;
      report.total_seconds += a.seconds;
      report.clamped_overlaps += a.clamped;
      report.clipped_samples += a.wav.clipped;
      report.pool_refills = refills_after[j];
      if ((report.target_reached = reached())) break;
    }
    next_index += draws.size();
  }
  index_file.close();

  std::ofstream report_file(options.output_dir / "report.txt",
                            std::ios::trunc);
  if (!report_file)
    throw Error("cannot write " + (options.output_dir / "report.txt").string());
  report.write(report_file);
  return report;
}

}  // namespace

void GenerationReport::write(std::ostream &os) const {
  os << "conversations=" << conversations << '\n'
     << "hours=" << fixed(hours(), 6) << '\n'
     << "clamped_overlaps=" << clamped_overlaps << '\n'
     << "pool_refills=" << pool_refills << '\n'
     << "clipped_samples=" << clipped_samples << '\n'
     << "complete=" << (target_reached ? "true" : "false") << '\n';
}

GenerationReport generate_conversations(SpeakerPool &pool,
                                        const ConversationStats &stats,
                                        const Augmentations &aug,
                                        const SimulationConfig &config,
                                        const GenerationTarget &target,
                                        const GenerationOptions &options,
                                        const AudioLoader &loader) {
  config.validate();
  return run_generation<ConversationDraw>(
      pool, config.seed, "sc", target, options,
      [&](SpeakerPool &p, Rng &rng) {
        return draw_conversation(p, config.n_spk, rng);
      },
      [&](const ConversationDraw &d, Rng &rng, const std::string &id) {
        return assemble_conversation(d, stats, aug, config, rng, loader, id);
      });
}

GenerationReport generate_mixtures(SpeakerPool &pool, const Augmentations &aug,
                                   const MixtureConfig &config,
                                   const GenerationTarget &target,
                                   const GenerationOptions &options,
                                   const AudioLoader &loader) {
  config.validate();
  return run_generation<MixtureDraw>(
      pool, config.seed, "sm", target, options,
      [&](SpeakerPool &p, Rng &rng) { return draw_mixture(p, config, rng); },
      [&](const MixtureDraw &d, Rng &rng, const std::string &id) {
        return assemble_mixture(d, aug, config, rng, loader, id);
      });
}

}  // namespace convsim
