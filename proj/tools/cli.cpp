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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <map>
#include <optional>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "convsim/audio.hpp"
#include "convsim/corpus.hpp"
#include "convsim/error.hpp"
#include "convsim/generate.hpp"
#include "convsim/report.hpp"
#include "convsim/rttm.hpp"
#include "convsim/sim.hpp"
#include "convsim/stats.hpp"

namespace convsim::cli {

namespace {

// Raised for invalid flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EstimateArgs {
  std::vector<std::string> rttm;
  std::string out;
  double bin_width = 0.0;
};

struct CommonSimArgs {
  std::string manifest;
  std::string noises;
  std::string rirs;
  std::size_t n_spk = 2;
  std::optional<double> hours;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t workers = 1;
  std::vector<double> snr{5.0, 10.0, 15.0, 20.0};
  double rir_prob = 0.5;
  bool no_noise = false;
  bool no_rir = false;
  bool snr_active_only = false;
  std::size_t max_refills = 0;
  int sample_rate = kDefaultSampleRate;
};

struct SimulateArgs {
  CommonSimArgs common;
  std::string stats;
};

struct MixtureArgs {
  CommonSimArgs common;
  double beta = 2.0;
  std::size_t min_segments = 10;
  std::size_t max_segments = 20;
  std::size_t max_retries = 10;
};

struct ReportArgs {
  std::vector<std::string> rttm;
  std::string durations;
  std::string corpus;
  std::string name = "corpus";
  std::string out;
  bool per_file = false;
};

void add_common_options(CLI::App *sub, CommonSimArgs &a) {
  sub->add_option("--manifest", a.manifest,
                  "Utterance manifest (id, speaker, wav, segments)")
      ->required();
  sub->add_option("--noises", a.noises, "Noise list (id<TAB>wav_path)");
  sub->add_option("--rirs", a.rirs, "RIR list (id<TAB>wav_path)");
  sub->add_option("--n-spk", a.n_spk, "Speakers per recording")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto *hours = sub->add_option("--hours", a.hours, "Target hours of audio")
                    ->check(CLI::PositiveNumber);
  auto *count =
      sub->add_option("--count", a.count, "Target number of recordings");
  hours->excludes(count);
  sub->add_option("--seed", a.seed,
                  "Random seed (falls back to $CONVSIM_SEED, then 0)");
  sub->add_option("--out", a.out, "Output directory")->required();
  sub->add_option("--workers", a.workers, "Assembly threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--snr", a.snr, "SNR choices in dB")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--rir-prob", a.rir_prob,
                  "Probability of reverberating a speaker")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_flag("--no-noise", a.no_noise, "Disable background noise");
  sub->add_flag("--no-rir", a.no_rir, "Disable reverberation");
  sub->add_flag("--snr-active-only", a.snr_active_only,
                "Measure speech power over speech-covered samples only");
  sub->add_option("--max-refills", a.max_refills,
                  "Times the utterance pool may be restored once exhausted")
      ->capture_default_str();
  sub->add_option("--sample-rate", a.sample_rate, "Corpus sample rate (Hz)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t> &flag) {
  if (flag) return *flag;
  const char *env = std::getenv("CONVSIM_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t v = 0;
  const char *end = env + std::char_traits<char>::length(env);
  auto res = std::from_chars(env, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw UsageError("CONVSIM_SEED must be an unsigned integer, got '" +
                     std::string(env) + "'");
  return v;
}

GenerationTarget resolve_target(const CommonSimArgs &a) {
  if (a.count) return GenerationTarget::count(*a.count);
  if (a.hours) return GenerationTarget::duration_hours(*a.hours);
  throw UsageError("one of --hours or --count is required");
}

AugmentationConfig resolve_augment(const CommonSimArgs &a) {
  AugmentationConfig aug;
  aug.snr_choices = a.snr;
  aug.rir_probability = a.rir_prob;
  aug.noise_enabled = !a.no_noise;
  aug.rir_enabled = !a.no_rir;
  aug.snr_active_only = a.snr_active_only;
  if (aug.noise_enabled && a.noises.empty())
    throw UsageError("--noises is required unless --no-noise is given");
  if (aug.rir_enabled && a.rirs.empty())
    throw UsageError("--rirs is required unless --no-rir is given");
  if (aug.noise_enabled && aug.snr_choices.empty())
    throw UsageError("--snr needs at least one value");
  return aug;
}

struct Resources {
  SpeakerPool pool;
  std::vector<NoiseRecord> noises;
  std::vector<Rir> rirs;
};

Resources load_resources(const CommonSimArgs &a,
                         const AugmentationConfig &aug) {
  Resources r;
  ManifestOptions mo;
  mo.sample_rate = a.sample_rate;
  r.pool = load_manifest(a.manifest, mo, a.max_refills);
  if (aug.noise_enabled) r.noises = load_noises(a.noises, a.sample_rate);
  if (aug.rir_enabled) r.rirs = load_rirs(a.rirs, a.sample_rate);
  return r;
}

int finish_generation(const GenerationReport &report, const std::string &dir,
                      std::ostream &out, std::ostream &err) {
  report.write(out);
  if (report.clipped_samples > 0)
    err << "warning: " << report.clipped_samples
        << " samples clipped while writing 16-bit WAV\n";
  if (!report.target_reached) {
    err << "error: target not reached (" << report.stop_reason
        << "); partial output kept in " << dir << "\n";
    return kExitData;
  }
  return kExitOk;
}

int run_estimate(const EstimateArgs &a, std::ostream &out) {
  std::vector<RecordingAnnotation> recs;
  for (const auto &path : a.rttm) {
    auto more = read_rttm_file(path);
    recs.insert(recs.end(), std::make_move_iterator(more.begin()),
                std::make_move_iterator(more.end()));
  }
  EstimateOptions opts;
  opts.bin_width = a.bin_width;
  const ConversationStats stats = estimate_stats(recs, opts);
  std::ofstream os(a.out, std::ios::trunc);
  if (!os) throw Error("cannot write " + a.out);
  save_stats(stats, os);
  if (!os) throw Error("write failed: " + a.out);

  out << "recordings=" << recs.size() << '\n'
      << "same_speaker_pauses=" << stats.same_speaker_pauses.size() << '\n'
      << "ds=" << stats.ds() << '\n'
      << "ov=" << stats.ov() << '\n';
  if (stats.usable())
    out << "p=" << stats.pause_probability() << '\n';
  else
    out << "p=undefined\n";
  return kExitOk;
}

int run_simulate(const SimulateArgs &a, std::ostream &out, std::ostream &err) {
  SimulationConfig cfg;
  cfg.n_spk = a.common.n_spk;
  cfg.augment = resolve_augment(a.common);
  cfg.seed = resolve_seed(a.common.seed);
  cfg.sample_rate = a.common.sample_rate;
  const GenerationTarget target = resolve_target(a.common);

  std::ifstream is(a.stats);
  if (!is) throw Error("cannot open stats file " + a.stats);
  const ConversationStats stats = load_stats(is);
  if (cfg.n_spk > 1 && !stats.usable())
    throw Error(a.stats + ": no different-speaker transitions; cannot "
                          "simulate multi-speaker conversations");

  Resources res = load_resources(a.common, cfg.augment);
  GenerationOptions opts{a.common.out, a.common.workers};
  const auto report = generate_conversations(
      res.pool, stats, Augmentations{res.noises, res.rirs}, cfg, target, opts,
      wav_loader(cfg.sample_rate));
  return finish_generation(report, a.common.out, out, err);
}

int run_mixtures(const MixtureArgs &a, std::ostream &out, std::ostream &err) {
  MixtureConfig cfg;
  cfg.n_spk = a.common.n_spk;
  cfg.beta = a.beta;
  cfg.min_segments = a.min_segments;
  cfg.max_segments = a.max_segments;
  cfg.max_retries = a.max_retries;
  cfg.augment = resolve_augment(a.common);
  cfg.seed = resolve_seed(a.common.seed);
  cfg.sample_rate = a.common.sample_rate;
  if (cfg.min_segments > cfg.max_segments)
    throw UsageError("--min-segments must not exceed --max-segments");
  const GenerationTarget target = resolve_target(a.common);

  Resources res = load_resources(a.common, cfg.augment);
  GenerationOptions opts{a.common.out, a.common.workers};
  const auto report =
      generate_mixtures(res.pool, Augmentations{res.noises, res.rirs}, cfg,
                        target, opts, wav_loader(cfg.sample_rate));
  return finish_generation(report, a.common.out, out, err);
}

// First two tab-separated columns: recording id, duration in seconds.
std::map<std::string, double> read_durations(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open durations file " + path);
  std::map<std::string, double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string id, dur;
    if (!std::getline(fields, id, '\t') || !std::getline(fields, dur, '\t'))
      throw ParseError("expected <id>\\t<seconds>", line_no, path);
    double v = 0.0;
    const char *end = dur.data() + dur.size();
    auto res = std::from_chars(dur.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !(v > 0.0))
      throw ParseError("bad duration '" + dur + "'", line_no, path);
    out[id] = v;
  }
  return out;
}

int run_report(const ReportArgs &a, std::ostream &out, std::ostream &err) {
  std::vector<std::string> rttm_files = a.rttm;
  std::map<std::string, double> durations;
  if (!a.corpus.empty()) {
    durations = read_durations(a.corpus);
    const auto base = std::filesystem::path(a.corpus).parent_path();
    std::ifstream is(a.corpus);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream fields(line);
      std::string id, dur, wav, rttm;
      std::getline(fields, id, '\t');
      std::getline(fields, dur, '\t');
      std::getline(fields, wav, '\t');
      std::getline(fields, rttm, '\t');
      if (rttm.empty())
        throw Error(a.corpus + ": corpus lines need 4 columns");
      rttm_files.push_back((base / rttm).string());
    }
  }
  if (!a.durations.empty()) {
    for (auto &[id, d] : read_durations(a.durations)) durations[id] = d;
  }
  if (rttm_files.empty())
    throw UsageError("give --rttm files or a --corpus listing");

  std::vector<RecordingAnnotation> recs;
  for (const auto &path : rttm_files) {
    auto more = read_rttm_file(path);
    recs.insert(recs.end(), std::make_move_iterator(more.begin()),
                std::make_move_iterator(more.end()));
  }
  // A generated recording with no speech has an empty RTTM; still count it.
  for (const auto &[id, d] : durations) {
    const bool seen = std::any_of(recs.begin(), recs.end(), [&](const auto &r) {
      return r.recording_id == id;
    });
    if (!seen && !a.corpus.empty()) recs.push_back({id, d, {}});
  }
  if (recs.empty()) throw Error("no SPEAKER segments found");

  std::vector<ReportRow> files;
  std::size_t guessed = 0;
  for (const auto &rec : recs) {
    double duration = 0.0;
    if (auto it = durations.find(rec.recording_id); it != durations.end()) {
      duration = it->second;
    } else {
      for (const auto &ls : rec.segments)
        duration = std::max(duration, ls.segment.offset());
      ++guessed;
    }
    files.push_back({rec.recording_id, timeline_stats(rec, duration)});
  }
  if (guessed > 0)
    err << "warning: " << guessed
        << " recordings without a known duration; using the last segment "
           "end (silence after it is not counted)\n";

  std::vector<TimelineStats> per_file;
  for (const auto &f : files) per_file.push_back(f.stats);
  const ReportRow total{a.name, aggregate_stats(per_file)};

  std::ostringstream text;
  std::vector<ReportRow> table{total};
  if (a.per_file) table.insert(table.end(), files.begin(), files.end());
  print_table(text, table);
  text << '\n';
  print_key_values(text, total);
  out << text.str();
  if (!a.out.empty()) {
    std::ofstream os(a.out, std::ios::trunc);
    if (!os) throw Error("cannot write " + a.out);
    os << text.str();
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Synthetic multi-speaker conversation generator"};
  app.name("convsim");
  app.require_subcommand(1);

  EstimateArgs est;
  auto *est_cmd = app.add_subcommand(
      "estimate-stats", "Estimate pause/overlap statistics from RTTM files");
  est_cmd->add_option("--rttm", est.rttm, "Reference RTTM file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  est_cmd->add_option("--out", est.out, "Output stats file")->required();
  est_cmd
      ->add_option("--bin-width", est.bin_width,
                   "Quantize gaps to histogram bins of this width (s); 0 = off")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  SimulateArgs sim;
  auto *sim_cmd = app.add_subcommand(
      "simulate", "Generate simulated conversations from statistics");
  add_common_options(sim_cmd, sim.common);
  sim_cmd->add_option("--stats", sim.stats, "Stats file from estimate-stats")
      ->required();

  MixtureArgs mix;
  auto *mix_cmd = app.add_subcommand(
      "simulate-mixtures", "Generate baseline simulated mixtures");
  add_common_options(mix_cmd, mix.common);
  mix_cmd->add_option("--beta", mix.beta, "Mean pause length (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mix_cmd->add_option("--min-segments", mix.min_segments,
                      "Minimum consecutive segments per speaker")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mix_cmd->add_option("--max-segments", mix.max_segments,
                      "Maximum consecutive segments per speaker")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mix_cmd->add_option("--max-retries", mix.max_retries,
                      "Redraws when an utterance is too short")
      ->capture_default_str();

  ReportArgs rep;
  auto *rep_cmd = app.add_subcommand(
      "report", "Silence / single-speaker / overlap percentages");
  rep_cmd->add_option("--rttm", rep.rttm, "RTTM file(s)")
      ->check(CLI::ExistingFile);
  rep_cmd->add_option("--durations", rep.durations,
                      "TSV with <recording_id>\\t<seconds> columns");
  rep_cmd->add_option("--corpus", rep.corpus,
                      "corpus.tsv written by simulate/simulate-mixtures")
      ->check(CLI::ExistingFile);
  rep_cmd->add_option("--name", rep.name, "Row label")->capture_default_str();
  rep_cmd->add_option("--out", rep.out, "Also write the report here");
  rep_cmd->add_flag("--per-file", rep.per_file, "Add one table row per file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*est_cmd) return run_estimate(est, out);
    if (*sim_cmd) return run_simulate(sim, out, err);
    if (*mix_cmd) return run_mixtures(mix, out, err);
    if (*rep_cmd) return run_report(rep, out, err);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace convsim::cli
