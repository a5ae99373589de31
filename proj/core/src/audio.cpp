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

#include "convsim/audio.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>

#include "convsim/error.hpp"
#include "convsim/wav.hpp"

namespace convsim {

namespace {

// FFTW planning is not thread-safe but executing a plan on new arrays is, as
// long as they share the planning arrays' alignment (fftw_malloc guarantees
// that). Plans are cached per transform size for the process lifetime.
class FftPlans {
 public:
  struct Pair {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
  };

  static FftPlans &instance() {
    static FftPlans plans;
    return plans;
  }

  Pair get(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    double *real = fftw_alloc_real(n);
    fftw_complex *spec = fftw_alloc_complex(n / 2 + 1);
    Pair p;
    p.forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec,
                                     FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real,
                                     FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(spec);
    plans_.emplace(n, p);
    return p;
  }

  ~FftPlans() {
    for (auto &[n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.inverse);
    }
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, Pair> plans_;
};

struct FftwDeleter {
  void operator()(void *p) const { fftw_free(p); }
};
template <typename T>
using FftwArray = std::unique_ptr<T[], FftwDeleter>;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> convolve_direct(std::span<const double> x,
                                    std::span<const double> h) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t k = 0; k < h.size() && k < n; ++k) {
    const double hk = h[k];
    if (hk == 0.0) continue;
    for (std::size_t i = k; i < n; ++i) y[i] += hk * x[i - k];
  }
  return y;
}

std::vector<double> convolve_fft(std::span<const double> x,
                                 std::span<const double> h) {
  const std::size_t n = x.size();
  const std::size_t taps = std::min(h.size(), n);
  const std::size_t size = next_pow2(n + taps - 1);
  const std::size_t bins = size / 2 + 1;
  const auto plans = FftPlans::instance().get(size);

  FftwArray<double> a(fftw_alloc_real(size));
  FftwArray<double> b(fftw_alloc_real(size));
  FftwArray<fftw_complex> fa(fftw_alloc_complex(bins));
  FftwArray<fftw_complex> fb(fftw_alloc_complex(bins));
  std::fill_n(a.get(), size, 0.0);
  std::fill_n(b.get(), size, 0.0);
  std::copy_n(x.begin(), n, a.get());
  std::copy_n(h.begin(), taps, b.get());

  fftw_execute_dft_r2c(plans.forward, a.get(), fa.get());
  fftw_execute_dft_r2c(plans.forward, b.get(), fb.get());
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  fftw_execute_dft_c2r(plans.inverse, fa.get(), a.get());

  std::vector<double> y(n);
  const double norm = 1.0 / static_cast<double>(size);
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * norm;
  return y;
}

template <typename Record>
std::vector<Record> load_audio_list(const std::filesystem::path &list,
                                    int sample_rate, const char *what) {
  std::ifstream is(list);
  if (!is) throw Error("cannot open " + std::string(what) + " list " +
                       list.string());
  const auto base = list.parent_path();
  std::vector<Record> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw ParseError(list.string() + ": expected <id>\\t<wav_path>",
                       line_no);
    Record rec;
    rec.id = line.substr(0, tab);
    std::filesystem::path path = line.substr(tab + 1);
    if (path.is_relative()) path = base / path;
    AudioBuffer audio = read_wav(path, sample_rate);
    if (audio.empty())
      throw Error(std::string(what) + " '" + rec.id + "' has no samples");
    if constexpr (std::is_same_v<Record, Rir>)
      rec.impulse = std::move(audio);
    else
      rec.audio = std::move(audio);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<double> convolve_truncated(std::span<const double> signal,
                                       std::span<const double> impulse,
                                       ConvolutionMethod method) {
  if (signal.empty()) throw Error("convolve: empty signal");
  if (impulse.empty()) throw Error("convolve: empty impulse response");
  if (method == ConvolutionMethod::kAuto) {
    const std::size_t n = signal.size();
    const std::size_t taps = std::min(impulse.size(), n);
    const double size = static_cast<double>(next_pow2(n + taps - 1));
    const double direct_cost = static_cast<double>(n) * taps;
    const double fft_cost = 6.0 * size * std::log2(size);
    method = (taps <= 32 || direct_cost < fft_cost) ? ConvolutionMethod::kDirect
                                                    : ConvolutionMethod::kFft;
  }
  return method == ConvolutionMethod::kDirect ? convolve_direct(signal, impulse)
                                              : convolve_fft(signal, impulse);
}

AudioBuffer convolve(const AudioBuffer &signal, const Rir &rir,
                     ConvolutionMethod method) {
  if (signal.sample_rate != rir.impulse.sample_rate)
    throw Error("convolve: signal rate " + std::to_string(signal.sample_rate) +
                " Hz differs from RIR rate " +
                std::to_string(rir.impulse.sample_rate) + " Hz");
  AudioBuffer out;
  out.sample_rate = signal.sample_rate;
  out.samples = convolve_truncated(signal.samples, rir.impulse.samples, method);
  const double p_in = mean_power(signal.samples);
  const double p_out = mean_power(out.samples);
  if (p_out > 0.0) {
    const double gain = std::sqrt(p_in / p_out);
    for (double &s : out.samples) s *= gain;
  }
  return out;
}

double mean_power(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

double mixing_scale(double snr_db, double signal_power, double noise_power) {
  if (!(signal_power > 0.0)) throw Error("mixing_scale: signal has zero power");
  if (!(noise_power > 0.0)) throw Error("mixing_scale: noise has zero power");
  return std::sqrt(signal_power /
                   (noise_power * std::pow(10.0, snr_db / 10.0)));
}

double mixing_scale(double snr_db, const AudioBuffer &signal,
                    const AudioBuffer &noise) {
  return mixing_scale(snr_db, mean_power(signal.samples),
                      mean_power(noise.samples));
}

AudioBuffer repeat_to_length(const AudioBuffer &noise, std::size_t length) {
  if (noise.empty()) throw Error("repeat_to_length: empty noise");
  AudioBuffer out;
  out.sample_rate = noise.sample_rate;
  out.samples.reserve(length);
  while (out.samples.size() < length) {
    const std::size_t take =
        std::min(noise.size(), length - out.samples.size());
    out.samples.insert(out.samples.end(), noise.samples.begin(),
                       noise.samples.begin() + static_cast<std::ptrdiff_t>(take));
  }
  return out;
}

void add_from_position(AudioBuffer &out, std::size_t pos,
                       std::span<const double> input) {
  if (pos + input.size() > out.samples.size())
    out.samples.resize(pos + input.size(), 0.0);
  double *dst = out.samples.data() + pos;
  for (std::size_t i = 0; i < input.size(); ++i) dst[i] += input[i];
}

std::vector<Rir> load_rirs(const std::filesystem::path &list,
                           int sample_rate) {
  return load_audio_list<Rir>(list, sample_rate, "RIR");
}

std::vector<NoiseRecord> load_noises(const std::filesystem::path &list,
                                     int sample_rate) {
  return load_audio_list<NoiseRecord>(list, sample_rate, "noise");
}

}  // namespace convsim
