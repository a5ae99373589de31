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

#ifndef CONVSIM_SEGMENT_HPP_
#define CONVSIM_SEGMENT_HPP_

#include <cmath>
#include <cstdint>

namespace convsim {

// A timed speech region, in seconds.
struct Segment {
  double onset = 0.0;
  double duration = 0.0;

  double offset() const { return onset + duration; }
  bool valid() const {
    return std::isfinite(onset) && std::isfinite(duration) && onset >= 0.0 &&
           duration > 0.0 && std::isfinite(offset());
  }
  bool operator==(const Segment &) const = default;
};

// Time quantization helpers. Both round half to even (the default FP
// rounding mode) so results are reproducible on the sample/millisecond grid.
inline std::int64_t seconds_to_samples(double seconds, int sample_rate) {
  return std::llrint(seconds * sample_rate);
}

inline std::int64_t seconds_to_ms(double seconds) {
  return std::llrint(seconds * 1000.0);
}

}  // namespace convsim

#endif  // CONVSIM_SEGMENT_HPP_
