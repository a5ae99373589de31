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

#ifndef CONVSIM_RANDOM_HPP_
#define CONVSIM_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace convsim {

using Rng = std::mt19937_64;

// Stateless 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// Seed for an independent stream identified by (seed, stream). Used to give
// every conversation, and every channel inside a mixture, its own generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(std::size_t n, Rng &rng);

bool bernoulli(double p, Rng &rng);

}  // namespace convsim

#endif  // CONVSIM_RANDOM_HPP_
