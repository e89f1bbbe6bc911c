// Copyright 2026 The priormap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIORMAP__RNG_HPP_
#define PRIORMAP__RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace priormap
{
/// One SplitMix64 step: add the golden gamma, then apply the finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * @brief Derive an independent sub-seed: mix64(seed ^ mix64(index + 0x9E3779B97F4A7C15)).
 */
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/**
 * @brief Platform-stable random source.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++ standard. The
 * standard distributions are implementation-defined, so the transforms below are spelled
 * out here instead:
 *   uniform()  = (engine() >> 11) * 2^-53, in [0, 1)
 *   normal()   = sqrt(-2 ln(1 - u1)) * cos(2 pi u2), one pair of uniforms per draw
 */
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

private:
  std::mt19937_64 engine_;
};
}  // namespace priormap

#endif  // PRIORMAP__RNG_HPP_
