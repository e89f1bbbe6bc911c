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

#ifndef PRIORMAP__PERTURB_HPP_
#define PRIORMAP__PERTURB_HPP_

#include "priormap/geometry.hpp"
#include "priormap/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace priormap
{
enum class ScenarioKind : std::uint8_t {
  kS1,   ///< boundaries only
  kS2a,  ///< per-element Gaussian translation
  kS2b,  ///< per-point Gaussian noise
  kS3a,  ///< outdated: deletions, additions, warping
  kS3b,  ///< mix of outdated and true maps
};

std::string_view to_string(ScenarioKind kind) noexcept;
std::optional<ScenarioKind> scenario_from_string(std::string_view tag) noexcept;

struct ScenarioParams
{
  double sigma_shift{1.0};
  double sigma_point{5.0};
  double delete_frac{0.5};
  double add_frac{0.5};
  double mix_p{0.5};
  double warp_amp_h{1.0};
  double warp_amp_v{1.0};
  double warp_inclination{3.0};
  double grid_spacing{10.0};
  double grid_sigma{1.0};
  double crossing_width_m{4.0};
  double crossing_height_m{3.0};
  /// Delete exactly floor(n * delete_frac) per class instead of independent coin flips.
  bool exact_delete{false};

  friend bool operator==(const ScenarioParams &, const ScenarioParams &) = default;
};

struct ScenarioSpec
{
  ScenarioKind kind{ScenarioKind::kS1};
  ScenarioParams params;

  /// Throws ErrorCode::kInvalidArgument on negative sigmas or fractions outside [0, 1].
  void validate() const;

  /// Set a parameter by its file/CLI key (e.g. "sigma_shift"); throws on unknown keys.
  void set_param(std::string_view key, double value);

  friend bool operator==(const ScenarioSpec &, const ScenarioSpec &) = default;
};

struct Correspondence
{
  std::string perturbed_id;
  std::optional<std::string> source_id;  ///< empty for synthetically added elements

  friend bool operator==(const Correspondence &, const Correspondence &) = default;
};

struct PerturbedMap
{
  VectorMap map;
  std::vector<Correspondence> correspondences;
  ScenarioSpec scenario;
  std::uint64_t seed{0};
  bool unperturbed{false};

  const Correspondence * correspondence_of(std::string_view perturbed_id) const noexcept;

  friend bool operator==(const PerturbedMap &, const PerturbedMap &) = default;
};

/**
 * @brief Throws ErrorCode::kIntegrity unless every element has exactly one correspondence,
 * source ids are unique and, when `source` is given, refer to elements of it.
 */
void validate_correspondences(const PerturbedMap & pm, const VectorMap * source = nullptr);

PerturbedMap s1_remove(const VectorMap & map);
PerturbedMap s2a_shift(const VectorMap & map, double sigma, Rng & rng);
PerturbedMap s2b_point_noise(const VectorMap & map, double sigma, Rng & rng);
PerturbedMap s3a_outdated(const VectorMap & map, const ScenarioSpec & spec, Rng & rng);
PerturbedMap s3b_mix(const VectorMap & map, const ScenarioSpec & spec, Rng & rng);

/// Run one scenario with a fresh generator seeded by `seed`.
PerturbedMap perturb(const VectorMap & map, const ScenarioSpec & spec, std::uint64_t seed);

/**
 * @brief Generate a fixed set of variants. Variant i uses derive_seed(seed, i). Scenario S1
 * is deterministic, so it always yields a single variant.
 */
std::vector<PerturbedMap> generate_variants(
  const VectorMap & map, const ScenarioSpec & spec, std::size_t count, std::uint64_t seed);
}  // namespace priormap

#endif  // PRIORMAP__PERTURB_HPP_
