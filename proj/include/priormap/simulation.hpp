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

#ifndef PRIORMAP__SIMULATION_HPP_
#define PRIORMAP__SIMULATION_HPP_

#include "priormap/attribution.hpp"
#include "priormap/geometry.hpp"
#include "priormap/metrics.hpp"
#include "priormap/perturb.hpp"
#include "priormap/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace priormap
{
/**
 * @brief Parameters of the synthetic road-patch generator.
 *
 * A road runs along y with 1-4 lanes of `lane_width_m`. Its two edges and up to three
 * outer curbs are boundaries, lane lines are dividers (some split in two dashes), and 0-4
 * crossings span the road. All geometry stays at least `margin_m` inside the patch.
 */
struct SynthSpec
{
  PatchExtent extent{};
  std::size_t min_lanes{1};
  std::size_t max_lanes{4};
  std::size_t max_crossings{4};
  double lane_width_m{3.5};
  double margin_m{0.0};
};

VectorMap synth_map(const SynthSpec & spec, Rng & rng);

/// `count` maps, map i generated from derive_seed(seed, i).
std::vector<VectorMap> synth_corpus(const SynthSpec & spec, std::size_t count, std::uint64_t seed);

enum class EstimatorMode : std::uint8_t {
  kCopyEx,       ///< the existing map is the prediction
  kOracleBlend,  ///< exact ground truth for pinned elements, noisy ground truth for the rest
  kNoisyGt,      ///< ground truth plus per-point Gaussian noise
};

std::string_view to_string(EstimatorMode mode) noexcept;

inline constexpr double kCopyExConfidence = 0.9;
inline constexpr double kPinnedConfidence = 0.9;
inline constexpr double kNoisyGtConfidence = 0.8;
inline constexpr double kSubstitutedConfidence = 1.0;

struct MockEstimatorSpec
{
  EstimatorMode mode{EstimatorMode::kNoisyGt};
  double sigma_pred{0.5};

  /// Parses "copy_ex", "oracle_blend[:sigma]" or "noisy_gt[:sigma]".
  static MockEstimatorSpec parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const MockEstimatorSpec &, const MockEstimatorSpec &) = default;
};

/**
 * @brief Mock predictions laid out over query slots: slots [0, n_ex) belong to the existing
 * map elements, later slots to learned queries.
 */
struct EstimatorOutput
{
  DetectionResult result;
  std::vector<std::size_t> slots;  ///< slot of each detection
  std::size_t num_slots{0};
};

EstimatorOutput mock_estimate(const VectorMap & gt, const PerturbedMap & ex,
                              const MockEstimatorSpec & spec, Rng & rng,
                              std::size_t min_slots = 50);

/// Change probability in [0, 1].
class ChangeScore
{
public:
  explicit ChangeScore(double value);
  double value() const noexcept { return value_; }

private:
  double value_;
};

struct SubstitutionResult
{
  DetectionResult result;
  bool early_exit{false};
};

/**
 * @brief Return the existing map (confidence 1) instead of `pred` when the change score is
 * below `tau`.
 */
SubstitutionResult substitute_if_unchanged(const DetectionResult & pred, const PerturbedMap & ex,
                                           ChangeScore change, double tau);

enum class ChangePolicy : std::uint8_t {
  kNone,    ///< never substitute
  kOracle,  ///< c = 0 exactly when the existing map is the untouched ground truth
};

struct PipelineOptions
{
  std::size_t slots{50};
  double pin_threshold{kPinThreshold};
  ChangePolicy change{ChangePolicy::kNone};
  double tau{0.5};
  /// Seeds the existing-map variants, which stay fixed across runs.
  std::uint64_t variant_seed{0};
};

struct SampleStats
{
  std::size_t ex_elements{0};
  std::size_t with_source{0};
  std::size_t pinned{0};
  std::size_t solver_rows{0};
  std::size_t solver_cols{0};
  bool unperturbed{false};
  bool early_exit{false};

  friend bool operator==(const SampleStats &, const SampleStats &) = default;
};

struct RunReport
{
  std::uint64_t seed{0};
  ApReport ap;
  std::vector<SampleStats> samples;
  double wall_ms{0.0};  ///< not part of equality or of the default serialization

  std::size_t total_pinned() const noexcept;
  std::size_t total_with_source() const noexcept;
  std::size_t early_exits() const noexcept;
  std::size_t unperturbed() const noexcept;

  friend bool operator==(const RunReport & a, const RunReport & b)
  {
    return a.seed == b.seed && a.ap == b.ap && a.samples == b.samples;
  }
};

struct PipelineReport
{
  ScenarioSpec scenario;
  MockEstimatorSpec estimator;
  PipelineOptions options;
  std::size_t corpus_size{0};
  std::vector<RunReport> runs;
  std::vector<MetricSummary> aggregate;

  const MetricSummary * metric(std::string_view key) const noexcept;

  friend bool operator==(const PipelineReport & a, const PipelineReport & b)
  {
    return a.scenario == b.scenario && a.estimator == b.estimator &&
           a.corpus_size == b.corpus_size && a.runs == b.runs && a.aggregate == b.aggregate;
  }
};

/**
 * @brief For each run seed: perturb every sample (variants fixed by options.variant_seed),
 * estimate, pre-attribute and match, evaluate over the whole corpus, then aggregate runs.
 *
 * Sample i of run s draws estimator noise from derive_seed(s, i), so results do not depend
 * on execution order.
 */
PipelineReport run_pipeline(std::span<const VectorMap> corpus, const ScenarioSpec & scenario,
                            const MockEstimatorSpec & estimator, std::span<const std::uint64_t> seeds,
                            const PipelineOptions & options = {});
}  // namespace priormap

#endif  // PRIORMAP__SIMULATION_HPP_
