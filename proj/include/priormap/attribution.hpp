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

#ifndef PRIORMAP__ATTRIBUTION_HPP_
#define PRIORMAP__ATTRIBUTION_HPP_

#include "priormap/geometry.hpp"
#include "priormap/hungarian.hpp"
#include "priormap/perturb.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace priormap
{
inline constexpr double kPinThreshold = 1.0;
inline constexpr double kClassMismatchPenalty = 10000.0;

enum class ScoreMode : std::uint8_t {
  kMeanThenNorm,  ///< norm of the mean point offset; opposite offsets cancel
  kMeanOfNorms,   ///< mean of per-point offset norms
};

/**
 * @brief Average point-wise displacement between two equal-length elements.
 *
 * With kMeanThenNorm this is || (1/L) sum_i (p_i - q_i) ||_2. Throws
 * ErrorCode::kInvalidArgument when the point counts differ.
 */
double displacement_score(const MapElement & a, const MapElement & b,
                          ScoreMode mode = ScoreMode::kMeanThenNorm);

struct PinnedPair
{
  std::size_t slot{0};
  std::size_t gt_index{0};
  double score{0.0};

  friend bool operator==(const PinnedPair &, const PinnedPair &) = default;
};

/**
 * @brief Pre-attributed pairs plus what is left for the solver. Together `pinned` and the
 * free lists partition both the slots and the ground-truth indices.
 */
struct PartialAssignment
{
  std::vector<PinnedPair> pinned;
  std::vector<std::size_t> free_slots;
  std::vector<std::size_t> free_gts;
};

/**
 * @brief Pin slot i (the i-th element of the perturbed map) to its source element when it
 * has one and their displacement score is strictly below `threshold`.
 *
 * `total_slots` extends the slot range beyond the perturbed elements (learned-query slots);
 * 0 means one slot per perturbed element. A correspondence naming an id absent from `gt`
 * throws ErrorCode::kCorruptInput.
 */
PartialAssignment pre_attribute(const PerturbedMap & perturbed, const VectorMap & gt,
                                double threshold = kPinThreshold, std::size_t total_slots = 0,
                                ScoreMode mode = ScoreMode::kMeanThenNorm);

/**
 * @brief Mean point-to-point distance minimized over both traversal directions of `pred`,
 * plus kClassMismatchPenalty when the classes differ.
 */
double matching_cost(const MapElement & pred, const MapElement & gt);

using CostFn = std::function<double(const MapElement & pred, const MapElement & gt)>;

struct SlotAssignment
{
  std::optional<std::size_t> gt_index;  ///< empty means background
  bool pinned{false};
  double cost{0.0};

  friend bool operator==(const SlotAssignment &, const SlotAssignment &) = default;
};

struct Assignment
{
  std::vector<SlotAssignment> slots;
  /// Shape of the free sub-problem handed to the solver (0 x 0 when it was skipped).
  std::size_t solver_rows{0};
  std::size_t solver_cols{0};
  bool solver_called{false};

  double total_cost() const noexcept;
};

struct MatchOptions
{
  CostFn cost{matching_cost};
  /// Cost of matching an empty slot to any ground truth.
  double empty_slot_cost{1.0e6};
};

/**
 * @brief Keep the pinned pairs, solve the free slots against the free ground truths with
 * hungarian(), and merge. Empty optional slots carry no prediction.
 */
Assignment match_with_preattribution(std::span<const std::optional<MapElement>> preds,
                                     const VectorMap & gt, const PartialAssignment & partial,
                                     const MatchOptions & options = {});
}  // namespace priormap

#endif  // PRIORMAP__ATTRIBUTION_HPP_
