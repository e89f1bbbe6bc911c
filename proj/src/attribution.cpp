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

#include "priormap/attribution.hpp"

#include "priormap/error.hpp"
#include "priormap/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace priormap
{
double displacement_score(const MapElement & a, const MapElement & b, ScoreMode mode)
{
  if (a.points.size() != b.points.size() || a.points.empty()) {
    raise(ErrorCode::kInvalidArgument, "displacement score needs equal, non-zero point counts (" +
                                         std::to_string(a.points.size()) + " vs " +
                                         std::to_string(b.points.size()) + ")");
  }
  const auto n = static_cast<double>(a.points.size());
  if (mode == ScoreMode::kMeanOfNorms) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
      sum += std::hypot(a.points[i].x - b.points[i].x, a.points[i].y - b.points[i].y);
    }
    return sum / n;
  }
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    sx += a.points[i].x - b.points[i].x;
    sy += a.points[i].y - b.points[i].y;
  }
  return std::hypot(sx / n, sy / n);
}

PartialAssignment pre_attribute(const PerturbedMap & perturbed, const VectorMap & gt,
                                double threshold, std::size_t total_slots, ScoreMode mode)
{
  const std::size_t n_elements = perturbed.map.elements.size();
  const std::size_t n_slots = total_slots == 0 ? n_elements : total_slots;
  if (n_slots < n_elements) {
    raise(ErrorCode::kInvalidArgument, "fewer slots than perturbed elements");
  }
  std::unordered_map<std::string, std::size_t> gt_index;
  for (std::size_t j = 0; j < gt.elements.size(); ++j) {
    gt_index.emplace(gt.elements[j].id, j);
  }

  PartialAssignment out;
  std::vector<bool> gt_taken(gt.elements.size(), false);
  for (std::size_t slot = 0; slot < n_elements; ++slot) {
    const MapElement & e = perturbed.map.elements[slot];
    const Correspondence * c = perturbed.correspondence_of(e.id);
    if (c == nullptr) {
      raise(ErrorCode::kCorruptInput, "element '" + e.id + "' has no correspondence");
    }
    if (!c->source_id) {
      out.free_slots.push_back(slot);
      continue;
    }
    const auto it = gt_index.find(*c->source_id);
    if (it == gt_index.end()) {
      raise(ErrorCode::kCorruptInput,
            "correspondence refers to missing ground-truth id '" + *c->source_id + "'");
    }
    if (gt_taken[it->second]) {
      raise(ErrorCode::kCorruptInput, "ground-truth id '" + *c->source_id + "' claimed twice");
    }
    const double score = displacement_score(e, gt.elements[it->second], mode);
    if (score < threshold) {
      out.pinned.push_back({slot, it->second, score});
      gt_taken[it->second] = true;
    } else {
      out.free_slots.push_back(slot);
    }
  }
  for (std::size_t slot = n_elements; slot < n_slots; ++slot) {
    out.free_slots.push_back(slot);
  }
  for (std::size_t j = 0; j < gt.elements.size(); ++j) {
    if (!gt_taken[j]) {
      out.free_gts.push_back(j);
    }
  }
  return out;
}

double matching_cost(const MapElement & pred, const MapElement & gt)
{
  const std::size_t n = pred.points.size();
  if (n != gt.points.size() || n == 0) {
    raise(ErrorCode::kInvalidArgument, "matching cost needs equal, non-zero point counts");
  }
  thread_local std::vector<double> scratch;
  scratch.resize(7 * n);
  double * px = scratch.data();
  double * py = px + n;
  double * rx = py + n;
  double * ry = rx + n;
  double * gx = ry + n;
  double * gy = gx + n;
  double * d = gy + n;
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = pred.points[i].x;
    py[i] = pred.points[i].y;
    rx[n - 1 - i] = pred.points[i].x;
    ry[n - 1 - i] = pred.points[i].y;
    gx[i] = gt.points[i].x;
    gy[i] = gt.points[i].y;
  }
  const auto & k = kernels::active_kernels();
  const auto mean_dist = [&](const double * ax, const double * ay) {
    k.pointwise_dist(ax, ay, gx, gy, n, d);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += d[i];
    }
    return sum / static_cast<double>(n);
  };
  const double forward = mean_dist(px, py);
  const double backward = mean_dist(rx, ry);
  const double penalty = pred.cls == gt.cls ? 0.0 : kClassMismatchPenalty;
  return std::min(forward, backward) + penalty;
}

double Assignment::total_cost() const noexcept
{
  double sum = 0.0;
  for (const auto & s : slots) {
    sum += s.cost;
  }
  return sum;
}

Assignment match_with_preattribution(std::span<const std::optional<MapElement>> preds,
                                     const VectorMap & gt, const PartialAssignment & partial,
                                     const MatchOptions & options)
{
  const std::size_t n_slots = preds.size();
  const std::size_t n_gt = gt.elements.size();
  std::vector<int> slot_seen(n_slots, 0);
  std::vector<int> gt_seen(n_gt, 0);
  for (const auto & pin : partial.pinned) {
    if (pin.slot >= n_slots || pin.gt_index >= n_gt) {
      raise(ErrorCode::kCorruptInput, "pinned pair out of range");
    }
    ++slot_seen[pin.slot];
    ++gt_seen[pin.gt_index];
  }
  for (const auto s : partial.free_slots) {
    if (s >= n_slots) {
      raise(ErrorCode::kCorruptInput, "free slot out of range");
    }
    ++slot_seen[s];
  }
  for (const auto g : partial.free_gts) {
    if (g >= n_gt) {
      raise(ErrorCode::kCorruptInput, "free ground truth out of range");
    }
    ++gt_seen[g];
  }
  const auto once = [](int c) { return c == 1; };
  if (!std::all_of(slot_seen.begin(), slot_seen.end(), once) ||
      !std::all_of(gt_seen.begin(), gt_seen.end(), once)) {
    raise(ErrorCode::kCorruptInput, "partial assignment does not partition slots and ground truths");
  }
  if (partial.free_gts.size() > partial.free_slots.size()) {
    raise(ErrorCode::kInvalidArgument, "more free ground truths than free prediction slots");
  }

  const auto pair_cost = [&](std::size_t slot, std::size_t g) {
    return preds[slot] ? options.cost(*preds[slot], gt.elements[g]) : options.empty_slot_cost;
  };

  Assignment out;
  out.slots.resize(n_slots);
  for (const auto & pin : partial.pinned) {
    out.slots[pin.slot] = {pin.gt_index, true, pair_cost(pin.slot, pin.gt_index)};
  }
  if (partial.free_gts.empty() || partial.free_slots.empty()) {
    return out;
  }

  const std::size_t rows = partial.free_slots.size();
  const std::size_t cols = partial.free_gts.size();
  CostMatrix cost(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      cost(r, c) = pair_cost(partial.free_slots[r], partial.free_gts[c]);
    }
  }
  const AssignmentSolution sol = hungarian(cost);
  out.solver_called = true;
  out.solver_rows = rows;
  out.solver_cols = cols;
  for (std::size_t r = 0; r < rows; ++r) {
    if (sol.row_to_col[r] >= 0) {
      const auto c = static_cast<std::size_t>(sol.row_to_col[r]);
      out.slots[partial.free_slots[r]] = {partial.free_gts[c], false, cost(r, c)};
    }
  }
  return out;
}
}  // namespace priormap
