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

#ifndef PRIORMAP__RENDER_HPP_
#define PRIORMAP__RENDER_HPP_

#include "priormap/geometry.hpp"
#include "priormap/metrics.hpp"
#include "priormap/perturb.hpp"

#include <span>
#include <string>
#include <vector>

namespace priormap
{
/// One patch drawn in its own frame. `labels` and `opacity` are per element or empty.
struct SvgPanel
{
  std::string title;
  PatchExtent extent;
  std::vector<MapElement> elements;
  std::vector<std::string> labels;
  std::vector<double> opacity;
};

SvgPanel panel_from_map(const VectorMap & map, std::string title);

/// Labels each element with its source id, or "new" for inserted elements, when `annotate`.
SvgPanel panel_from_variant(const PerturbedMap & variant, std::string title, bool annotate);

/// Detections with confidence below `min_confidence` are omitted; the rest are drawn with
/// opacity equal to their confidence.
SvgPanel panel_from_detections(const DetectionResult & result, const PatchExtent & extent,
                               std::string title, double min_confidence = 0.0);

/**
 * @brief Stack panels vertically into one SVG document.
 *
 * The patch's y axis runs left to right and x runs bottom to top. Output depends only on the
 * inputs, with coordinates printed at fixed precision.
 */
std::string render_svg(std::span<const SvgPanel> panels, double px_per_m = 10.0);
}  // namespace priormap

#endif  // PRIORMAP__RENDER_HPP_
