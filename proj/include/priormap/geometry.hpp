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

#ifndef PRIORMAP__GEOMETRY_HPP_
#define PRIORMAP__GEOMETRY_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace priormap
{
/// Number of points in the canonical form of a map element.
inline constexpr std::size_t kCanonicalPoints = 20;
/// Number of points an element is upsampled to before Chamfer evaluation.
inline constexpr std::size_t kEvalPoints = 100;

struct Point
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point &, const Point &) = default;
};

using Polyline = std::vector<Point>;

/**
 * @brief Map element classes. The integer codes are part of every file format and of the
 * query encoding, so they must never be reordered.
 */
enum class ElementClass : std::uint8_t {
  kDivider = 0,
  kPedCrossing = 1,
  kBoundary = 2,
};

inline constexpr std::size_t kNumClasses = 3;
inline constexpr std::array<ElementClass, kNumClasses> kAllClasses{
  ElementClass::kDivider, ElementClass::kPedCrossing, ElementClass::kBoundary};

constexpr std::size_t class_index(ElementClass c) noexcept
{
  return static_cast<std::size_t>(c);
}

std::string_view to_string(ElementClass c) noexcept;
std::optional<ElementClass> class_from_string(std::string_view tag) noexcept;

/**
 * @brief One classed polyline. Pedestrian crossings are stored as closed polylines whose
 * last point repeats the first.
 */
struct MapElement
{
  std::string id;
  ElementClass cls{ElementClass::kDivider};
  bool closed{false};
  Polyline points;

  friend bool operator==(const MapElement &, const MapElement &) = default;
};

/**
 * @brief Rectangular ego-centric patch.
 *
 * `width_m` spans the longitudinal y axis and `height_m` the lateral x axis, so the default
 * 60 m x 30 m patch covers x in [-15, 15] and y in [-30, 30].
 */
struct PatchExtent
{
  double width_m{60.0};
  double height_m{30.0};

  double x_min() const noexcept { return -0.5 * height_m; }
  double x_max() const noexcept { return 0.5 * height_m; }
  double y_min() const noexcept { return -0.5 * width_m; }
  double y_max() const noexcept { return 0.5 * width_m; }

  bool contains(const Point & p) const noexcept
  {
    return p.x >= x_min() && p.x <= x_max() && p.y >= y_min() && p.y <= y_max();
  }

  friend bool operator==(const PatchExtent &, const PatchExtent &) = default;
};

struct VectorMap
{
  PatchExtent extent;
  std::vector<MapElement> elements;

  const MapElement * find(std::string_view id) const noexcept;

  friend bool operator==(const VectorMap &, const VectorMap &) = default;
};

/// Throws unless extent sides are positive, ids are unique and all coordinates are finite.
void validate(const VectorMap & map);

double polyline_length(std::span<const Point> points) noexcept;

/**
 * @brief Resample a polyline to `count` points spaced at equal arc length.
 *
 * The first and last input vertices are reproduced exactly. Throws
 * ErrorCode::kDegenerateGeometry when the polyline has zero length.
 */
Polyline resample_polyline(std::span<const Point> points, std::size_t count);

/// Resample an element's geometry to `count` points for evaluation.
Polyline upsample_for_eval(const MapElement & element, std::size_t count = kEvalPoints);

/**
 * @brief Symmetric average Chamfer distance between two point sets.
 *
 * Mean nearest-neighbour distance from `a` to `b`, averaged with the reverse direction.
 */
double chamfer_distance(std::span<const Point> a, std::span<const Point> b);

/**
 * @brief Clip every element to the patch rectangle.
 *
 * Open polylines keep their longest inside piece, closed ones are clipped as polygons.
 * Elements lying fully inside are returned untouched; clipped elements are resampled to
 * `points_per_element` points; elements with nothing left inside are dropped.
 */
VectorMap clip_to_patch(const VectorMap & map, std::size_t points_per_element = kCanonicalPoints);

MapElement translated(const MapElement & element, double dx, double dy);
}  // namespace priormap

#endif  // PRIORMAP__GEOMETRY_HPP_
