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

#ifndef PRIORMAP__WARP_HPP_
#define PRIORMAP__WARP_HPP_

#include "priormap/geometry.hpp"
#include "priormap/rng.hpp"

#include <cstddef>
#include <vector>

namespace priormap
{
/**
 * @brief Smooth sinusoidal warp.
 *
 *   x' = x + amp_h * sin(2 pi * inclination * y / y_span)
 *   y' = y + amp_v * sin(2 pi * inclination * x / x_span)
 *
 * where x_span = extent.height_m and y_span = extent.width_m, so `inclination` counts sine
 * periods across the patch.
 */
Point trig_warp_point(const PatchExtent & extent, Point p, double amp_h, double amp_v,
                      double inclination) noexcept;

VectorMap trig_warp(const VectorMap & map, double amp_h, double amp_v, double inclination);

/**
 * @brief Regular grid over the patch with jittered interior nodes.
 *
 * Each cell splits along its lower-left to upper-right diagonal into two triangles. A point
 * is mapped by the affine transform taking its source triangle onto the displaced one.
 */
class WarpGrid
{
public:
  /// Cells per axis are round(span / spacing), at least one.
  WarpGrid(const PatchExtent & extent, double spacing);

  /// Displace interior nodes by N(0, sigma^2) per coordinate, clamped to the patch.
  void jitter(double sigma, Rng & rng);

  std::size_t cols() const noexcept { return nx_ + 1; }
  std::size_t rows() const noexcept { return ny_ + 1; }
  Point source_node(std::size_t ix, std::size_t iy) const noexcept;
  Point target_node(std::size_t ix, std::size_t iy) const noexcept
  {
    return target_[iy * (nx_ + 1) + ix];
  }
  bool is_border(std::size_t ix, std::size_t iy) const noexcept
  {
    return ix == 0 || iy == 0 || ix == nx_ || iy == ny_;
  }

  /// Maps `p`; points outside the grid come back unchanged with `inside` set to false.
  Point map(Point p, bool * inside = nullptr) const noexcept;

private:
  PatchExtent extent_;
  std::size_t nx_;
  std::size_t ny_;
  double dx_;
  double dy_;
  std::vector<Point> target_;
};

VectorMap triangular_warp(const VectorMap & map, double grid_spacing, double grid_sigma,
                          Rng & rng, std::size_t * outside_points = nullptr);
}  // namespace priormap

#endif  // PRIORMAP__WARP_HPP_
