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

#include "priormap/warp.hpp"

#include "priormap/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace priormap
{
Point trig_warp_point(const PatchExtent & extent, Point p, double amp_h, double amp_v,
                      double inclination) noexcept
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return {p.x + amp_h * std::sin(two_pi * inclination * p.y / extent.width_m),
          p.y + amp_v * std::sin(two_pi * inclination * p.x / extent.height_m)};
}

VectorMap trig_warp(const VectorMap & map, double amp_h, double amp_v, double inclination)
{
  if (amp_h < 0.0 || amp_v < 0.0) {
    raise(ErrorCode::kInvalidArgument, "warp amplitudes must be non-negative");
  }
  VectorMap out = map;
  for (auto & e : out.elements) {
    for (auto & p : e.points) {
      p = trig_warp_point(map.extent, p, amp_h, amp_v, inclination);
    }
  }
  return out;
}

WarpGrid::WarpGrid(const PatchExtent & extent, double spacing) : extent_(extent)
{
  if (!(spacing > 0.0)) {
    raise(ErrorCode::kInvalidArgument, "grid spacing must be positive");
  }
  nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(extent.height_m / spacing)));
  ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(extent.width_m / spacing)));
  dx_ = extent.height_m / static_cast<double>(nx_);
  dy_ = extent.width_m / static_cast<double>(ny_);
  target_.reserve(cols() * rows());
  for (std::size_t iy = 0; iy <= ny_; ++iy) {
    for (std::size_t ix = 0; ix <= nx_; ++ix) {
      target_.push_back(source_node(ix, iy));
    }
  }
}

Point WarpGrid::source_node(std::size_t ix, std::size_t iy) const noexcept
{
  const double x = ix == nx_ ? extent_.x_max() : extent_.x_min() + static_cast<double>(ix) * dx_;
  const double y = iy == ny_ ? extent_.y_max() : extent_.y_min() + static_cast<double>(iy) * dy_;
  return {x, y};
}

void WarpGrid::jitter(double sigma, Rng & rng)
{
  if (sigma < 0.0) {
    raise(ErrorCode::kInvalidArgument, "grid sigma must be non-negative");
  }
  for (std::size_t iy = 0; iy <= ny_; ++iy) {
    for (std::size_t ix = 0; ix <= nx_; ++ix) {
      if (is_border(ix, iy)) {
        continue;
      }
      Point & t = target_[iy * (nx_ + 1) + ix];
      const double ox = rng.normal(0.0, sigma);
      const double oy = rng.normal(0.0, sigma);
      t.x = std::clamp(t.x + ox, extent_.x_min(), extent_.x_max());
      t.y = std::clamp(t.y + oy, extent_.y_min(), extent_.y_max());
    }
  }
}

Point WarpGrid::map(Point p, bool * inside) const noexcept
{
  if (!extent_.contains(p)) {
    if (inside != nullptr) {
      *inside = false;
    }
    return p;
  }
  if (inside != nullptr) {
    *inside = true;
  }
  const double u = (p.x - extent_.x_min()) / dx_;
  const double v = (p.y - extent_.y_min()) / dy_;
  const std::size_t ix = std::min(nx_ - 1, static_cast<std::size_t>(std::max(0.0, std::floor(u))));
  const std::size_t iy = std::min(ny_ - 1, static_cast<std::size_t>(std::max(0.0, std::floor(v))));
  const double fx = std::clamp(u - static_cast<double>(ix), 0.0, 1.0);
  const double fy = std::clamp(v - static_cast<double>(iy), 0.0, 1.0);

  const Point t00 = target_node(ix, iy);
  const Point t11 = target_node(ix + 1, iy + 1);
  Point ta;
  double w0, wa, w11;
  if (fx >= fy) {
    ta = target_node(ix + 1, iy);
    w0 = 1.0 - fx;
    wa = fx - fy;
    w11 = fy;
  } else {
    ta = target_node(ix, iy + 1);
    w0 = 1.0 - fy;
    wa = fy - fx;
    w11 = fx;
  }
  return {w0 * t00.x + wa * ta.x + w11 * t11.x, w0 * t00.y + wa * ta.y + w11 * t11.y};
}

VectorMap triangular_warp(const VectorMap & map, double grid_spacing, double grid_sigma,
                          Rng & rng, std::size_t * outside_points)
{
  WarpGrid grid(map.extent, grid_spacing);
  grid.jitter(grid_sigma, rng);
  std::size_t outside = 0;
  VectorMap out = map;
  for (auto & e : out.elements) {
    for (auto & p : e.points) {
      bool inside = true;
      p = grid.map(p, &inside);
      outside += inside ? 0 : 1;
    }
  }
  if (outside_points != nullptr) {
    *outside_points = outside;
  }
  return out;
}
}  // namespace priormap
