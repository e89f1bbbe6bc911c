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

#include "priormap/geometry.hpp"

#include "priormap/error.hpp"
#include "priormap/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace priormap
{
std::string_view to_string(ElementClass c) noexcept
{
  switch (c) {
    case ElementClass::kDivider:
      return "divider";
    case ElementClass::kPedCrossing:
      return "ped_crossing";
    case ElementClass::kBoundary:
      return "boundary";
  }
  return "unknown";
}

std::optional<ElementClass> class_from_string(std::string_view tag) noexcept
{
  for (const auto c : kAllClasses) {
    if (to_string(c) == tag) {
      return c;
    }
  }
  return std::nullopt;
}

const MapElement * VectorMap::find(std::string_view id) const noexcept
{
  for (const auto & e : elements) {
    if (e.id == id) {
      return &e;
    }
  }
  return nullptr;
}

void validate(const VectorMap & map)
{
  if (!(map.extent.width_m > 0.0) || !(map.extent.height_m > 0.0)) {
    raise(ErrorCode::kInvalidArgument, "patch extent sides must be positive");
  }
  std::unordered_set<std::string> ids;
  for (const auto & e : map.elements) {
    if (!ids.insert(e.id).second) {
      raise(ErrorCode::kDuplicateId, "duplicate element id '" + e.id + "'");
    }
    if (e.points.empty()) {
      raise(ErrorCode::kCanonicalForm, "element '" + e.id + "' has no points");
    }
    for (const auto & p : e.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        raise(ErrorCode::kNonFinite, "element '" + e.id + "' has a non-finite coordinate");
      }
    }
  }
}

double polyline_length(std::span<const Point> points) noexcept
{
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  }
  return total;
}

Polyline resample_polyline(std::span<const Point> points, std::size_t count)
{
  if (count < 2) {
    raise(ErrorCode::kInvalidArgument, "resample count must be at least 2");
  }
  if (points.size() < 2) {
    raise(ErrorCode::kDegenerateGeometry, "polyline needs at least two vertices");
  }
  std::vector<double> cumulative(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    cumulative[i] = cumulative[i - 1] +
                    std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) {
    raise(ErrorCode::kDegenerateGeometry, "polyline has zero length");
  }

  Polyline out;
  out.reserve(count);
  out.push_back(points.front());
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < count; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(count - 1);
    while (seg + 2 < points.size() && cumulative[seg + 1] < target) {
      ++seg;
    }
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double t = len > 0.0 ? std::clamp((target - cumulative[seg]) / len, 0.0, 1.0) : 0.0;
    const Point & a = points[seg];
    const Point & b = points[seg + 1];
    out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
  }
  out.push_back(points.back());
  return out;
}

Polyline upsample_for_eval(const MapElement & element, std::size_t count)
{
  return resample_polyline(element.points, count);
}

double chamfer_distance(std::span<const Point> a, std::span<const Point> b)
{
  if (a.empty() || b.empty()) {
    raise(ErrorCode::kInvalidArgument, "chamfer distance of an empty polyline");
  }
  const auto split = [](std::span<const Point> p, std::vector<double> & xs,
                        std::vector<double> & ys) {
    xs.resize(p.size());
    ys.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      xs[i] = p[i].x;
      ys[i] = p[i].y;
    }
  };
  std::vector<double> ax, ay, bx, by;
  split(a, ax, ay);
  split(b, bx, by);

  const auto & k = kernels::active_kernels();
  const auto directed = [&](const std::vector<double> & px, const std::vector<double> & py,
                            const std::vector<double> & qx, const std::vector<double> & qy) {
    std::vector<double> d(px.size());
    k.nearest_sq_dist(px.data(), py.data(), px.size(), qx.data(), qy.data(), qx.size(), d.data());
    double sum = 0.0;
    for (const double v : d) {
      sum += std::sqrt(v);
    }
    return sum / static_cast<double>(px.size());
  };
  return 0.5 * (directed(ax, ay, bx, by) + directed(bx, by, ax, ay));
}

namespace
{
// Liang-Barsky; returns false when the segment misses the rectangle.
bool clip_segment(const PatchExtent & ext, Point a, Point b, double & t0, double & t1)
{
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  t0 = 0.0;
  t1 = 1.0;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - ext.x_min(), ext.x_max() - a.x, a.y - ext.y_min(), ext.y_max() - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) {
        return false;
      }
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) {
      return false;
    }
  }
  return true;
}

Point lerp(Point a, Point b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

Point clamp_to(const PatchExtent & ext, Point p)
{
  return {std::clamp(p.x, ext.x_min(), ext.x_max()), std::clamp(p.y, ext.y_min(), ext.y_max())};
}

Polyline clip_open(const PatchExtent & ext, const Polyline & pts)
{
  std::vector<Polyline> pieces;
  Polyline current;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double t0 = 0.0;
    double t1 = 1.0;
    if (!clip_segment(ext, pts[i], pts[i + 1], t0, t1)) {
      if (!current.empty()) {
        pieces.push_back(std::move(current));
        current.clear();
      }
      continue;
    }
    const Point s = t0 == 0.0 ? pts[i] : clamp_to(ext, lerp(pts[i], pts[i + 1], t0));
    const Point e = t1 == 1.0 ? pts[i + 1] : clamp_to(ext, lerp(pts[i], pts[i + 1], t1));
    if (current.empty() || t0 > 0.0) {
      if (!current.empty()) {
        pieces.push_back(std::move(current));
        current.clear();
      }
      current.push_back(s);
    }
    current.push_back(e);
    if (t1 < 1.0) {
      pieces.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    pieces.push_back(std::move(current));
  }
  Polyline best;
  double best_len = 0.0;
  for (auto & piece : pieces) {
    const double len = polyline_length(piece);
    if (len > best_len) {
      best_len = len;
      best = std::move(piece);
    }
  }
  return best;
}

// Sutherland-Hodgman against the four patch edges.
Polyline clip_closed(const PatchExtent & ext, const Polyline & pts)
{
  Polyline poly(pts.begin(), pts.end());
  if (poly.size() > 1 && poly.front() == poly.back()) {
    poly.pop_back();
  }
  const auto clip_edge = [](const Polyline & in, auto inside, auto intersect) {
    Polyline out;
    if (in.empty()) {
      return out;
    }
    Point prev = in.back();
    bool prev_in = inside(prev);
    for (const Point & cur : in) {
      const bool cur_in = inside(cur);
      if (cur_in != prev_in) {
        out.push_back(intersect(prev, cur));
      }
      if (cur_in) {
        out.push_back(cur);
      }
      prev = cur;
      prev_in = cur_in;
    }
    return out;
  };
  const auto at_x = [](double x) {
    return [x](Point a, Point b) {
      const double t = (x - a.x) / (b.x - a.x);
      return Point{x, a.y + t * (b.y - a.y)};
    };
  };
  const auto at_y = [](double y) {
    return [y](Point a, Point b) {
      const double t = (y - a.y) / (b.y - a.y);
      return Point{a.x + t * (b.x - a.x), y};
    };
  };
  const double x0 = ext.x_min(), x1 = ext.x_max(), y0 = ext.y_min(), y1 = ext.y_max();
  poly = clip_edge(poly, [x0](Point p) { return p.x >= x0; }, at_x(x0));
  poly = clip_edge(poly, [x1](Point p) { return p.x <= x1; }, at_x(x1));
  poly = clip_edge(poly, [y0](Point p) { return p.y >= y0; }, at_y(y0));
  poly = clip_edge(poly, [y1](Point p) { return p.y <= y1; }, at_y(y1));
  if (poly.size() < 3) {
    return {};
  }
  poly.push_back(poly.front());
  return poly;
}
}  // namespace

VectorMap clip_to_patch(const VectorMap & map, std::size_t points_per_element)
{
  VectorMap out;
  out.extent = map.extent;
  out.elements.reserve(map.elements.size());
  for (const auto & e : map.elements) {
    const bool inside = std::all_of(
      e.points.begin(), e.points.end(), [&](const Point & p) { return map.extent.contains(p); });
    if (inside) {
      out.elements.push_back(e);
      continue;
    }
    Polyline kept = e.closed ? clip_closed(map.extent, e.points) : clip_open(map.extent, e.points);
    if (kept.size() < 2 || !(polyline_length(kept) > 0.0)) {
      continue;
    }
    MapElement clipped{e.id, e.cls, e.closed, resample_polyline(kept, points_per_element)};
    for (auto & p : clipped.points) {
      p = clamp_to(map.extent, p);
    }
    out.elements.push_back(std::move(clipped));
  }
  return out;
}

MapElement translated(const MapElement & element, double dx, double dy)
{
  MapElement out = element;
  for (auto & p : out.points) {
    p.x += dx;
    p.y += dy;
  }
  return out;
}
}  // namespace priormap
