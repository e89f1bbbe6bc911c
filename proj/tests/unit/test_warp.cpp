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


#include "priormap/error.hpp"
#include "priormap/warp.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace priormap
{
namespace
{
using testing::line_element;

VectorMap sample_map()
{
  VectorMap m;
  m.elements.push_back(line_element("a", ElementClass::kDivider, {-12, -28}, {11, 27}));
  m.elements.push_back(line_element("b", ElementClass::kBoundary, {5, -20}, {-3, 25}));
  return m;
}

TEST(TrigWarp, ZeroAmplitudeIsIdentity)
{
  const auto m = sample_map();
  EXPECT_EQ(trig_warp(m, 0.0, 0.0, 3.0), m);
}

TEST(TrigWarp, SineNodeLeavesXUnchanged)
{
  const PatchExtent ext;
  const Point p = trig_warp_point(ext, {4.25, 0.0}, 1.0, 0.0, 3.0);
  EXPECT_EQ(p.x, 4.25);
  EXPECT_EQ(p.y, 0.0);
}

TEST(TrigWarp, MaxLateralOffsetEqualsAmplitude)
{
  const PatchExtent ext;
  double best = 0.0;
  for (int i = 0; i <= 60000; ++i) {
    const double y = ext.y_min() + ext.width_m * i / 60000.0;
    const Point p = trig_warp_point(ext, {0.0, y}, 1.0, 0.0, 3.0);
    best = std::max(best, std::abs(p.x));
  }
  EXPECT_NEAR(best, 1.0, 1e-6);
}

TEST(TrigWarp, FormulaOracle)
{
  const PatchExtent ext;
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Point q{rng.uniform(-15, 15), rng.uniform(-30, 30)};
    const double ah = rng.uniform(0, 2);
    const double av = rng.uniform(0, 2);
    const double inc = rng.uniform(0, 5);
    const Point p = trig_warp_point(ext, q, ah, av, inc);
    EXPECT_NEAR(p.x, q.x + ah * std::sin(2 * M_PI * inc * q.y / 60.0), 1e-12);
    EXPECT_NEAR(p.y, q.y + av * std::sin(2 * M_PI * inc * q.x / 30.0), 1e-12);
  }
}

TEST(TrigWarp, RejectsNegativeAmplitude)
{
  EXPECT_THROW(trig_warp(sample_map(), -1.0, 0.0, 3.0), Error);
}

TEST(TriangularWarp, ZeroSigmaIsIdentity)
{
  const auto m = sample_map();
  Rng rng(1);
  const auto w = triangular_warp(m, 10.0, 0.0, rng);
  ASSERT_EQ(w.elements.size(), m.elements.size());
  for (std::size_t i = 0; i < m.elements.size(); ++i) {
    for (std::size_t k = 0; k < kCanonicalPoints; ++k) {
      EXPECT_NEAR(w.elements[i].points[k].x, m.elements[i].points[k].x, 1e-12);
      EXPECT_NEAR(w.elements[i].points[k].y, m.elements[i].points[k].y, 1e-12);
    }
  }
}

TEST(WarpGrid, NodesMapToDisplacedPositionsAndBorderIsFixed)
{
  const PatchExtent ext;
  WarpGrid g(ext, 10.0);
  EXPECT_EQ(g.cols(), 4u);
  EXPECT_EQ(g.rows(), 7u);
  Rng rng(3);
  g.jitter(1.0, rng);
  for (std::size_t iy = 0; iy < g.rows(); ++iy) {
    for (std::size_t ix = 0; ix < g.cols(); ++ix) {
      const Point src = g.source_node(ix, iy);
      const Point dst = g.target_node(ix, iy);
      if (g.is_border(ix, iy)) {
        EXPECT_EQ(src, dst);
      }
      const Point got = g.map(src);
      EXPECT_NEAR(got.x, dst.x, 1e-12);
      EXPECT_NEAR(got.y, dst.y, 1e-12);
    }
  }
}

/// Barycentric coordinates of p in triangle (a, b, c) via Cramer's rule.
std::array<double, 3> barycentric(Point p, Point a, Point b, Point c)
{
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
  const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
  return {1.0 - l1 - l2, l1, l2};
}

TEST(WarpGrid, InteriorPointsMatchBarycentricOracle)
{
  const PatchExtent ext;
  WarpGrid g(ext, 10.0);
  Rng rng(8);
  g.jitter(1.0, rng);
  Rng pts(9);
  for (int trial = 0; trial < 5000; ++trial) {
    const Point p{pts.uniform(ext.x_min(), ext.x_max()), pts.uniform(ext.y_min(), ext.y_max())};
    // Locate the source triangle by testing both halves of every cell.
    bool located = false;
    Point expected{};
    for (std::size_t iy = 0; iy + 1 < g.rows() && !located; ++iy) {
      for (std::size_t ix = 0; ix + 1 < g.cols() && !located; ++ix) {
        const std::array<std::array<std::size_t, 2>, 3> tri_a{{{ix, iy}, {ix + 1, iy}, {ix + 1, iy + 1}}};
        const std::array<std::array<std::size_t, 2>, 3> tri_b{{{ix, iy}, {ix, iy + 1}, {ix + 1, iy + 1}}};
        for (const auto & tri : {tri_a, tri_b}) {
          const auto w = barycentric(p, g.source_node(tri[0][0], tri[0][1]), g.source_node(tri[1][0], tri[1][1]),
                                     g.source_node(tri[2][0], tri[2][1]));
          if (w[0] >= -1e-12 && w[1] >= -1e-12 && w[2] >= -1e-12) {
            expected = {0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
              const Point t = g.target_node(tri[k][0], tri[k][1]);
              expected.x += w[k] * t.x;
              expected.y += w[k] * t.y;
            }
            located = true;
            break;
          }
        }
      }
    }
    ASSERT_TRUE(located);
    bool inside = false;
    const Point got = g.map(p, &inside);
    EXPECT_TRUE(inside);
    EXPECT_NEAR(got.x, expected.x, 1e-9);
    EXPECT_NEAR(got.y, expected.y, 1e-9);
  }
}

TEST(WarpGrid, OutsidePointsAreUnchanged)
{
  const PatchExtent ext;
  WarpGrid g(ext, 10.0);
  Rng rng(8);
  g.jitter(1.0, rng);
  bool inside = true;
  const Point p{40.0, 0.0};
  EXPECT_EQ(g.map(p, &inside), p);
  EXPECT_FALSE(inside);
}

TEST(TriangularWarp, CountsOutsidePoints)
{
  VectorMap m;
  m.elements.push_back(line_element("far", ElementClass::kDivider, {20, 0}, {22, 3}));
  Rng rng(2);
  std::size_t outside = 0;
  const auto w = triangular_warp(m, 10.0, 1.0, rng, &outside);
  EXPECT_EQ(outside, kCanonicalPoints);
  EXPECT_EQ(w, m);
}

TEST(Warps, PreserveIdsAndClasses)
{
  const auto m = sample_map();
  Rng rng(6);
  const auto a = trig_warp(m, 1.0, 1.0, 3.0);
  const auto b = triangular_warp(m, 10.0, 1.0, rng);
  for (const auto * w : {&a, &b}) {
    ASSERT_EQ(w->elements.size(), m.elements.size());
    for (std::size_t i = 0; i < m.elements.size(); ++i) {
      EXPECT_EQ(w->elements[i].id, m.elements[i].id);
      EXPECT_EQ(w->elements[i].cls, m.elements[i].cls);
    }
  }
}
}  // namespace
}  // namespace priormap
