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
#include "priormap/geometry.hpp"
#include "priormap/hungarian.hpp"
#include "priormap/kernels/kernels.hpp"
#include "priormap/rng.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cstring>
#include <limits>
#include <vector>

namespace priormap
{
namespace
{
using kernels::KernelTable;

const KernelTable * simd_or_skip()
{
  return kernels::avx2_kernels();
}

bool bit_equal(const std::vector<double> & a, const std::vector<double> & b)
{
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> random_vec(Rng & rng, std::size_t n, double lo, double hi)
{
  std::vector<double> v(n);
  for (auto & x : v) {
    x = rng.uniform(lo, hi);
  }
  return v;
}

class KernelEquivalence : public ::testing::Test
{
protected:
  void SetUp() override
  {
    simd_ = simd_or_skip();
    if (simd_ == nullptr) {
      GTEST_SKIP() << "no SIMD kernels on this CPU";
    }
  }
  void TearDown() override { kernels::set_active_kernels(nullptr); }

  const KernelTable & scalar_ = kernels::scalar_kernels();
  const KernelTable * simd_ = nullptr;
};

TEST_F(KernelEquivalence, NearestSqDist)
{
  Rng rng(1);
  for (std::size_t na = 1; na <= 23; ++na) {
    for (std::size_t nb : {1u, 2u, 3u, 5u, 8u, 17u, 100u}) {
      const auto ax = random_vec(rng, na, -30, 30);
      const auto ay = random_vec(rng, na, -30, 30);
      const auto bx = random_vec(rng, nb, -30, 30);
      const auto by = random_vec(rng, nb, -30, 30);
      std::vector<double> o1(na);
      std::vector<double> o2(na);
      scalar_.nearest_sq_dist(ax.data(), ay.data(), na, bx.data(), by.data(), nb, o1.data());
      simd_->nearest_sq_dist(ax.data(), ay.data(), na, bx.data(), by.data(), nb, o2.data());
      ASSERT_TRUE(bit_equal(o1, o2)) << na << " x " << nb;
    }
  }
}

TEST_F(KernelEquivalence, PointwiseDist)
{
  Rng rng(2);
  for (std::size_t n = 0; n <= 41; ++n) {
    const auto ax = random_vec(rng, n, -30, 30);
    const auto ay = random_vec(rng, n, -30, 30);
    const auto bx = random_vec(rng, n, -30, 30);
    const auto by = random_vec(rng, n, -30, 30);
    std::vector<double> o1(n);
    std::vector<double> o2(n);
    scalar_.pointwise_dist(ax.data(), ay.data(), bx.data(), by.data(), n, o1.data());
    simd_->pointwise_dist(ax.data(), ay.data(), bx.data(), by.data(), n, o2.data());
    ASSERT_TRUE(bit_equal(o1, o2)) << n;
  }
}

TEST_F(KernelEquivalence, HungarianScanWithTies)
{
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng.index(37);
    // Few distinct values so ties between columns are common.
    std::vector<double> row(n);
    for (auto & x : row) {
      x = static_cast<double>(rng.index(4));
    }
    std::vector<double> v(n + 1);
    std::vector<double> minv(n + 1);
    std::vector<std::int64_t> used(n + 1);
    std::vector<std::int64_t> way(n + 1, -7);
    for (std::size_t j = 0; j <= n; ++j) {
      v[j] = static_cast<double>(rng.index(3)) - 1.0;
      minv[j] = rng.bernoulli(0.3) ? std::numeric_limits<double>::infinity()
                                   : static_cast<double>(rng.index(5));
      used[j] = rng.bernoulli(0.3) ? 1 : 0;
    }
    used[0] = 1;
    const double u_row = static_cast<double>(rng.index(3));
    const auto j0 = static_cast<std::int64_t>(rng.index(n + 1));
    auto minv2 = minv;
    auto way2 = way;
    std::int64_t b1 = -1;
    std::int64_t b2 = -1;
    const double d1 = scalar_.hungarian_scan(row.data(), u_row, v.data(), minv.data(), way.data(),
                                             used.data(), j0, n, &b1);
    const double d2 = simd_->hungarian_scan(row.data(), u_row, v.data(), minv2.data(), way2.data(),
                                            used.data(), j0, n, &b2);
    ASSERT_EQ(std::memcmp(&d1, &d2, sizeof d1), 0);
    ASSERT_EQ(b1, b2);
    ASSERT_TRUE(bit_equal(minv, minv2));
    ASSERT_EQ(way, way2);
  }
}

TEST_F(KernelEquivalence, HungarianShift)
{
  Rng rng(4);
  for (std::size_t n = 0; n <= 40; ++n) {
    auto v = random_vec(rng, n + 1, -3, 3);
    auto minv = random_vec(rng, n + 1, -3, 3);
    std::vector<std::int64_t> used(n + 1);
    for (auto & u : used) {
      u = rng.bernoulli(0.5) ? 1 : 0;
    }
    auto v2 = v;
    auto minv2 = minv;
    const double delta = rng.uniform(-1, 1);
    scalar_.hungarian_shift(v.data(), minv.data(), used.data(), delta, n);
    simd_->hungarian_shift(v2.data(), minv2.data(), used.data(), delta, n);
    ASSERT_TRUE(bit_equal(v, v2));
    ASSERT_TRUE(bit_equal(minv, minv2));
  }
}

TEST_F(KernelEquivalence, EndToEndResultsIdentical)
{
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng.index(60);
    CostMatrix m(n, n + rng.index(5));
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        m(r, c) = rng.uniform();
      }
    }
    const MapElement a = testing::random_element("a", rng);
    const MapElement b = testing::random_element("b", rng);
    kernels::set_active_kernels(&scalar_);
    const auto s1 = hungarian(m);
    const double c1 = matching_cost(a, b);
    const double h1 = chamfer_distance(a.points, b.points);
    kernels::set_active_kernels(simd_);
    const auto s2 = hungarian(m);
    const double c2 = matching_cost(a, b);
    const double h2 = chamfer_distance(a.points, b.points);
    EXPECT_EQ(s1.row_to_col, s2.row_to_col);
    EXPECT_EQ(std::memcmp(&s1.total_cost, &s2.total_cost, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&c1, &c2, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&h1, &h2, sizeof(double)), 0);
  }
}

TEST(KernelDispatch, OverrideAndRestore)
{
  kernels::set_active_kernels(&kernels::scalar_kernels());
  EXPECT_EQ(kernels::active_kernels().name, "scalar");
  kernels::set_active_kernels(nullptr);
  const auto * simd = kernels::avx2_kernels();
  if (simd != nullptr && std::getenv("PRIORMAP_SIMD") == nullptr) {
    EXPECT_EQ(kernels::active_kernels().name, simd->name);
  } else {
    EXPECT_EQ(kernels::active_kernels().name, "scalar");
  }
}
}  // namespace
}  // namespace priormap
