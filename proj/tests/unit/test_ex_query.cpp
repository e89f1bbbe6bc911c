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
#include "priormap/ex_query.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace priormap
{
namespace
{
using testing::line_element;

TEST(Encode, LayoutForBoundaryPoint)
{
  MapElement e{"b", ElementClass::kBoundary, false, {{1.5, -2.0}, {3.0, 1.0}}};
  const auto q = encode_element(e, 8);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q[0], (QueryVector{1.5, -2.0, 0, 0, 1, 0, 0, 0}));
}

TEST(Encode, DividerOneHotAndZeroPadding)
{
  Rng rng(1);
  const auto e = line_element("d", ElementClass::kDivider, {rng.uniform(), rng.uniform()}, {4, 4});
  for (const auto & q : encode_element(e, kDefaultQueryWidth)) {
    ASSERT_EQ(q.size(), kDefaultQueryWidth);
    EXPECT_EQ(q[2], 1.0);
    EXPECT_EQ(q[3], 0.0);
    EXPECT_EQ(q[4], 0.0);
    double tail = 0.0;
    for (std::size_t i = kEncodedDims; i < q.size(); ++i) {
      tail += std::abs(q[i]);
    }
    EXPECT_EQ(tail, 0.0);
  }
}

TEST(Encode, WidthTooSmall)
{
  const auto e = line_element("d", ElementClass::kDivider, {0, 0}, {1, 1});
  EXPECT_THROW(encode_element(e, 4), Error);
  EXPECT_NO_THROW(encode_element(e, 5));
}

TEST(Decode, RejectsMalformedOneHot)
{
  std::vector<QueryVector> q{{0, 0, 1, 1, 0, 0}};
  EXPECT_THROW(decode_element(q), Error);
  q = {{0, 0, 0.5, 0, 0, 0}};
  EXPECT_THROW(decode_element(q), Error);
}

TEST(Encode, RoundTripIsExact)
{
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    MapElement e{"e", kAllClasses[rng.index(3)], false, {}};
    for (std::size_t i = 0; i < kCanonicalPoints; ++i) {
      e.points.push_back({rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3)});
    }
    const auto d = decode_element(encode_element(e, 16));
    EXPECT_EQ(d.cls, e.cls);
    EXPECT_EQ(d.points, e.points);
  }
}

TEST(Encode, InjectiveOnDistinctElements)
{
  const auto a = line_element("a", ElementClass::kDivider, {0, 0}, {1, 1});
  auto b = a;
  b.points[7].y = std::nextafter(b.points[7].y, 10.0);
  EXPECT_NE(encode_element(a, 8), encode_element(b, 8));
  auto c = a;
  c.cls = ElementClass::kBoundary;
  EXPECT_NE(encode_element(a, 8), encode_element(c, 8));
}

TEST(Pool, DeterministicAndNonZeroTail)
{
  const auto p1 = LearnedQueryPool::stub(10, kCanonicalPoints, 32, 5);
  const auto p2 = LearnedQueryPool::stub(10, kCanonicalPoints, 32, 5);
  for (std::size_t g = 0; g < 10; ++g) {
    for (std::size_t i = 0; i < kCanonicalPoints; ++i) {
      const auto a = p1.query(g, i);
      const auto b = p2.query(g, i);
      ASSERT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
      bool nonzero = false;
      for (std::size_t k = kEncodedDims; k < a.size(); ++k) {
        EXPECT_GT(a[k], -0.1);
        EXPECT_LT(a[k], 0.1);
        nonzero = nonzero || a[k] != 0.0;
      }
      EXPECT_TRUE(nonzero);
    }
  }
  EXPECT_THROW(LearnedQueryPool::stub(1, 1, 5, 0), Error);
}

TEST(Pool, DistinctFromEveryExQuery)
{
  Rng rng(3);
  const auto pool = LearnedQueryPool::stub(20, kCanonicalPoints, 16, 9);
  for (int k = 0; k < 30; ++k) {
    const auto e = testing::random_element("e", rng);
    for (const auto & q : encode_element(e, 16)) {
      for (std::size_t g = 0; g < pool.groups(); ++g) {
        for (std::size_t i = 0; i < pool.points(); ++i) {
          const auto p = pool.query(g, i);
          double d2 = 0.0;
          for (std::size_t j = 0; j < 16; ++j) {
            d2 += (p[j] - q[j]) * (p[j] - q[j]);
          }
          ASSERT_GT(std::sqrt(d2), 0.0);
        }
      }
    }
  }
}

std::vector<MapElement> elements(std::size_t n)
{
  Rng rng(n + 1);
  std::vector<MapElement> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(testing::random_element("e" + std::to_string(i), rng));
  }
  return out;
}

TEST(Assemble, AllLearnedWhenNoElements)
{
  const auto pool = LearnedQueryPool::stub(50, kCanonicalPoints, 16, 1);
  const auto qs = assemble_query_set({}, pool, 50, kCanonicalPoints, 16);
  EXPECT_EQ(qs.n_ex, 0u);
  ASSERT_EQ(qs.provenance.size(), 50u);
  for (std::size_t g = 0; g < 50; ++g) {
    EXPECT_EQ(qs.provenance[g].kind, QuerySlot::Kind::kLearned);
    EXPECT_EQ(qs.provenance[g].pool_index, g);
  }
}

TEST(Assemble, AllExWhenFull)
{
  const auto els = elements(50);
  const auto pool = LearnedQueryPool::stub(50, kCanonicalPoints, 16, 1);
  const auto qs = assemble_query_set(els, pool, 50, kCanonicalPoints, 16);
  EXPECT_EQ(qs.n_ex, 50u);
  for (std::size_t g = 0; g < 50; ++g) {
    EXPECT_EQ(qs.provenance[g].kind, QuerySlot::Kind::kEx);
    EXPECT_EQ(qs.provenance[g].element_id, els[g].id);
  }
}

TEST(Assemble, ProvenanceCounts)
{
  const auto els = elements(3);
  const auto pool = LearnedQueryPool::stub(50, kCanonicalPoints, kDefaultQueryWidth, 1);
  const auto qs = assemble_query_set(els, pool, 50, kCanonicalPoints, kDefaultQueryWidth);
  EXPECT_EQ(qs.groups * qs.points, 1000u);
  EXPECT_EQ(qs.n_ex * qs.points, 60u);
  EXPECT_EQ((qs.groups - qs.n_ex) * qs.points, 940u);
  EXPECT_EQ(qs.values.size(), 1000u * kDefaultQueryWidth);
  // EX groups hold the encoding; learned groups hold the pool vectors in order.
  const auto enc = encode_element(els[1], kDefaultQueryWidth);
  for (std::size_t i = 0; i < kCanonicalPoints; ++i) {
    const auto q = qs.query(1, i);
    EXPECT_TRUE(std::equal(q.begin(), q.end(), enc[i].begin()));
    const auto l = qs.query(3, i);
    const auto p = pool.query(qs.provenance[3].pool_index, i);
    EXPECT_TRUE(std::equal(l.begin(), l.end(), p.begin()));
  }
}

TEST(Assemble, OverflowNamesExcess)
{
  const auto els = elements(53);
  const auto pool = LearnedQueryPool::stub(50, kCanonicalPoints, 16, 1);
  try {
    assemble_query_set(els, pool, 50, kCanonicalPoints, 16);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverflow);
    EXPECT_NE(std::string(e.what()).find('3'), std::string::npos);
  }
}

TEST(Assemble, SizeAlwaysNLH)
{
  for (const std::size_t n : {1u, 7u, 50u, 64u}) {
    for (std::size_t n_ex = 0; n_ex <= n; n_ex += 1 + n / 5) {
      const auto pool = LearnedQueryPool::stub(n, kCanonicalPoints, 12, n_ex);
      const auto qs = assemble_query_set(elements(n_ex), pool, n, kCanonicalPoints, 12);
      EXPECT_EQ(qs.values.size(), n * kCanonicalPoints * 12);
      EXPECT_EQ(qs.n_ex, n_ex);
    }
  }
}
}  // namespace
}  // namespace priormap
