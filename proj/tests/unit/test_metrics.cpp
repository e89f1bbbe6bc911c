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
#include "priormap/metrics.hpp"
#include "priormap/rng.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace priormap
{
namespace
{
using testing::line_element;

/// Independent AP: for each hit, the best precision at or beyond its rank, over num_gt.
double envelope_ap_oracle(const std::vector<bool> & ranked, std::size_t num_gt)
{
  double ap = 0.0;
  for (std::size_t k = 0; k < ranked.size(); ++k) {
    if (!ranked[k]) {
      continue;
    }
    double best = 0.0;
    std::size_t tp = 0;
    for (std::size_t j = 0; j < ranked.size(); ++j) {
      tp += ranked[j] ? 1 : 0;
      if (j >= k) {
        best = std::max(best, static_cast<double>(tp) / static_cast<double>(j + 1));
      }
    }
    ap += best / static_cast<double>(num_gt);
  }
  return ap;
}

TEST(AveragePrecision, HandComputedCase)
{
  EXPECT_NEAR(average_precision({true, false, true}, 2), 5.0 / 6.0, 1e-9);
  EXPECT_EQ(average_precision({true, true}, 2), 1.0);
  EXPECT_EQ(average_precision({false, false}, 2), 0.0);
  EXPECT_EQ(average_precision({}, 3), 0.0);
  EXPECT_EQ(average_precision({}, 0), 1.0);
  EXPECT_EQ(average_precision({false}, 0), 0.0);
}

TEST(AveragePrecision, MatchesEnvelopeOracle)
{
  Rng rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = rng.index(15);
    std::vector<bool> ranked(n);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < n; ++k) {
      ranked[k] = rng.bernoulli(0.5);
      hits += ranked[k] ? 1 : 0;
    }
    const std::size_t num_gt = std::max<std::size_t>(1, hits + rng.index(4));
    EXPECT_NEAR(average_precision(ranked, num_gt), envelope_ap_oracle(ranked, num_gt), 1e-12);
  }
}

VectorMap three_class_map()
{
  VectorMap m;
  m.elements.push_back(line_element("d0", ElementClass::kDivider, {-10, -25}, {-10, 25}));
  m.elements.push_back(line_element("d1", ElementClass::kDivider, {3, -25}, {3, 25}));
  m.elements.push_back(testing::rect_element("p0", {0, 10}, 2, 1.5));
  m.elements.push_back(line_element("b0", ElementClass::kBoundary, {12, -25}, {12, 25}));
  return m;
}

DetectionResult as_detections(const VectorMap & m, double confidence = 0.9)
{
  DetectionResult r;
  for (const auto & e : m.elements) {
    r.detections.push_back({e, confidence});
  }
  return r;
}

TEST(Evaluate, GroundTruthAsPredictionsIsPerfect)
{
  const auto gt = three_class_map();
  const auto r = evaluate(as_detections(gt), gt);
  EXPECT_EQ(r.map, 1.0);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    EXPECT_EQ(r.class_ap[c], 1.0);
    EXPECT_FALSE(r.vacuous[c]);
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      EXPECT_EQ(r.counts[c][t].fp, 0u);
      EXPECT_EQ(r.counts[c][t].fn, 0u);
    }
  }
}

TEST(Evaluate, TwoMetreShiftMissesEveryThreshold)
{
  auto gt = three_class_map();
  gt.elements.erase(gt.elements.begin() + 2);
  DetectionResult preds;
  for (const auto & e : gt.elements) {
    preds.detections.push_back({translated(e, 2.0, 0.0), 0.9});
  }
  const auto r = evaluate(preds, gt);
  EXPECT_EQ(r.class_ap[class_index(ElementClass::kDivider)], 0.0);
  EXPECT_EQ(r.class_ap[class_index(ElementClass::kBoundary)], 0.0);
}

TEST(Evaluate, ThresholdsAreStrictlyBelow)
{
  const auto gt_e = line_element("d", ElementClass::kDivider, {0, -20}, {0, 20});
  VectorMap gt;
  gt.elements.push_back(gt_e);
  DetectionResult preds;
  preds.detections.push_back({translated(gt_e, 1.0, 0.0), 0.5});
  const auto r = evaluate(preds, gt);
  const auto d = class_index(ElementClass::kDivider);
  EXPECT_EQ(r.ap[d][0], 0.0);
  EXPECT_EQ(r.ap[d][2], 1.0);
}

TEST(Evaluate, VacuousAndEmptyClasses)
{
  VectorMap gt;
  gt.elements.push_back(line_element("d0", ElementClass::kDivider, {0, -20}, {0, 20}));
  const auto both_empty = evaluate(as_detections(gt), gt);
  const auto ped = class_index(ElementClass::kPedCrossing);
  EXPECT_TRUE(both_empty.vacuous[ped]);
  EXPECT_EQ(both_empty.class_ap[ped], 1.0);

  auto preds = as_detections(gt);
  preds.detections.push_back({testing::rect_element("x", {0, 0}, 2, 1), 0.3});
  const auto spurious = evaluate(preds, gt);
  EXPECT_FALSE(spurious.vacuous[ped]);
  EXPECT_EQ(spurious.class_ap[ped], 0.0);

  const auto none = evaluate(DetectionResult{}, gt);
  EXPECT_EQ(none.class_ap[class_index(ElementClass::kDivider)], 0.0);
  EXPECT_EQ(none.counts[class_index(ElementClass::kDivider)][1].fn, 1u);
}

TEST(Evaluate, AccumulatorPoolsSamples)
{
  const auto gt = three_class_map();
  ApAccumulator acc;
  acc.add(as_detections(gt), gt);
  acc.add(DetectionResult{}, gt);
  const auto r = acc.report();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    EXPECT_NEAR(r.class_ap[c], 0.5, 1e-12);
  }
  EXPECT_THROW(ApAccumulator(std::vector<double>{0.5, 1.0}).report(), Error);
  EXPECT_THROW(ApAccumulator(std::vector<double>{0.0}), Error);
}

TEST(MeanAp, AveragesClasses)
{
  EXPECT_NEAR(mean_ap({0.6, 0.3, 0.9}), 0.6, 1e-12);
}

TEST(ImprovementDelta, ReproducesRecordedGains)
{
  ApReport base;
  ApReport s2a;
  ApReport s2b;
  base.map = 61.5;
  s2a.map = 84.8;
  s2b.map = 76.2;
  base.class_ap = {50.0, 60.0, 70.0};
  s2a.class_ap = {55.0, 60.0, 69.0};
  EXPECT_NEAR(improvement_delta(s2a, base).map, 23.3, 1e-9);
  EXPECT_NEAR(improvement_delta(s2b, base).map, 14.7, 1e-9);
  const auto d = improvement_delta(s2a, base);
  EXPECT_NEAR(d.class_ap[0], 5.0, 1e-12);
  EXPECT_NEAR(d.class_ap[2], -1.0, 1e-12);
}

TEST(Aggregate, MeanAndSampleStd)
{
  const std::vector<double> v{84.5, 84.8, 85.1};
  const auto s = summarize("map", v);
  EXPECT_NEAR(s.mean, 84.8, 1e-9);
  EXPECT_NEAR(s.std, 0.3, 1e-9);
  const std::vector<double> one{0.7};
  EXPECT_EQ(summarize("map", one).std, 0.0);
  EXPECT_THROW(summarize("map", std::span<const double>{}), Error);
}

TEST(Aggregate, RunsShareFlattenKeys)
{
  const auto gt = three_class_map();
  std::vector<ApReport> reports{evaluate(as_detections(gt), gt), evaluate(DetectionResult{}, gt)};
  const auto agg = aggregate_runs(reports);
  const auto keys = flatten(reports[0]);
  ASSERT_EQ(agg.size(), keys.size());
  for (std::size_t k = 0; k < agg.size(); ++k) {
    EXPECT_EQ(agg[k].key, keys[k].first);
  }
  EXPECT_EQ(agg.back().key, "map");
  EXPECT_NEAR(agg.back().mean, 0.5, 1e-12);
  EXPECT_NEAR(agg.back().std, std::sqrt(0.5), 1e-12);
  const std::vector<ApReport> single{reports[0]};
  EXPECT_EQ(aggregate_runs(single).back().std, 0.0);
  EXPECT_THROW(aggregate_runs(std::span<const ApReport>{}), Error);
}

struct RandomCase
{
  VectorMap gt;
  DetectionResult preds;
};

RandomCase random_case(Rng & rng)
{
  RandomCase c;
  const std::size_t n_gt = rng.index(8);
  for (std::size_t i = 0; i < n_gt; ++i) {
    c.gt.elements.push_back(testing::random_element("g" + std::to_string(i), rng));
  }
  for (const auto & e : c.gt.elements) {
    if (rng.bernoulli(0.8)) {
      auto p = translated(e, rng.normal(0, 0.8), rng.normal(0, 0.8));
      c.preds.detections.push_back({p, rng.uniform()});
    }
  }
  const std::size_t n_fp = rng.index(4);
  for (std::size_t i = 0; i < n_fp; ++i) {
    c.preds.detections.push_back({testing::random_element("f" + std::to_string(i), rng), rng.uniform()});
  }
  return c;
}

TEST(ApProperties, MonotoneInThreshold)
{
  Rng rng(11);
  const std::vector<double> ts{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = random_case(rng);
    for (const auto cls : kAllClasses) {
      double prev = -1.0;
      for (const double t : ts) {
        const double ap = ap_at_threshold(c.preds, c.gt, cls, t);
        EXPECT_GE(ap, prev);
        EXPECT_GE(ap, 0.0);
        EXPECT_LE(ap, 1.0);
        prev = ap;
      }
    }
  }
}

TEST(ApProperties, DependsOnlyOnConfidenceRank)
{
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto c = random_case(rng);
    auto warped = c.preds;
    for (auto & d : warped.detections) {
      d.confidence = std::exp(3.0 * d.confidence) - 7.0;
    }
    EXPECT_EQ(evaluate(c.preds, c.gt), evaluate(warped, c.gt));
  }
}

TEST(ApProperties, LowerConfidenceDuplicateNeverHelps)
{
  // Checked where the duplicate reaches at most one ground truth.
  Rng rng(13);
  std::size_t checked = 0;
  for (int trial = 0; trial < 600; ++trial) {
    auto c = random_case(rng);
    if (c.preds.detections.empty()) {
      continue;
    }
    const auto before = evaluate(c.preds, c.gt);
    const auto src = c.preds.detections[rng.index(c.preds.detections.size())];
    c.preds.detections.push_back({src.element, 0.5 * src.confidence});
    const auto after = evaluate(c.preds, c.gt);
    const auto ci = class_index(src.element.cls);
    const auto dup_pts = upsample_for_eval(src.element);
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      std::size_t reachable = 0;
      for (const auto & g : c.gt.elements) {
        if (g.cls == src.element.cls &&
            chamfer_distance(dup_pts, upsample_for_eval(g)) < kChamferThresholds[t]) {
          ++reachable;
        }
      }
      if (reachable <= 1) {
        EXPECT_LE(after.ap[ci][t], before.ap[ci][t]);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 1000u);
}

TEST(Flatten, KeyOrder)
{
  const auto keys = flatten(ApReport{});
  ASSERT_EQ(keys.size(), 13u);
  EXPECT_EQ(keys[0].first, "ap.divider@0.5");
  EXPECT_EQ(keys[3].first, "ap.divider");
  EXPECT_EQ(keys[12].first, "map");
}
}  // namespace
}  // namespace priormap
