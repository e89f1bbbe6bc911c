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
#include "priormap/simulation.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

namespace priormap
{
namespace
{
std::size_t count_class(const VectorMap & m, ElementClass cls)
{
  return static_cast<std::size_t>(std::count_if(m.elements.begin(), m.elements.end(),
                                                [&](const MapElement & e) { return e.cls == cls; }));
}

TEST(Synth, DeterministicCanonicalAndInside)
{
  const SynthSpec spec;
  const auto a = synth_corpus(spec, 50, 4);
  const auto b = synth_corpus(spec, 50, 4);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, synth_corpus(spec, 50, 5));
  for (const auto & m : a) {
    EXPECT_NO_THROW(validate(m));
    EXPECT_GE(count_class(m, ElementClass::kBoundary), 2u);
    for (const auto & e : m.elements) {
      EXPECT_EQ(e.points.size(), kCanonicalPoints);
      for (const auto & p : e.points) {
        EXPECT_TRUE(m.extent.contains(p));
      }
      if (e.closed) {
        EXPECT_EQ(e.points.front(), e.points.back());
      }
    }
  }
}

TEST(Synth, CorpusCoversEveryClass)
{
  const auto corpus = synth_corpus(SynthSpec{}, 1000, 0);
  std::array<std::size_t, kNumClasses> seen{};
  for (const auto & m : corpus) {
    for (const auto cls : kAllClasses) {
      seen[class_index(cls)] += count_class(m, cls);
    }
  }
  for (const auto n : seen) {
    EXPECT_GT(n, 100u);
  }
}

TEST(Synth, MarginIsRespected)
{
  SynthSpec spec;
  spec.margin_m = 5.0;
  for (const auto & m : synth_corpus(spec, 200, 1)) {
    for (const auto & e : m.elements) {
      for (const auto & p : e.points) {
        EXPECT_GE(p.x, m.extent.x_min() + 5.0 - 1e-9);
        EXPECT_LE(p.x, m.extent.x_max() - 5.0 + 1e-9);
        EXPECT_GE(p.y, m.extent.y_min() + 5.0 - 1e-9);
        EXPECT_LE(p.y, m.extent.y_max() - 5.0 + 1e-9);
      }
    }
  }
}

TEST(EstimatorSpec, ParseAndPrint)
{
  EXPECT_EQ(MockEstimatorSpec::parse("copy_ex").mode, EstimatorMode::kCopyEx);
  const auto o = MockEstimatorSpec::parse("oracle_blend:0.25");
  EXPECT_EQ(o.mode, EstimatorMode::kOracleBlend);
  EXPECT_EQ(o.sigma_pred, 0.25);
  EXPECT_EQ(MockEstimatorSpec::parse(o.to_string()), o);
  EXPECT_EQ(MockEstimatorSpec::parse("noisy_gt").sigma_pred, 0.5);
  EXPECT_THROW(MockEstimatorSpec::parse("magic"), Error);
  EXPECT_THROW(MockEstimatorSpec::parse("noisy_gt:-1"), Error);
  EXPECT_THROW(MockEstimatorSpec::parse("noisy_gt:x"), Error);
}

double corpus_map(std::span<const VectorMap> corpus, ScenarioKind kind, const char * estimator)
{
  ScenarioSpec sc;
  sc.kind = kind;
  const std::vector<std::uint64_t> seeds{0};
  return run_pipeline(corpus, sc, MockEstimatorSpec::parse(estimator), seeds).runs[0].ap.map;
}

TEST(Estimator, ModesBehaveAsDocumented)
{
  const auto corpus = synth_corpus(SynthSpec{}, 30, 2);
  EXPECT_EQ(corpus_map(corpus, ScenarioKind::kS2a, "noisy_gt:0"), 1.0);
  EXPECT_LT(corpus_map(corpus, ScenarioKind::kS2b, "copy_ex"), 0.5);
  EXPECT_EQ(corpus_map(corpus, ScenarioKind::kS1, "copy_ex"), corpus_map(corpus, ScenarioKind::kS1, "copy_ex"));

  ScenarioSpec s1;
  const std::vector<std::uint64_t> seeds{0};
  const auto r = run_pipeline(corpus, s1, MockEstimatorSpec::parse("oracle_blend"), seeds);
  EXPECT_EQ(r.runs[0].ap.class_ap[class_index(ElementClass::kBoundary)], 1.0);
}

TEST(Estimator, SlotLayout)
{
  const auto gt = synth_corpus(SynthSpec{}, 1, 9).front();
  const auto ex = s1_remove(gt);
  Rng rng(1);
  const auto copy = mock_estimate(gt, ex, MockEstimatorSpec::parse("copy_ex"), rng, 50);
  EXPECT_EQ(copy.num_slots, 50u);
  ASSERT_EQ(copy.slots.size(), ex.map.elements.size());
  for (std::size_t k = 0; k < copy.slots.size(); ++k) {
    EXPECT_EQ(copy.slots[k], k);
    EXPECT_EQ(copy.result.detections[k].confidence, kCopyExConfidence);
  }
  const auto noisy = mock_estimate(gt, ex, MockEstimatorSpec::parse("noisy_gt"), rng, 1);
  EXPECT_EQ(noisy.num_slots, ex.map.elements.size() + gt.elements.size());
  for (std::size_t k = 0; k < noisy.slots.size(); ++k) {
    EXPECT_EQ(noisy.slots[k], ex.map.elements.size() + k);
  }
}

TEST(Substitution, ThresholdSemantics)
{
  const auto gt = synth_corpus(SynthSpec{}, 1, 3).front();
  const auto ex = s1_remove(gt);
  DetectionResult pred;
  pred.detections.push_back({gt.elements.front(), 0.4});
  const auto kept = substitute_if_unchanged(pred, ex, ChangeScore(1.0), 0.5);
  EXPECT_FALSE(kept.early_exit);
  EXPECT_EQ(kept.result, pred);
  const auto sub = substitute_if_unchanged(pred, ex, ChangeScore(0.0), 0.5);
  EXPECT_TRUE(sub.early_exit);
  ASSERT_EQ(sub.result.detections.size(), ex.map.elements.size());
  for (std::size_t k = 0; k < ex.map.elements.size(); ++k) {
    EXPECT_EQ(sub.result.detections[k].element, ex.map.elements[k]);
    EXPECT_EQ(sub.result.detections[k].confidence, kSubstitutedConfidence);
  }
  EXPECT_FALSE(substitute_if_unchanged(pred, ex, ChangeScore(0.5), 0.5).early_exit);
  EXPECT_THROW(ChangeScore(1.5), Error);
  EXPECT_THROW(substitute_if_unchanged(pred, ex, ChangeScore(0.0), 2.0), Error);
}

TEST(Pipeline, DeterministicAndAggregated)
{
  const auto corpus = synth_corpus(SynthSpec{}, 20, 5);
  ScenarioSpec sc;
  sc.kind = ScenarioKind::kS3b;
  const std::vector<std::uint64_t> seeds{0, 1, 2};
  PipelineOptions opts;
  opts.change = ChangePolicy::kOracle;
  const auto a = run_pipeline(corpus, sc, MockEstimatorSpec{}, seeds, opts);
  const auto b = run_pipeline(corpus, sc, MockEstimatorSpec{}, seeds, opts);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.runs.size(), 3u);
  ASSERT_NE(a.metric("map"), nullptr);
  std::vector<double> maps;
  for (const auto & r : a.runs) {
    maps.push_back(r.ap.map);
    EXPECT_EQ(r.samples.size(), corpus.size());
    EXPECT_EQ(r.unperturbed(), a.runs[0].unperturbed());
    EXPECT_EQ(r.early_exits(), r.unperturbed());
  }
  EXPECT_EQ(*a.metric("map"), summarize("map", maps));
  EXPECT_THROW(run_pipeline(std::span<const VectorMap>{}, sc, MockEstimatorSpec{}, seeds), Error);
  EXPECT_THROW(run_pipeline(corpus, sc, MockEstimatorSpec{}, std::span<const std::uint64_t>{}), Error);
}

TEST(Pipeline, S1PinsExactlyTheBoundaries)
{
  const auto corpus = synth_corpus(SynthSpec{}, 30, 6);
  const std::vector<std::uint64_t> seeds{0};
  const auto r = run_pipeline(corpus, ScenarioSpec{}, MockEstimatorSpec{}, seeds);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto n_b = count_class(corpus[i], ElementClass::kBoundary);
    const auto & s = r.runs[0].samples[i];
    EXPECT_EQ(s.pinned, n_b);
    EXPECT_EQ(s.with_source, n_b);
    EXPECT_EQ(s.solver_cols, corpus[i].elements.size() - n_b);
  }
}

TEST(Pipeline, OracleBlendBeatsCopyExisting)
{
  const auto corpus = synth_corpus(SynthSpec{}, 30, 7);
  for (const auto kind : {ScenarioKind::kS2a, ScenarioKind::kS2b, ScenarioKind::kS3a}) {
    EXPECT_GE(corpus_map(corpus, kind, "oracle_blend"), corpus_map(corpus, kind, "copy_ex"));
  }
}

TEST(Pipeline, VariantsIndependentOfRunSeeds)
{
  const auto corpus = synth_corpus(SynthSpec{}, 10, 8);
  ScenarioSpec sc;
  sc.kind = ScenarioKind::kS2a;
  const std::vector<std::uint64_t> one{4};
  const std::vector<std::uint64_t> two{1, 4};
  const auto a = run_pipeline(corpus, sc, MockEstimatorSpec::parse("copy_ex"), one);
  const auto b = run_pipeline(corpus, sc, MockEstimatorSpec::parse("copy_ex"), two);
  EXPECT_EQ(a.runs[0], b.runs[1]);
}
}  // namespace
}  // namespace priormap
