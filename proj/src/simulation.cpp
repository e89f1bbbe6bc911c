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

#include "priormap/simulation.hpp"

#include "priormap/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

namespace priormap
{
namespace
{
constexpr std::size_t kCenterlineSamples = 61;

struct Road
{
  double c0;
  double slope;
  double curvature;

  double center(double y) const noexcept { return c0 + slope * y + curvature * y * y; }
};

MapElement road_line(std::string id, ElementClass cls, const Road & road, double offset,
                     double y0, double y1)
{
  Polyline raw;
  raw.reserve(kCenterlineSamples);
  for (std::size_t k = 0; k < kCenterlineSamples; ++k) {
    const double y = k + 1 == kCenterlineSamples
                       ? y1
                       : y0 + (y1 - y0) * static_cast<double>(k) / (kCenterlineSamples - 1);
    raw.push_back({road.center(y) + offset, y});
  }
  return {std::move(id), cls, false, resample_polyline(raw, kCanonicalPoints)};
}

// Lateral extent of the road's bend over [y0, y1], relative to c0.
std::pair<double, double> bend_range(const Road & road, double y0, double y1)
{
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t k = 0; k < kCenterlineSamples; ++k) {
    const double y = y0 + (y1 - y0) * static_cast<double>(k) / (kCenterlineSamples - 1);
    const double b = road.slope * y + road.curvature * y * y;
    lo = k == 0 ? b : std::min(lo, b);
    hi = k == 0 ? b : std::max(hi, b);
  }
  return {lo, hi};
}
}  // namespace

VectorMap synth_map(const SynthSpec & spec, Rng & rng)
{
  if (spec.min_lanes < 1 || spec.max_lanes > 4 || spec.min_lanes > spec.max_lanes ||
      spec.max_crossings > 4 || !(spec.lane_width_m > 0.0) || spec.margin_m < 0.0) {
    raise(ErrorCode::kInvalidArgument, "synthetic map parameters out of range");
  }
  const auto & ext = spec.extent;
  const double x_lo = ext.x_min() + spec.margin_m;
  const double x_hi = ext.x_max() - spec.margin_m;
  const double y_lo = ext.y_min() + spec.margin_m;
  const double y_hi = ext.y_max() - spec.margin_m;
  if (!(x_hi > x_lo) || !(y_hi - y_lo > 10.0)) {
    raise(ErrorCode::kInvalidArgument, "margin leaves no room for a road");
  }

  std::size_t lanes = spec.min_lanes + rng.index(spec.max_lanes - spec.min_lanes + 1);
  Road road{0.0, rng.uniform(-0.04, 0.04), rng.uniform(-0.0015, 0.0015)};
  double road_w = 0.0;
  double c_lo = 0.0;
  double c_hi = 0.0;
  for (;;) {
    road_w = static_cast<double>(lanes) * spec.lane_width_m;
    const auto [b_lo, b_hi] = bend_range(road, y_lo, y_hi);
    c_lo = x_lo + 0.5 * road_w - b_lo;
    c_hi = x_hi - 0.5 * road_w - b_hi;
    if (c_hi >= c_lo) {
      break;
    }
    if (road.slope != 0.0 || road.curvature != 0.0) {
      road.slope = 0.0;
      road.curvature = 0.0;
    } else if (lanes > 1) {
      --lanes;
    } else {
      raise(ErrorCode::kInvalidArgument, "patch too narrow for a single lane");
    }
  }
  road.c0 = rng.uniform(c_lo, c_hi);
  const auto [b_lo, b_hi] = bend_range(road, y_lo, y_hi);

  VectorMap map;
  map.extent = ext;
  std::size_t n_boundary = 0;
  const auto add_boundary = [&](double offset) {
    map.elements.push_back(road_line("boundary_" + std::to_string(n_boundary++),
                                     ElementClass::kBoundary, road, offset, y_lo, y_hi));
  };
  add_boundary(-0.5 * road_w);
  add_boundary(0.5 * road_w);

  // Outer curbs, stacked away from the road on a random side.
  double left = -0.5 * road_w;
  double right = 0.5 * road_w;
  const std::size_t extra = rng.index(4);
  for (std::size_t k = 0; k < extra; ++k) {
    const bool on_left = rng.bernoulli(0.5);
    const double gap = rng.uniform(1.5, 4.0);
    if (on_left && road.c0 + left - gap + b_lo >= x_lo) {
      left -= gap;
      add_boundary(left);
    } else if (!on_left && road.c0 + right + gap + b_hi <= x_hi) {
      right += gap;
      add_boundary(right);
    }
  }

  std::size_t n_divider = 0;
  for (std::size_t k = 1; k < lanes; ++k) {
    const double offset = -0.5 * road_w + static_cast<double>(k) * spec.lane_width_m;
    if (rng.bernoulli(0.3)) {
      const double split = rng.uniform(-10.0, 10.0);
      map.elements.push_back(road_line("divider_" + std::to_string(n_divider++),
                                       ElementClass::kDivider, road, offset, y_lo, split - 1.0));
      map.elements.push_back(road_line("divider_" + std::to_string(n_divider++),
                                       ElementClass::kDivider, road, offset, split + 1.0, y_hi));
    } else {
      map.elements.push_back(road_line("divider_" + std::to_string(n_divider++),
                                       ElementClass::kDivider, road, offset, y_lo, y_hi));
    }
  }

  constexpr double kDepth = 3.0;
  const std::size_t n_cross = rng.index(spec.max_crossings + 1);
  std::vector<double> placed;
  for (std::size_t k = 0; k < n_cross; ++k) {
    for (int attempt = 0; attempt < 10; ++attempt) {
      const double y0 = rng.uniform(y_lo + 2.0, y_hi - 2.0 - kDepth);
      const bool clash = std::any_of(placed.begin(), placed.end(),
                                     [&](double y) { return std::abs(y - y0) < 6.0; });
      if (clash) {
        continue;
      }
      placed.push_back(y0);
      const double c = road.center(y0 + 0.5 * kDepth);
      const double xa = std::max(x_lo, c - 0.5 * road_w);
      const double xb = std::min(x_hi, c + 0.5 * road_w);
      const Polyline rect{{xa, y0}, {xb, y0}, {xb, y0 + kDepth}, {xa, y0 + kDepth}, {xa, y0}};
      map.elements.push_back({"crossing_" + std::to_string(placed.size() - 1),
                              ElementClass::kPedCrossing, true,
                              resample_polyline(rect, kCanonicalPoints)});
      break;
    }
  }
  return map;
}

std::vector<VectorMap> synth_corpus(const SynthSpec & spec, std::size_t count, std::uint64_t seed)
{
  std::vector<VectorMap> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    out.push_back(synth_map(spec, rng));
  }
  return out;
}

std::string_view to_string(EstimatorMode mode) noexcept
{
  switch (mode) {
    case EstimatorMode::kCopyEx:
      return "copy_ex";
    case EstimatorMode::kOracleBlend:
      return "oracle_blend";
    case EstimatorMode::kNoisyGt:
      return "noisy_gt";
  }
  return "unknown";
}

MockEstimatorSpec MockEstimatorSpec::parse(std::string_view text)
{
  MockEstimatorSpec spec;
  const auto colon = text.find(':');
  const std::string_view mode = text.substr(0, colon);
  if (mode == "copy_ex") {
    spec.mode = EstimatorMode::kCopyEx;
  } else if (mode == "oracle_blend") {
    spec.mode = EstimatorMode::kOracleBlend;
  } else if (mode == "noisy_gt") {
    spec.mode = EstimatorMode::kNoisyGt;
  } else {
    raise(ErrorCode::kInvalidArgument, "unknown estimator mode '" + std::string(mode) + "'");
  }
  if (colon != std::string_view::npos) {
    const std::string_view num = text.substr(colon + 1);
    double sigma = 0.0;
    const auto res = std::from_chars(num.data(), num.data() + num.size(), sigma);
    if (res.ec != std::errc{} || res.ptr != num.data() + num.size() || !(sigma >= 0.0) ||
        !std::isfinite(sigma)) {
      raise(ErrorCode::kInvalidArgument, "bad estimator sigma '" + std::string(num) + "'");
    }
    spec.sigma_pred = sigma;
  }
  return spec;
}

std::string MockEstimatorSpec::to_string() const
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), sigma_pred);
  return std::string(priormap::to_string(mode)) + ":" + std::string(buf, res.ptr);
}

namespace
{
MapElement noisy_copy(const MapElement & e, double sigma, Rng & rng)
{
  MapElement out = e;
  for (auto & p : out.points) {
    p.x += sigma * rng.normal();
    p.y += sigma * rng.normal();
  }
  if (out.closed && !out.points.empty()) {
    out.points.back() = out.points.front();
  }
  return out;
}
}  // namespace

EstimatorOutput mock_estimate(const VectorMap & gt, const PerturbedMap & ex,
                              const MockEstimatorSpec & spec, Rng & rng, std::size_t min_slots)
{
  if (!(spec.sigma_pred >= 0.0)) {
    raise(ErrorCode::kInvalidArgument, "estimator sigma must be >= 0");
  }
  const std::size_t n_ex = ex.map.elements.size();
  EstimatorOutput out;
  out.num_slots = std::max(min_slots, n_ex + gt.elements.size());
  const auto emit = [&](MapElement e, double confidence, std::size_t slot) {
    out.result.detections.push_back({std::move(e), confidence});
    out.slots.push_back(slot);
  };

  switch (spec.mode) {
    case EstimatorMode::kCopyEx:
      for (std::size_t k = 0; k < n_ex; ++k) {
        emit(ex.map.elements[k], kCopyExConfidence, k);
      }
      break;
    case EstimatorMode::kNoisyGt:
      for (std::size_t j = 0; j < gt.elements.size(); ++j) {
        emit(noisy_copy(gt.elements[j], spec.sigma_pred, rng), kNoisyGtConfidence, n_ex + j);
      }
      break;
    case EstimatorMode::kOracleBlend: {
      const PartialAssignment partial = pre_attribute(ex, gt, kPinThreshold);
      std::vector<std::optional<std::size_t>> pinned_slot(gt.elements.size());
      for (const auto & pin : partial.pinned) {
        pinned_slot[pin.gt_index] = pin.slot;
      }
      for (std::size_t j = 0; j < gt.elements.size(); ++j) {
        if (pinned_slot[j]) {
          emit(gt.elements[j], kPinnedConfidence, *pinned_slot[j]);
        } else {
          emit(noisy_copy(gt.elements[j], spec.sigma_pred, rng), kNoisyGtConfidence, n_ex + j);
        }
      }
      break;
    }
  }
  return out;
}

ChangeScore::ChangeScore(double value) : value_(value)
{
  if (!(value >= 0.0 && value <= 1.0)) {
    raise(ErrorCode::kInvalidArgument, "change score must lie in [0, 1]");
  }
}

SubstitutionResult substitute_if_unchanged(const DetectionResult & pred, const PerturbedMap & ex,
                                           ChangeScore change, double tau)
{
  if (!(tau >= 0.0 && tau <= 1.0)) {
    raise(ErrorCode::kInvalidArgument, "substitution threshold must lie in [0, 1]");
  }
  if (!(change.value() < tau)) {
    return {pred, false};
  }
  SubstitutionResult out;
  out.early_exit = true;
  out.result.detections.reserve(ex.map.elements.size());
  for (const auto & e : ex.map.elements) {
    out.result.detections.push_back({e, kSubstitutedConfidence});
  }
  return out;
}

std::size_t RunReport::total_pinned() const noexcept
{
  std::size_t n = 0;
  for (const auto & s : samples) {
    n += s.pinned;
  }
  return n;
}

std::size_t RunReport::total_with_source() const noexcept
{
  std::size_t n = 0;
  for (const auto & s : samples) {
    n += s.with_source;
  }
  return n;
}

std::size_t RunReport::early_exits() const noexcept
{
  return static_cast<std::size_t>(
    std::count_if(samples.begin(), samples.end(), [](const SampleStats & s) { return s.early_exit; }));
}

std::size_t RunReport::unperturbed() const noexcept
{
  return static_cast<std::size_t>(std::count_if(
    samples.begin(), samples.end(), [](const SampleStats & s) { return s.unperturbed; }));
}

const MetricSummary * PipelineReport::metric(std::string_view key) const noexcept
{
  for (const auto & m : aggregate) {
    if (m.key == key) {
      return &m;
    }
  }
  return nullptr;
}

PipelineReport run_pipeline(std::span<const VectorMap> corpus, const ScenarioSpec & scenario,
                            const MockEstimatorSpec & estimator, std::span<const std::uint64_t> seeds,
                            const PipelineOptions & options)
{
  if (corpus.empty()) {
    raise(ErrorCode::kInvalidArgument, "pipeline corpus is empty");
  }
  if (seeds.empty()) {
    raise(ErrorCode::kInvalidArgument, "pipeline needs at least one seed");
  }
  scenario.validate();

  std::vector<PerturbedMap> existing;
  existing.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    existing.push_back(
      generate_variants(corpus[i], scenario, 1, derive_seed(options.variant_seed, i)).front());
  }

  PipelineReport report;
  report.scenario = scenario;
  report.estimator = estimator;
  report.options = options;
  report.corpus_size = corpus.size();

  std::vector<ApReport> aps;
  for (const std::uint64_t seed : seeds) {
    const auto start = std::chrono::steady_clock::now();
    RunReport run;
    run.seed = seed;
    ApAccumulator acc;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const VectorMap & gt = corpus[i];
      const PerturbedMap & ex = existing[i];
      Rng rng(derive_seed(seed, i));
      EstimatorOutput est = mock_estimate(gt, ex, estimator, rng, options.slots);

      const PartialAssignment partial =
        pre_attribute(ex, gt, options.pin_threshold, est.num_slots);
      std::vector<std::optional<MapElement>> slots(est.num_slots);
      for (std::size_t k = 0; k < est.slots.size(); ++k) {
        slots[est.slots[k]] = est.result.detections[k].element;
      }
      const Assignment assignment = match_with_preattribution(slots, gt, partial);

      SampleStats stats;
      stats.ex_elements = ex.map.elements.size();
      stats.with_source = static_cast<std::size_t>(
        std::count_if(ex.correspondences.begin(), ex.correspondences.end(),
                      [](const Correspondence & c) { return c.source_id.has_value(); }));
      stats.pinned = partial.pinned.size();
      stats.solver_rows = assignment.solver_rows;
      stats.solver_cols = assignment.solver_cols;
      stats.unperturbed = ex.unperturbed;

      if (options.change == ChangePolicy::kOracle) {
        const ChangeScore c(ex.unperturbed ? 0.0 : 1.0);
        SubstitutionResult sub = substitute_if_unchanged(est.result, ex, c, options.tau);
        stats.early_exit = sub.early_exit;
        est.result = std::move(sub.result);
      }
      acc.add(est.result, gt);
      run.samples.push_back(stats);
    }
    run.ap = acc.report();
    run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
    aps.push_back(run.ap);
    report.runs.push_back(std::move(run));
  }
  report.aggregate = aggregate_runs(aps);
  return report;
}
}  // namespace priormap
