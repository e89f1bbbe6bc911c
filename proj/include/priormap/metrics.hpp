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

#ifndef PRIORMAP__METRICS_HPP_
#define PRIORMAP__METRICS_HPP_

#include "priormap/geometry.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace priormap
{
inline constexpr std::size_t kNumThresholds = 3;
inline constexpr std::array<double, kNumThresholds> kChamferThresholds{0.5, 1.0, 1.5};

struct Detection
{
  MapElement element;
  double confidence{0.0};

  friend bool operator==(const Detection &, const Detection &) = default;
};

struct DetectionResult
{
  std::vector<Detection> detections;

  friend bool operator==(const DetectionResult &, const DetectionResult &) = default;
};

struct MatchCounts
{
  std::size_t tp{0};
  std::size_t fp{0};
  std::size_t fn{0};

  friend bool operator==(const MatchCounts &, const MatchCounts &) = default;
};

/**
 * @brief AP per class and threshold, averaged per class, and mAP over the three classes.
 */
struct ApReport
{
  std::array<double, kNumThresholds> thresholds{kChamferThresholds};
  std::array<std::array<double, kNumThresholds>, kNumClasses> ap{};
  std::array<double, kNumClasses> class_ap{};
  double map{0.0};
  std::array<std::array<MatchCounts, kNumThresholds>, kNumClasses> counts{};
  /// Classes absent from both predictions and ground truth, scored as AP = 1.
  std::array<bool, kNumClasses> vacuous{};

  friend bool operator==(const ApReport &, const ApReport &) = default;
};

/**
 * @brief Area under the monotone precision envelope.
 *
 * `ranked_tp` lists predictions in descending confidence, true for a hit. With no ground
 * truth the AP is 1 when there are no predictions either, 0 otherwise.
 */
double average_precision(const std::vector<bool> & ranked_tp, std::size_t num_gt);

/**
 * @brief Pools greedy matches over many samples and reports dataset-level AP.
 *
 * Per sample and class, predictions are taken in descending confidence and each one claims
 * the nearest unclaimed ground truth of its class when their Chamfer distance (on
 * `eval_points` upsampled polylines) is below the threshold.
 */
class ApAccumulator
{
public:
  explicit ApAccumulator(std::span<const double> thresholds = kChamferThresholds,
                         std::size_t eval_points = kEvalPoints);

  void add(const DetectionResult & preds, const VectorMap & gt);

  std::size_t num_thresholds() const noexcept { return thresholds_.size(); }
  double ap(ElementClass cls, std::size_t threshold_index) const;
  MatchCounts counts(ElementClass cls, std::size_t threshold_index) const;

  /// Requires exactly kNumThresholds thresholds.
  ApReport report() const;

private:
  struct Entry
  {
    double confidence;
    std::uint64_t order;
    bool tp;
  };

  std::vector<double> thresholds_;
  std::size_t eval_points_;
  std::uint64_t next_order_{0};
  std::array<std::size_t, kNumClasses> num_gt_{};
  std::array<std::size_t, kNumClasses> num_pred_{};
  // [class][threshold]
  std::array<std::vector<std::vector<Entry>>, kNumClasses> entries_;
};

double ap_at_threshold(const DetectionResult & preds, const VectorMap & gt, ElementClass cls,
                       double threshold, std::size_t eval_points = kEvalPoints);

ApReport evaluate(const DetectionResult & preds, const VectorMap & gt);

/// Mean of the per-class averages.
double mean_ap(const std::array<double, kNumClasses> & class_ap) noexcept;

struct ApDelta
{
  std::array<std::array<double, kNumThresholds>, kNumClasses> ap{};
  std::array<double, kNumClasses> class_ap{};
  double map{0.0};
};

ApDelta improvement_delta(const ApReport & enhanced, const ApReport & base) noexcept;

/// Flat keys: "ap.<class>@<t>", "ap.<class>", "map".
std::vector<std::pair<std::string, double>> flatten(const ApReport & report);

struct MetricSummary
{
  std::string key;
  double mean{0.0};
  double std{0.0};

  friend bool operator==(const MetricSummary &, const MetricSummary &) = default;
};

/// Sample mean and standard deviation (n - 1 denominator, 0 for one run) of each metric.
std::vector<MetricSummary> aggregate_runs(std::span<const ApReport> reports);

/// Same over arbitrary runs of scalar values.
MetricSummary summarize(std::string key, std::span<const double> values);

/// Flat key-value text table, one "key value" line per metric.
std::string to_table(const ApReport & report);
}  // namespace priormap

#endif  // PRIORMAP__METRICS_HPP_
