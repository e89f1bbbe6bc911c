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

#include "priormap/metrics.hpp"

#include "priormap/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace priormap
{
double average_precision(const std::vector<bool> & ranked_tp, std::size_t num_gt)
{
  if (num_gt == 0) {
    return ranked_tp.empty() ? 1.0 : 0.0;
  }
  const std::size_t n = ranked_tp.size();
  std::vector<double> precision(n);
  std::vector<double> recall(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    tp += ranked_tp[k] ? 1 : 0;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(tp) / static_cast<double>(num_gt);
  }
  for (std::size_t k = n; k-- > 1;) {
    precision[k - 1] = std::max(precision[k - 1], precision[k]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return ap;
}

ApAccumulator::ApAccumulator(std::span<const double> thresholds, std::size_t eval_points)
: thresholds_(thresholds.begin(), thresholds.end()), eval_points_(eval_points)
{
  for (const double t : thresholds_) {
    if (!(t > 0.0)) {
      raise(ErrorCode::kInvalidArgument, "AP thresholds must be positive");
    }
  }
  for (auto & per_class : entries_) {
    per_class.resize(thresholds_.size());
  }
}

void ApAccumulator::add(const DetectionResult & preds, const VectorMap & gt)
{
  for (const auto cls : kAllClasses) {
    const std::size_t ci = class_index(cls);
    std::vector<Polyline> gts;
    for (const auto & e : gt.elements) {
      if (e.cls == cls) {
        gts.push_back(upsample_for_eval(e, eval_points_));
      }
    }
    std::vector<const Detection *> ranked;
    for (const auto & d : preds.detections) {
      if (d.element.cls == cls) {
        ranked.push_back(&d);
      }
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const Detection * a, const Detection * b) {
      return a->confidence > b->confidence;
    });
    num_gt_[ci] += gts.size();
    num_pred_[ci] += ranked.size();

    std::vector<double> dist(ranked.size() * gts.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const Polyline p = upsample_for_eval(ranked[i]->element, eval_points_);
      for (std::size_t j = 0; j < gts.size(); ++j) {
        dist[i * gts.size() + j] = chamfer_distance(p, gts[j]);
      }
    }

    for (std::size_t ti = 0; ti < thresholds_.size(); ++ti) {
      std::vector<bool> claimed(gts.size(), false);
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        std::size_t best = gts.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < gts.size(); ++j) {
          const double d = dist[i * gts.size() + j];
          if (!claimed[j] && d < best_d) {
            best_d = d;
            best = j;
          }
        }
        const bool hit = best < gts.size() && best_d < thresholds_[ti];
        if (hit) {
          claimed[best] = true;
        }
        entries_[ci][ti].push_back({ranked[i]->confidence, next_order_ + i, hit});
      }
    }
    next_order_ += ranked.size();
  }
}

double ApAccumulator::ap(ElementClass cls, std::size_t threshold_index) const
{
  auto entries = entries_[class_index(cls)].at(threshold_index);
  std::sort(entries.begin(), entries.end(), [](const Entry & a, const Entry & b) {
    return a.confidence != b.confidence ? a.confidence > b.confidence : a.order < b.order;
  });
  std::vector<bool> ranked(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    ranked[k] = entries[k].tp;
  }
  return average_precision(ranked, num_gt_[class_index(cls)]);
}

MatchCounts ApAccumulator::counts(ElementClass cls, std::size_t threshold_index) const
{
  MatchCounts c;
  for (const auto & e : entries_[class_index(cls)].at(threshold_index)) {
    (e.tp ? c.tp : c.fp) += 1;
  }
  c.fn = num_gt_[class_index(cls)] - c.tp;
  return c;
}

ApReport ApAccumulator::report() const
{
  if (thresholds_.size() != kNumThresholds) {
    raise(ErrorCode::kInvalidArgument, "an ApReport needs exactly three thresholds");
  }
  ApReport r;
  std::copy(thresholds_.begin(), thresholds_.end(), r.thresholds.begin());
  for (const auto cls : kAllClasses) {
    const std::size_t ci = class_index(cls);
    double sum = 0.0;
    for (std::size_t ti = 0; ti < kNumThresholds; ++ti) {
      r.ap[ci][ti] = ap(cls, ti);
      r.counts[ci][ti] = counts(cls, ti);
      sum += r.ap[ci][ti];
    }
    r.class_ap[ci] = sum / static_cast<double>(kNumThresholds);
    r.vacuous[ci] = num_gt_[ci] == 0 && num_pred_[ci] == 0;
  }
  r.map = mean_ap(r.class_ap);
  return r;
}

double ap_at_threshold(const DetectionResult & preds, const VectorMap & gt, ElementClass cls,
                       double threshold, std::size_t eval_points)
{
  const std::array<double, 1> t{threshold};
  ApAccumulator acc(t, eval_points);
  acc.add(preds, gt);
  return acc.ap(cls, 0);
}

ApReport evaluate(const DetectionResult & preds, const VectorMap & gt)
{
  ApAccumulator acc;
  acc.add(preds, gt);
  return acc.report();
}

double mean_ap(const std::array<double, kNumClasses> & class_ap) noexcept
{
  double sum = 0.0;
  for (const double v : class_ap) {
    sum += v;
  }
  return sum / static_cast<double>(kNumClasses);
}

ApDelta improvement_delta(const ApReport & enhanced, const ApReport & base) noexcept
{
  ApDelta d;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      d.ap[c][t] = enhanced.ap[c][t] - base.ap[c][t];
    }
    d.class_ap[c] = enhanced.class_ap[c] - base.class_ap[c];
  }
  d.map = enhanced.map - base.map;
  return d;
}

namespace
{
std::string threshold_label(double t)
{
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.1f", t);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string shortest(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}
}  // namespace

std::vector<std::pair<std::string, double>> flatten(const ApReport & report)
{
  std::vector<std::pair<std::string, double>> out;
  for (const auto cls : kAllClasses) {
    const std::size_t c = class_index(cls);
    const std::string name(to_string(cls));
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      out.emplace_back("ap." + name + "@" + threshold_label(report.thresholds[t]), report.ap[c][t]);
    }
    out.emplace_back("ap." + name, report.class_ap[c]);
  }
  out.emplace_back("map", report.map);
  return out;
}

MetricSummary summarize(std::string key, std::span<const double> values)
{
  if (values.empty()) {
    raise(ErrorCode::kInvalidArgument, "cannot summarize zero runs");
  }
  MetricSummary s{std::move(key), 0.0, 0.0};
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    s.mean = values[0];
    return s;
  }
  double sum = 0.0;
  for (const double v : values) {
    sum += v;
  }
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (const double v : values) {
    sq += (v - s.mean) * (v - s.mean);
  }
  s.std = std::sqrt(sq / static_cast<double>(values.size() - 1));
  return s;
}

std::vector<MetricSummary> aggregate_runs(std::span<const ApReport> reports)
{
  if (reports.empty()) {
    raise(ErrorCode::kInvalidArgument, "cannot aggregate zero reports");
  }
  std::vector<std::vector<std::pair<std::string, double>>> flat;
  flat.reserve(reports.size());
  for (const auto & r : reports) {
    flat.push_back(flatten(r));
  }
  std::vector<MetricSummary> out;
  for (std::size_t k = 0; k < flat[0].size(); ++k) {
    std::vector<double> values;
    values.reserve(flat.size());
    for (const auto & f : flat) {
      values.push_back(f[k].second);
    }
    out.push_back(summarize(flat[0][k].first, values));
  }
  return out;
}

std::string to_table(const ApReport & report)
{
  std::string out;
  for (const auto & [key, value] : flatten(report)) {
    out += key + " " + shortest(value) + "\n";
  }
  for (const auto cls : kAllClasses) {
    const std::size_t c = class_index(cls);
    const std::string name(to_string(cls));
    for (std::size_t t = 0; t < kNumThresholds; ++t) {
      const auto & m = report.counts[c][t];
      const std::string base = "count." + name + "@" + threshold_label(report.thresholds[t]);
      out += base + ".tp " + std::to_string(m.tp) + "\n";
      out += base + ".fp " + std::to_string(m.fp) + "\n";
      out += base + ".fn " + std::to_string(m.fn) + "\n";
    }
    if (report.vacuous[c]) {
      out += "vacuous." + name + " 1\n";
    }
  }
  return out;
}
}  // namespace priormap
