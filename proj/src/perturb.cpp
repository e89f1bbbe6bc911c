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

#include "priormap/perturb.hpp"

#include "priormap/error.hpp"
#include "priormap/warp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace priormap
{
std::string_view to_string(ScenarioKind kind) noexcept
{
  switch (kind) {
    case ScenarioKind::kS1:
      return "s1";
    case ScenarioKind::kS2a:
      return "s2a";
    case ScenarioKind::kS2b:
      return "s2b";
    case ScenarioKind::kS3a:
      return "s3a";
    case ScenarioKind::kS3b:
      return "s3b";
  }
  return "unknown";
}

std::optional<ScenarioKind> scenario_from_string(std::string_view tag) noexcept
{
  for (const auto k : {ScenarioKind::kS1, ScenarioKind::kS2a, ScenarioKind::kS2b,
                       ScenarioKind::kS3a, ScenarioKind::kS3b}) {
    if (to_string(k) == tag) {
      return k;
    }
  }
  return std::nullopt;
}

void ScenarioSpec::validate() const
{
  const auto & p = params;
  const auto non_negative = [](double v, const char * name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      raise(ErrorCode::kInvalidArgument, std::string(name) + " must be finite and >= 0");
    }
  };
  const auto unit = [](double v, const char * name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      raise(ErrorCode::kInvalidArgument, std::string(name) + " must lie in [0, 1]");
    }
  };
  non_negative(p.sigma_shift, "sigma_shift");
  non_negative(p.sigma_point, "sigma_point");
  non_negative(p.grid_sigma, "grid_sigma");
  non_negative(p.warp_amp_h, "warp_amp_h");
  non_negative(p.warp_amp_v, "warp_amp_v");
  unit(p.delete_frac, "delete_frac");
  unit(p.add_frac, "add_frac");
  unit(p.mix_p, "mix_p");
  if (!(p.grid_spacing > 0.0)) {
    raise(ErrorCode::kInvalidArgument, "grid_spacing must be > 0");
  }
  if (!(p.crossing_width_m > 0.0) || !(p.crossing_height_m > 0.0)) {
    raise(ErrorCode::kInvalidArgument, "crossing size must be > 0");
  }
}

void ScenarioSpec::set_param(std::string_view key, double value)
{
  auto & p = params;
  if (key == "sigma_shift") {
    p.sigma_shift = value;
  } else if (key == "sigma_point") {
    p.sigma_point = value;
  } else if (key == "delete_frac") {
    p.delete_frac = value;
  } else if (key == "add_frac") {
    p.add_frac = value;
  } else if (key == "mix_p") {
    p.mix_p = value;
  } else if (key == "warp_amp_h") {
    p.warp_amp_h = value;
  } else if (key == "warp_amp_v") {
    p.warp_amp_v = value;
  } else if (key == "warp_inclination") {
    p.warp_inclination = value;
  } else if (key == "grid_spacing") {
    p.grid_spacing = value;
  } else if (key == "grid_sigma") {
    p.grid_sigma = value;
  } else if (key == "crossing_width_m") {
    p.crossing_width_m = value;
  } else if (key == "crossing_height_m") {
    p.crossing_height_m = value;
  } else if (key == "exact_delete") {
    p.exact_delete = value != 0.0;
  } else {
    raise(ErrorCode::kInvalidArgument, "unknown scenario parameter '" + std::string(key) + "'");
  }
}

const Correspondence * PerturbedMap::correspondence_of(std::string_view perturbed_id) const noexcept
{
  for (const auto & c : correspondences) {
    if (c.perturbed_id == perturbed_id) {
      return &c;
    }
  }
  return nullptr;
}

void validate_correspondences(const PerturbedMap & pm, const VectorMap * source)
{
  if (pm.correspondences.size() != pm.map.elements.size()) {
    raise(ErrorCode::kIntegrity, "correspondence count does not match element count");
  }
  std::unordered_set<std::string> seen_perturbed;
  std::unordered_set<std::string> seen_source;
  for (const auto & c : pm.correspondences) {
    if (pm.map.find(c.perturbed_id) == nullptr) {
      raise(ErrorCode::kIntegrity, "correspondence for unknown element '" + c.perturbed_id + "'");
    }
    if (!seen_perturbed.insert(c.perturbed_id).second) {
      raise(ErrorCode::kIntegrity, "element '" + c.perturbed_id + "' has two correspondences");
    }
    if (!c.source_id) {
      continue;
    }
    if (!seen_source.insert(*c.source_id).second) {
      raise(ErrorCode::kIntegrity, "source id '" + *c.source_id + "' used twice");
    }
    if (source != nullptr && source->find(*c.source_id) == nullptr) {
      raise(ErrorCode::kIntegrity, "correspondence to unknown source id '" + *c.source_id + "'");
    }
  }
}

namespace
{
// Correspondences for a map whose surviving original elements kept their ids.
PerturbedMap wrap(VectorMap map, const std::unordered_set<std::string> & added,
                  ScenarioKind kind)
{
  PerturbedMap pm;
  pm.scenario.kind = kind;
  pm.correspondences.reserve(map.elements.size());
  for (const auto & e : map.elements) {
    Correspondence c{e.id, std::nullopt};
    if (!added.contains(e.id)) {
      c.source_id = e.id;
    }
    pm.correspondences.push_back(std::move(c));
  }
  pm.map = std::move(map);
  return pm;
}

PerturbedMap identity(const VectorMap & map, ScenarioKind kind)
{
  return wrap(map, {}, kind);
}

std::string fresh_id(const VectorMap & map, std::size_t & counter)
{
  for (;;) {
    std::string id = "added_" + std::to_string(counter++);
    if (map.find(id) == nullptr) {
      return id;
    }
  }
}

MapElement make_crossing(std::string id, double x0, double y0, double w, double h)
{
  const Polyline rect{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}, {x0, y0}};
  return {std::move(id), ElementClass::kPedCrossing, true,
          resample_polyline(rect, kCanonicalPoints)};
}
}  // namespace

PerturbedMap s1_remove(const VectorMap & map)
{
  VectorMap out;
  out.extent = map.extent;
  for (const auto & e : map.elements) {
    if (e.cls == ElementClass::kBoundary) {
      out.elements.push_back(e);
    }
  }
  return wrap(std::move(out), {}, ScenarioKind::kS1);
}

PerturbedMap s2a_shift(const VectorMap & map, double sigma, Rng & rng)
{
  if (!(sigma >= 0.0)) {
    raise(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  }
  VectorMap shifted = map;
  for (auto & e : shifted.elements) {
    const double dx = sigma * rng.normal();
    const double dy = sigma * rng.normal();
    e = translated(e, dx, dy);
  }
  return wrap(clip_to_patch(shifted), {}, ScenarioKind::kS2a);
}

PerturbedMap s2b_point_noise(const VectorMap & map, double sigma, Rng & rng)
{
  if (!(sigma >= 0.0)) {
    raise(ErrorCode::kInvalidArgument, "sigma must be >= 0");
  }
  VectorMap noisy = map;
  for (auto & e : noisy.elements) {
    for (auto & p : e.points) {
      p.x += sigma * rng.normal();
      p.y += sigma * rng.normal();
    }
    if (e.closed && !e.points.empty()) {
      e.points.back() = e.points.front();
    }
  }
  return wrap(clip_to_patch(noisy), {}, ScenarioKind::kS2b);
}

PerturbedMap s3a_outdated(const VectorMap & map, const ScenarioSpec & spec, Rng & rng)
{
  spec.validate();
  const auto & p = spec.params;

  std::vector<bool> keep(map.elements.size(), true);
  if (p.exact_delete) {
    for (const auto cls : {ElementClass::kPedCrossing, ElementClass::kDivider}) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < map.elements.size(); ++i) {
        if (map.elements[i].cls == cls) {
          idx.push_back(i);
        }
      }
      for (std::size_t i = idx.size(); i > 1; --i) {
        std::swap(idx[i - 1], idx[rng.index(i)]);
      }
      const auto n_delete = static_cast<std::size_t>(
        std::floor(static_cast<double>(idx.size()) * p.delete_frac));
      for (std::size_t k = 0; k < n_delete; ++k) {
        keep[idx[k]] = false;
      }
    }
  } else {
    for (std::size_t i = 0; i < map.elements.size(); ++i) {
      if (map.elements[i].cls != ElementClass::kBoundary) {
        keep[i] = !rng.bernoulli(p.delete_frac);
      }
    }
  }

  VectorMap out;
  out.extent = map.extent;
  std::size_t remaining_crossings = 0;
  for (std::size_t i = 0; i < map.elements.size(); ++i) {
    if (keep[i]) {
      out.elements.push_back(map.elements[i]);
      remaining_crossings += map.elements[i].cls == ElementClass::kPedCrossing ? 1 : 0;
    }
  }

  // Placement margin: largest sine amplitude plus 1 m.
  const auto n_add = static_cast<std::size_t>(
    std::floor(static_cast<double>(remaining_crossings) * p.add_frac));
  const double margin = std::max(p.warp_amp_h, p.warp_amp_v) + 1.0;
  const auto & ext = map.extent;
  std::unordered_set<std::string> added;
  std::size_t counter = 0;
  for (std::size_t k = 0; k < n_add; ++k) {
    const double x_lo = ext.x_min() + margin;
    const double x_hi = std::max(x_lo, ext.x_max() - margin - p.crossing_width_m);
    const double y_lo = ext.y_min() + margin;
    const double y_hi = std::max(y_lo, ext.y_max() - margin - p.crossing_height_m);
    const double x0 = rng.uniform(x_lo, x_hi);
    const double y0 = rng.uniform(y_lo, y_hi);
    std::string id = fresh_id(out, counter);
    added.insert(id);
    out.elements.push_back(
      make_crossing(std::move(id), x0, y0, p.crossing_width_m, p.crossing_height_m));
  }

  VectorMap warped = trig_warp(out, p.warp_amp_h, p.warp_amp_v, p.warp_inclination);
  warped = triangular_warp(warped, p.grid_spacing, p.grid_sigma, rng);
  for (auto & e : warped.elements) {
    if (e.closed && !e.points.empty()) {
      e.points.back() = e.points.front();
    }
  }
  return wrap(clip_to_patch(warped), added, ScenarioKind::kS3a);
}

PerturbedMap s3b_mix(const VectorMap & map, const ScenarioSpec & spec, Rng & rng)
{
  spec.validate();
  PerturbedMap pm;
  if (rng.uniform() < spec.params.mix_p) {
    pm = identity(map, ScenarioKind::kS3b);
    pm.unperturbed = true;
  } else {
    pm = s3a_outdated(map, spec, rng);
  }
  pm.scenario = spec;
  return pm;
}

PerturbedMap perturb(const VectorMap & map, const ScenarioSpec & spec, std::uint64_t seed)
{
  spec.validate();
  validate(map);
  Rng rng(seed);
  PerturbedMap pm;
  switch (spec.kind) {
    case ScenarioKind::kS1:
      pm = s1_remove(map);
      break;
    case ScenarioKind::kS2a:
      pm = s2a_shift(map, spec.params.sigma_shift, rng);
      break;
    case ScenarioKind::kS2b:
      pm = s2b_point_noise(map, spec.params.sigma_point, rng);
      break;
    case ScenarioKind::kS3a:
      pm = s3a_outdated(map, spec, rng);
      break;
    case ScenarioKind::kS3b:
      pm = s3b_mix(map, spec, rng);
      break;
  }
  pm.scenario = spec;
  pm.seed = seed;
  return pm;
}

std::vector<PerturbedMap> generate_variants(
  const VectorMap & map, const ScenarioSpec & spec, std::size_t count, std::uint64_t seed)
{
  if (count < 1) {
    raise(ErrorCode::kInvalidArgument, "variant count must be >= 1");
  }
  const std::size_t n = spec.kind == ScenarioKind::kS1 ? 1 : count;
  std::vector<PerturbedMap> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(perturb(map, spec, derive_seed(seed, i)));
  }
  return out;
}
}  // namespace priormap
