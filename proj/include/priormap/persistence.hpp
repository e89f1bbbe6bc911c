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

#ifndef PRIORMAP__PERSISTENCE_HPP_
#define PRIORMAP__PERSISTENCE_HPP_

#include "priormap/attribution.hpp"
#include "priormap/ex_query.hpp"
#include "priormap/geometry.hpp"
#include "priormap/metrics.hpp"
#include "priormap/perturb.hpp"
#include "priormap/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// File formats. All text formats are JSON with a "format" tag and a "version"; doubles are
// written as shortest round-trip decimals and keys in a fixed order, so equal values give
// equal bytes. Unknown keys are rejected. See docs/formats.md.
namespace priormap::io
{
inline constexpr int kFormatVersion = 1;

std::string read_file(const std::filesystem::path & path);
/// Write through a temporary file and rename into place.
void write_file_atomic(const std::filesystem::path & path, std::string_view contents);

std::string map_to_json(const VectorMap & map, std::size_t points_per_element = kCanonicalPoints);
VectorMap map_from_json(std::string_view text);
void save_map(const VectorMap & map, const std::filesystem::path & path);
VectorMap load_map(const std::filesystem::path & path);

struct VariantSet
{
  std::string source_name;
  VectorMap source;
  ScenarioSpec scenario;
  std::uint64_t seed{0};
  std::vector<PerturbedMap> variants;

  friend bool operator==(const VariantSet &, const VariantSet &) = default;
};

std::string variants_to_json(const VariantSet & set);
/// Also validates every correspondence against the embedded source map.
VariantSet variants_from_json(std::string_view text);
void save_variants(const VariantSet & set, const std::filesystem::path & path);
VariantSet load_variants(const std::filesystem::path & path);

std::string detections_to_json(const DetectionResult & result, const PatchExtent & extent);
DetectionResult detections_from_json(std::string_view text, PatchExtent * extent = nullptr);
void save_detections(const DetectionResult & result, const PatchExtent & extent,
                     const std::filesystem::path & path);
DetectionResult load_detections(const std::filesystem::path & path, PatchExtent * extent = nullptr);

/// One JSON header line, then groups * points * width little-endian float64 values.
std::string query_set_to_bytes(const ExQuerySet & set);
ExQuerySet query_set_from_bytes(std::string_view bytes);
void save_query_set(const ExQuerySet & set, const std::filesystem::path & path);
ExQuerySet load_query_set(const std::filesystem::path & path);

struct AssignmentRow
{
  std::size_t slot{0};
  std::optional<std::string> gt_id;  ///< empty for background
  bool pinned{false};
  double cost{0.0};

  friend bool operator==(const AssignmentRow &, const AssignmentRow &) = default;
};

std::vector<AssignmentRow> assignment_rows(const Assignment & assignment, const VectorMap & gt);
/// Tab-separated: slot, gt_id or "background", pinned (0/1), cost.
std::string assignment_to_table(std::span<const AssignmentRow> rows);
std::vector<AssignmentRow> assignment_from_table(std::string_view text);

std::string evaluation_to_json(const ApReport & report);
ApReport evaluation_from_json(std::string_view text);

std::string report_to_json(const PipelineReport & report, bool include_timing = false);
PipelineReport report_from_json(std::string_view text);
}  // namespace priormap::io

#endif  // PRIORMAP__PERSISTENCE_HPP_
