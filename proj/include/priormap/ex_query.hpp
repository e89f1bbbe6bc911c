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

#ifndef PRIORMAP__EX_QUERY_HPP_
#define PRIORMAP__EX_QUERY_HPP_

#include "priormap/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace priormap
{
inline constexpr std::size_t kDefaultQueryWidth = 256;
inline constexpr std::size_t kDefaultMaxElements = 50;
/// Two coordinates followed by a three-way class one-hot.
inline constexpr std::size_t kEncodedDims = 5;

using QueryVector = std::vector<double>;

/**
 * @brief Encode each point of `element` as [x, y, onehot(class), 0, ..., 0] of width `width`.
 */
std::vector<QueryVector> encode_element(const MapElement & element, std::size_t width);

struct DecodedElement
{
  ElementClass cls{ElementClass::kDivider};
  Polyline points;
};

/// Inverse of encode_element on the first five dimensions; throws on a malformed one-hot.
DecodedElement decode_element(std::span<const QueryVector> queries);

/**
 * @brief Stand-in for trained learnable queries: `groups` x `points` vectors of `width`
 * entries drawn uniformly from (-0.1, 0.1).
 */
class LearnedQueryPool
{
public:
  static LearnedQueryPool stub(std::size_t groups, std::size_t points, std::size_t width,
                               std::uint64_t seed);

  std::size_t groups() const noexcept { return groups_; }
  std::size_t points() const noexcept { return points_; }
  std::size_t width() const noexcept { return width_; }

  /// One query vector, `width` values.
  std::span<const double> query(std::size_t group, std::size_t point) const noexcept
  {
    return {values_.data() + (group * points_ + point) * width_, width_};
  }

private:
  std::size_t groups_{0};
  std::size_t points_{0};
  std::size_t width_{0};
  std::vector<double> values_;
};

struct QuerySlot
{
  enum class Kind : std::uint8_t { kEx, kLearned };
  Kind kind{Kind::kLearned};
  std::string element_id;      ///< set for kEx
  std::size_t pool_index{0};   ///< set for kLearned

  friend bool operator==(const QuerySlot &, const QuerySlot &) = default;
};

/**
 * @brief N element groups of L queries, stored as one row-major N x L x H tensor. The first
 * n_ex groups come from map elements, the rest from the learned pool.
 */
struct ExQuerySet
{
  std::size_t groups{0};
  std::size_t points{0};
  std::size_t width{0};
  std::size_t n_ex{0};
  std::vector<double> values;
  std::vector<QuerySlot> provenance;

  std::span<const double> query(std::size_t group, std::size_t point) const noexcept
  {
    return {values.data() + (group * points + point) * width, width};
  }

  friend bool operator==(const ExQuerySet &, const ExQuerySet &) = default;
};

/// Throws ErrorCode::kOverflow when elements.size() > groups.
ExQuerySet assemble_query_set(std::span<const MapElement> elements, const LearnedQueryPool & pool,
                              std::size_t groups, std::size_t points, std::size_t width);
}  // namespace priormap

#endif  // PRIORMAP__EX_QUERY_HPP_
