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

#ifndef PRIORMAP__BENCH_HPP_
#define PRIORMAP__BENCH_HPP_

#include "priormap/attribution.hpp"
#include "priormap/geometry.hpp"
#include "priormap/hungarian.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace priormap
{
/// Random cost families for timing the solver.
enum class CostFamily : std::uint8_t {
  kRankOne,  ///< c_ij = a_i * b_j with a, b uniform in [0, 1): long augmenting paths
  kUniform,  ///< independent uniform [0, 1) entries
};

std::string_view to_string(CostFamily family) noexcept;
std::optional<CostFamily> cost_family_from_string(std::string_view text) noexcept;

struct BenchConfig
{
  std::vector<std::size_t> sizes{10, 25, 50, 100, 200};
  std::vector<double> pin_fracs{0.0, 0.25, 0.5, 0.75};
  std::size_t repeats{9};
  std::uint64_t seed{0};
  CostFamily family{CostFamily::kRankOne};
};

struct BenchRow
{
  std::size_t n{0};
  double pin_frac{0.0};
  std::size_t sub_size{0};   ///< free slots left for the solver
  double hungarian_ms{0.0};   ///< median, solver alone on a sub_size x sub_size random matrix
  double match_ms{0.0};       ///< median, full match_with_preattribution on random elements
  double speedup{1.0};        ///< hungarian_ms at pin 0 over hungarian_ms at this pin fraction
  double match_speedup{1.0};  ///< the same ratio for match_ms
};

/// An n-slot matching instance whose first round(pin_frac * n) slots are pinned.
struct MatchInstance
{
  VectorMap gt;
  std::vector<std::optional<MapElement>> preds;
  PartialAssignment partial;
};

MatchInstance make_match_instance(std::size_t n, double pin_frac, std::uint64_t seed);

CostMatrix random_cost_matrix(std::size_t n, std::uint64_t seed,
                              CostFamily family = CostFamily::kUniform);

/// Median wall time in milliseconds of `repeats` calls to hungarian on fresh matrices.
double time_hungarian_ms(std::size_t n, std::size_t repeats, std::uint64_t seed,
                         CostFamily family = CostFamily::kRankOne);

std::vector<BenchRow> run_bench(const BenchConfig & config);

/// Least-squares slope of log(time) against log(n).
double loglog_slope(std::span<const double> n, std::span<const double> time_ms);

std::string bench_to_table(std::span<const BenchRow> rows);
}  // namespace priormap

#endif  // PRIORMAP__BENCH_HPP_
