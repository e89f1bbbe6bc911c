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

#include "priormap/bench.hpp"

#include "priormap/error.hpp"
#include "priormap/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace priormap
{
namespace
{
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

MapElement random_element(std::size_t k, Rng & rng)
{
  const PatchExtent ext;
  MapElement e;
  e.id = "e" + std::to_string(k);
  e.cls = kAllClasses[rng.index(kNumClasses)];
  const Point a{rng.uniform(ext.x_min(), ext.x_max()), rng.uniform(ext.y_min(), ext.y_max())};
  const double heading = rng.uniform(0.0, 2.0 * M_PI);
  const double len = rng.uniform(2.0, 10.0);
  for (std::size_t i = 0; i < kCanonicalPoints; ++i) {
    const double t = len * static_cast<double>(i) / static_cast<double>(kCanonicalPoints - 1);
    e.points.push_back({a.x + t * std::cos(heading), a.y + t * std::sin(heading)});
  }
  return e;
}
}  // namespace

MatchInstance make_match_instance(std::size_t n, double pin_frac, std::uint64_t seed)
{
  if (!(pin_frac >= 0.0 && pin_frac <= 1.0)) {
    raise(ErrorCode::kInvalidArgument, "pin fraction must lie in [0, 1]");
  }
  Rng rng(seed);
  MatchInstance inst;
  for (std::size_t k = 0; k < n; ++k) {
    inst.gt.elements.push_back(random_element(k, rng));
  }
  for (std::size_t k = 0; k < n; ++k) {
    inst.preds.emplace_back(random_element(n + k, rng));
  }
  const auto pinned = static_cast<std::size_t>(std::llround(pin_frac * static_cast<double>(n)));
  for (std::size_t k = 0; k < n; ++k) {
    if (k < pinned) {
      inst.partial.pinned.push_back({k, k, 0.0});
    } else {
      inst.partial.free_slots.push_back(k);
      inst.partial.free_gts.push_back(k);
    }
  }
  return inst;
}

std::string_view to_string(CostFamily family) noexcept
{
  return family == CostFamily::kRankOne ? "rank_one" : "uniform";
}

std::optional<CostFamily> cost_family_from_string(std::string_view text) noexcept
{
  if (text == "rank_one") {
    return CostFamily::kRankOne;
  }
  if (text == "uniform") {
    return CostFamily::kUniform;
  }
  return std::nullopt;
}

CostMatrix random_cost_matrix(std::size_t n, std::uint64_t seed, CostFamily family)
{
  Rng rng(seed);
  CostMatrix m(n, n);
  if (family == CostFamily::kRankOne) {
    std::vector<double> a(n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) = a[r] * b[c];
      }
    }
    return m;
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      m(r, c) = rng.uniform();
    }
  }
  return m;
}

double time_hungarian_ms(std::size_t n, std::size_t repeats, std::uint64_t seed, CostFamily family)
{
  std::vector<double> times;
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const CostMatrix m = random_cost_matrix(n, derive_seed(seed, r), family);
    const auto start = Clock::now();
    const auto sol = hungarian(m);
    times.push_back(elapsed_ms(start));
    if (sol.row_to_col.size() != n) {
      raise(ErrorCode::kInvalidArgument, "solver returned a partial assignment");
    }
  }
  return median(std::move(times));
}

std::vector<BenchRow> run_bench(const BenchConfig & config)
{
  std::vector<BenchRow> rows;
  for (const std::size_t n : config.sizes) {
    double base_solver_ms = 0.0;
    double base_match_ms = 0.0;
    for (std::size_t pi = 0; pi < config.pin_fracs.size(); ++pi) {
      const double frac = config.pin_fracs[pi];
      BenchRow row;
      row.n = n;
      row.pin_frac = frac;
      std::vector<double> match_times;
      for (std::size_t r = 0; r < std::max<std::size_t>(config.repeats, 1); ++r) {
        const MatchInstance inst = make_match_instance(n, frac, derive_seed(config.seed, n * 1000 + r));
        row.sub_size = inst.partial.free_slots.size();
        const auto start = Clock::now();
        const Assignment a = match_with_preattribution(inst.preds, inst.gt, inst.partial);
        match_times.push_back(elapsed_ms(start));
        if (a.slots.size() != n) {
          raise(ErrorCode::kInvalidArgument, "match returned the wrong slot count");
        }
      }
      row.match_ms = median(std::move(match_times));
      row.hungarian_ms = row.sub_size == 0 ? 0.0
                                           : time_hungarian_ms(row.sub_size, config.repeats,
                                                               derive_seed(config.seed, n), config.family);
      if (frac == 0.0) {
        base_solver_ms = row.hungarian_ms;
        base_match_ms = row.match_ms;
      }
      const auto ratio = [](double base, double t) {
        if (base <= 0.0) {
          return 1.0;
        }
        return t > 0.0 ? base / t : std::numeric_limits<double>::infinity();
      };
      row.speedup = ratio(base_solver_ms, row.hungarian_ms);
      row.match_speedup = ratio(base_match_ms, row.match_ms);
      rows.push_back(row);
    }
  }
  return rows;
}

double loglog_slope(std::span<const double> n, std::span<const double> time_ms)
{
  if (n.size() != time_ms.size() || n.size() < 2) {
    raise(ErrorCode::kInvalidArgument, "slope needs at least two paired samples");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(time_ms[i] > 0.0)) {
      raise(ErrorCode::kInvalidArgument, "slope needs positive sizes and times");
    }
    lx.push_back(std::log(n[i]));
    ly.push_back(std::log(time_ms[i]));
  }
  const double k = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) {
    raise(ErrorCode::kInvalidArgument, "slope needs at least two distinct sizes");
  }
  return sxy / sxx;
}

std::string bench_to_table(std::span<const BenchRow> rows)
{
  std::string out = "n\tpin_frac\tsub_size\thungarian_ms\tmatch_ms\tspeedup\tmatch_speedup\n";
  char buf[160];
  for (const auto & r : rows) {
    std::snprintf(buf, sizeof(buf), "%zu\t%.2f\t%zu\t%.4f\t%.4f\t%.2f\t%.2f\n", r.n, r.pin_frac,
                  r.sub_size, r.hungarian_ms, r.match_ms, r.speedup, r.match_speedup);
    out += buf;
  }
  return out;
}
}  // namespace priormap
