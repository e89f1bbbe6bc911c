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

#include "priormap/kernels/kernels.hpp"

#include <cmath>
#include <limits>

namespace priormap::kernels
{
namespace
{
void nearest_sq_dist(
  const double * ax, const double * ay, std::size_t na, const double * bx, const double * by,
  std::size_t nb, double * out)
{
  for (std::size_t i = 0; i < na; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < nb; ++j) {
      const double dx = ax[i] - bx[j];
      const double dy = ay[i] - by[j];
      const double d = dx * dx + dy * dy;
      best = d < best ? d : best;
    }
    out[i] = best;
  }
}

void pointwise_dist(
  const double * ax, const double * ay, const double * bx, const double * by, std::size_t n,
  double * out)
{
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

double hungarian_scan(
  const double * row, double u_row, const double * v, double * minv, std::int64_t * way,
  const std::int64_t * used, std::int64_t j0, std::size_t n, std::int64_t * best_col)
{
  double delta = std::numeric_limits<double>::infinity();
  std::int64_t j1 = -1;
  for (std::size_t j = 1; j <= n; ++j) {
    if (used[j]) {
      continue;
    }
    const double cur = (row[j - 1] - u_row) - v[j];
    if (cur < minv[j]) {
      minv[j] = cur;
      way[j] = j0;
    }
    if (minv[j] < delta) {
      delta = minv[j];
      j1 = static_cast<std::int64_t>(j);
    }
  }
  *best_col = j1;
  return delta;
}

void hungarian_shift(
  double * v, double * minv, const std::int64_t * used, double delta, std::size_t n)
{
  for (std::size_t j = 0; j <= n; ++j) {
    if (used[j]) {
      v[j] -= delta;
    } else {
      minv[j] -= delta;
    }
  }
}

constexpr KernelTable kScalar{"scalar", nearest_sq_dist, pointwise_dist, hungarian_scan,
                              hungarian_shift};
}  // namespace

const KernelTable & scalar_kernels() noexcept { return kScalar; }
}  // namespace priormap::kernels
