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

#ifndef PRIORMAP__KERNELS__KERNELS_HPP_
#define PRIORMAP__KERNELS__KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace priormap::kernels
{
/**
 * @brief Table of inner-loop kernels.
 *
 * Every variant must produce results bit-identical to the scalar reference: no fused
 * multiply-add, same operation order per element, and any reduction that is not exact
 * (sums) is left to the caller.
 */
struct KernelTable
{
  std::string_view name;

  /// out[i] = min_j (ax[i]-bx[j])^2 + (ay[i]-by[j])^2
  void (*nearest_sq_dist)(
    const double * ax, const double * ay, std::size_t na, const double * bx, const double * by,
    std::size_t nb, double * out);

  /// out[i] = sqrt((ax[i]-bx[i])^2 + (ay[i]-by[i])^2)
  void (*pointwise_dist)(
    const double * ax, const double * ay, const double * bx, const double * by, std::size_t n,
    double * out);

  /**
   * Hungarian column scan for one row. For every column j in [1, n] with used[j] == 0:
   *   cur = (row[j-1] - u_row) - v[j]; if cur < minv[j] then minv[j] = cur, way[j] = j0.
   * Returns the first unused j minimizing minv[j] through `best_col` and its value.
   */
  double (*hungarian_scan)(
    const double * row, double u_row, const double * v, double * minv, std::int64_t * way,
    const std::int64_t * used, std::int64_t j0, std::size_t n, std::int64_t * best_col);

  /// For j in [0, n]: used ? v[j] -= delta : minv[j] -= delta.
  void (*hungarian_shift)(
    double * v, double * minv, const std::int64_t * used, double delta, std::size_t n);
};

const KernelTable & scalar_kernels() noexcept;

/// AVX2 variant, or nullptr when not compiled in or not supported by the running CPU.
const KernelTable * avx2_kernels() noexcept;

/**
 * @brief Kernels used by the library.
 *
 * Picks the widest supported variant. The environment variable PRIORMAP_SIMD=scalar forces
 * the scalar reference.
 */
const KernelTable & active_kernels() noexcept;

/// Override the selection (nullptr restores automatic choice). Not thread-safe.
void set_active_kernels(const KernelTable * table) noexcept;
}  // namespace priormap::kernels

#endif  // PRIORMAP__KERNELS__KERNELS_HPP_
