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

#include <immintrin.h>

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
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  for (; i + 4 <= na; i += 4) {
    const __m256d vax = _mm256_loadu_pd(ax + i);
    const __m256d vay = _mm256_loadu_pd(ay + i);
    __m256d best = _mm256_set1_pd(inf);
    for (std::size_t j = 0; j < nb; ++j) {
      const __m256d dx = _mm256_sub_pd(vax, _mm256_set1_pd(bx[j]));
      const __m256d dy = _mm256_sub_pd(vay, _mm256_set1_pd(by[j]));
      const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
      // (d < best) ? d : best, same as the scalar reference
      best = _mm256_min_pd(d, best);
    }
    _mm256_storeu_pd(out + i, best);
  }
  for (; i < na; ++i) {
    double best = inf;
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
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(ax + i), _mm256_loadu_pd(bx + i));
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ay + i), _mm256_loadu_pd(by + i));
    const __m256d d = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(d));
  }
  for (; i < n; ++i) {
    const double dx = ax[i] - bx[i];
    const double dy = ay[i] - by[i];
    out[i] = std::sqrt(dx * dx + dy * dy);
  }
}

double hungarian_scan(
  const double * row, double u_row, const double * v, double * minv, std::int64_t * way,
  const std::int64_t * used, std::int64_t j0, std::size_t n, std::int64_t * best_col)
{
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d vu = _mm256_set1_pd(u_row);
  const __m256d vinf = _mm256_set1_pd(inf);
  const __m256i vj0 = _mm256_set1_epi64x(j0);
  const __m256i zero = _mm256_setzero_si256();
  const __m256i four = _mm256_set1_epi64x(4);
  __m256d best = vinf;
  __m256i best_idx = _mm256_set1_epi64x(-1);
  __m256i jv = _mm256_setr_epi64x(1, 2, 3, 4);

  std::size_t j = 1;
  for (; j + 3 <= n; j += 4) {
    const __m256i used_v = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(used + j));
    const __m256d free_mask = _mm256_castsi256_pd(_mm256_cmpeq_epi64(used_v, zero));
    const __m256d cur =
      _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(row + j - 1), vu), _mm256_loadu_pd(v + j));
    const __m256d old_minv = _mm256_loadu_pd(minv + j);
    const __m256d lt = _mm256_and_pd(_mm256_cmp_pd(cur, old_minv, _CMP_LT_OQ), free_mask);
    const __m256d new_minv = _mm256_blendv_pd(old_minv, cur, lt);
    _mm256_storeu_pd(minv + j, new_minv);
    const __m256i old_way = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(way + j));
    const __m256i new_way = _mm256_castpd_si256(
      _mm256_blendv_pd(_mm256_castsi256_pd(old_way), _mm256_castsi256_pd(vj0), lt));
    _mm256_storeu_si256(reinterpret_cast<__m256i *>(way + j), new_way);

    const __m256d cand = _mm256_blendv_pd(vinf, new_minv, free_mask);
    const __m256d better = _mm256_cmp_pd(cand, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, cand, better);
    best_idx = _mm256_castpd_si256(
      _mm256_blendv_pd(_mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(jv), better));
    jv = _mm256_add_epi64(jv, four);
  }

  alignas(32) double lane_val[4];
  alignas(32) std::int64_t lane_idx[4];
  _mm256_store_pd(lane_val, best);
  _mm256_store_si256(reinterpret_cast<__m256i *>(lane_idx), best_idx);
  double delta = inf;
  std::int64_t j1 = -1;
  for (int k = 0; k < 4; ++k) {
    if (lane_idx[k] < 0) {
      continue;
    }
    if (lane_val[k] < delta || (lane_val[k] == delta && lane_idx[k] < j1)) {
      delta = lane_val[k];
      j1 = lane_idx[k];
    }
  }

  for (; j <= n; ++j) {
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
  const __m256d vd = _mm256_set1_pd(delta);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t j = 0;
  for (; j + 3 <= n; j += 4) {
    const __m256i used_v = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(used + j));
    const __m256d used_mask =
      _mm256_xor_pd(_mm256_castsi256_pd(_mm256_cmpeq_epi64(used_v, zero)),
                    _mm256_castsi256_pd(_mm256_set1_epi64x(-1)));
    const __m256d vv = _mm256_loadu_pd(v + j);
    const __m256d mv = _mm256_loadu_pd(minv + j);
    _mm256_storeu_pd(v + j, _mm256_blendv_pd(vv, _mm256_sub_pd(vv, vd), used_mask));
    _mm256_storeu_pd(minv + j, _mm256_blendv_pd(_mm256_sub_pd(mv, vd), mv, used_mask));
  }
  for (; j <= n; ++j) {
    if (used[j]) {
      v[j] -= delta;
    } else {
      minv[j] -= delta;
    }
  }
}

constexpr KernelTable kAvx2{"avx2", nearest_sq_dist, pointwise_dist, hungarian_scan,
                            hungarian_shift};
}  // namespace

const KernelTable * avx2_table_unchecked() noexcept { return &kAvx2; }
}  // namespace priormap::kernels
