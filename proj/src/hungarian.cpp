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

#include "priormap/hungarian.hpp"

#include "priormap/error.hpp"
#include "priormap/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace priormap
{
AssignmentSolution hungarian(const CostMatrix & cost)
{
  for (const double c : cost.data()) {
    if (!std::isfinite(c)) {
      raise(ErrorCode::kNonFinite, "cost matrix has a non-finite entry");
    }
  }
  const std::size_t rows = cost.rows();
  const std::size_t cols = cost.cols();
  AssignmentSolution sol;
  sol.row_to_col.assign(rows, -1);
  sol.col_to_row.assign(cols, -1);
  const std::size_t n = std::max(rows, cols);
  if (n == 0) {
    return sol;
  }

  // Square padded copy; row i (1-based) lives at a[(i - 1) * n].
  std::vector<double> a(n * n, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(cost.row(r).data(), cols, a.data() + r * n);
  }

  const auto & k = kernels::active_kernels();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::int64_t> p(n + 1, 0), way(n + 1, 0), used(n + 1);
  std::vector<std::int64_t> used_cols;
  used_cols.reserve(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = static_cast<std::int64_t>(i);
    std::int64_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    used_cols.clear();
    do {
      used[j0] = 1;
      used_cols.push_back(j0);
      const auto i0 = static_cast<std::size_t>(p[j0]);
      std::int64_t j1 = -1;
      const double delta = k.hungarian_scan(a.data() + (i0 - 1) * n, u[i0], v.data(), minv.data(),
                                            way.data(), used.data(), j0, n, &j1);
      for (const auto j : used_cols) {
        u[p[j]] += delta;
      }
      k.hungarian_shift(v.data(), minv.data(), used.data(), delta, n);
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::int64_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  for (std::size_t j = 1; j <= n; ++j) {
    const auto r = static_cast<std::size_t>(p[j] - 1);
    const std::size_t c = j - 1;
    if (r < rows && c < cols) {
      sol.row_to_col[r] = static_cast<std::int64_t>(c);
      sol.col_to_row[c] = static_cast<std::int64_t>(r);
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    if (sol.row_to_col[r] >= 0) {
      sol.total_cost += cost(r, static_cast<std::size_t>(sol.row_to_col[r]));
    }
  }
  return sol;
}
}  // namespace priormap
