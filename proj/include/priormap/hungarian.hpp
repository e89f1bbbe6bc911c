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

#ifndef PRIORMAP__HUNGARIAN_HPP_
#define PRIORMAP__HUNGARIAN_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace priormap
{
/**
 * @brief Dense row-major cost matrix.
 */
class CostMatrix
{
public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
  : rows_(rows), cols_(cols), data_(rows * cols, fill)
  {
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double & operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const noexcept
  {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> data() const noexcept { return data_; }

private:
  std::size_t rows_{0};
  std::size_t cols_{0};
  std::vector<double> data_;
};

struct AssignmentSolution
{
  /// Column matched to each row, -1 for rows left on a padding column.
  std::vector<std::int64_t> row_to_col;
  /// Row matched to each column, -1 for columns left on a padding row.
  std::vector<std::int64_t> col_to_row;
  double total_cost{0.0};
};

/**
 * @brief Minimum-cost assignment by shortest augmenting paths with dual potentials, O(n^3).
 *
 * Rectangular inputs are padded to square with zero-cost dummies; when rows >= cols every
 * column receives a distinct row. Throws ErrorCode::kNonFinite on NaN or infinite entries.
 */
AssignmentSolution hungarian(const CostMatrix & cost);
}  // namespace priormap

#endif  // PRIORMAP__HUNGARIAN_HPP_
