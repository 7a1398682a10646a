// Copyright 2026 The CharGround Authors.
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

// Kuhn-Munkres with row/column potentials (shortest augmenting path form),
// O(n^3) on the square padding of the input.

#include <algorithm>
#include <cmath>
#include <limits>

#include "charground/error.hpp"
#include "charground/grounding.hpp"

namespace charground {

std::vector<std::pair<std::size_t, std::size_t>> kuhn_munkres(
    const SimilarityMatrix& matrix) {
  const std::size_t rows = matrix.rows;
  const std::size_t cols = matrix.cols;
  if (matrix.values.size() != rows * cols) {
    throw_parameter("similarity matrix has inconsistent shape");
  }
  for (double v : matrix.values) {
    if (!std::isfinite(v)) throw_parameter("similarity matrix has non-finite entry");
  }
  if (rows == 0 || cols == 0) return {};

  const std::size_t n = std::max(rows, cols);
  // Minimise negated similarity; dummy cells cost 0.
  auto cost = [&](std::size_t i, std::size_t j) {
    return (i < rows && j < cols) ? -matrix.at(i, j) : 0.0;
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // 1-based; index 0 is the virtual source column.
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> match_of_col(n + 1, 0);
  std::vector<std::size_t> way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match_of_col[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match_of_col[j0] = match_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t i = match_of_col[j];
    if (i >= 1 && i - 1 < rows && j - 1 < cols) pairs.emplace_back(i - 1, j - 1);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace charground
