// Copyright 2026 The vbs Authors
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

#include "vbs/permanent.hpp"

#include <bit>
#include <cstdint>
#include <vector>

#include "vbs/errors.hpp"

namespace vbs {

Complex ryser_permanent(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("permanent needs a square matrix");
  const auto n = static_cast<int>(a.rows());
  if (n == 0) return {1.0, 0.0};
  if (n > 30) throw InvalidArgument("permanent limited to 30x30 matrices");

  std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex{});
  Complex total{};
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const int col = std::countr_zero(k);
    gray ^= std::uint64_t{1} << col;
    const double sign = ((gray >> col) & 1U) ? 1.0 : -1.0;
    Complex prod{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
      row_sums[static_cast<std::size_t>(i)] += sign * a(i, col);
      prod *= row_sums[static_cast<std::size_t>(i)];
    }
    if (std::popcount(gray) & 1) {
      total -= prod;
    } else {
      total += prod;
    }
  }
  return (n & 1) ? -total : total;
}

}  // namespace vbs
