// SPDX-License-Identifier: Apache-2.0
//
// rdars-isac: joint beamforming and mode selection for RDARS-aided ISAC
// Copyright (C) 2026 The rdars-isac authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rdars/assignment.hpp"

#include <limits>

namespace rdars {

// Shortest augmenting path Hungarian method with potentials, O(cols^2 rows).
std::vector<Index> solve_assignment(const MatR& cost)
{
    const Index n = cost.cols();  // columns to place
    const Index m = cost.rows();  // candidate rows
    if (n > m) throw DimensionError("assignment needs at least as many rows as columns");
    if (!cost.allFinite()) throw NumericalError("assignment cost has non-finite entries");
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based arrays as in the classical formulation; p[j] is the column placed on row j.
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> v(static_cast<std::size_t>(m + 1), 0.0);
    std::vector<Index> p(static_cast<std::size_t>(m + 1), 0);
    std::vector<Index> way(static_cast<std::size_t>(m + 1), 0);
    auto at = [](auto& vec, Index i) -> auto& { return vec[static_cast<std::size_t>(i)]; };

    for (Index i = 1; i <= n; ++i) {
        at(p, 0) = i;
        Index j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
        std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
        do {
            at(used, j0) = 1;
            const Index i0 = at(p, j0);
            double delta = inf;
            Index j1 = 0;
            for (Index j = 1; j <= m; ++j) {
                if (at(used, j)) continue;
                const double cur = cost(j - 1, i0 - 1) - at(u, i0) - at(v, j);
                if (cur < at(minv, j)) {
                    at(minv, j) = cur;
                    at(way, j) = j0;
                }
                if (at(minv, j) < delta) {
                    delta = at(minv, j);
                    j1 = j;
                }
            }
            for (Index j = 0; j <= m; ++j) {
                if (at(used, j)) {
                    at(u, at(p, j)) += delta;
                    at(v, j) -= delta;
                } else {
                    at(minv, j) -= delta;
                }
            }
            j0 = j1;
        } while (at(p, j0) != 0);
        do {
            const Index j1 = at(way, j0);
            at(p, j0) = at(p, j1);
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<Index> rows(static_cast<std::size_t>(n), -1);
    for (Index j = 1; j <= m; ++j)
        if (at(p, j) != 0) rows[static_cast<std::size_t>(at(p, j) - 1)] = j - 1;
    return rows;
}

double assignment_cost(const MatR& cost, const std::vector<Index>& rows)
{
    double total = 0.0;
    for (std::size_t c = 0; c < rows.size(); ++c) total += cost(rows[c], static_cast<Index>(c));
    return total;
}

}  // namespace rdars
