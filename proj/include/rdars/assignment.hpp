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

#pragma once

#include <vector>

#include "rdars/types.hpp"

namespace rdars {

/// Minimum-cost assignment of every column of `cost` (rows >= cols) to a
/// distinct row. Returns the chosen row for each column.
std::vector<Index> solve_assignment(const MatR& cost);

double assignment_cost(const MatR& cost, const std::vector<Index>& rows);

}  // namespace rdars
