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

#include <optional>
#include <vector>

#include "rdars/types.hpp"

namespace rdars {

/// ||A x + b|| <= d^T x + e. A may have zero rows (a plain linear inequality).
struct SocConstraint {
    MatR A;
    VecR b;
    VecR d;
    double e = 0.0;
};

/// minimize c^T x subject to every cone.
struct LinearSocp {
    VecR c;
    std::vector<SocConstraint> cones;
};

struct SocpOptions {
    double gap_tol = 1e-10;    // stop when the gap is below gap_tol (1 + |objective|)
    double t_growth = 20.0;
    int max_newton = 100;      // per centering step
    int max_outer = 80;
};

struct SocpSolution {
    VecR x;
    double objective = 0.0;
    double gap = 0.0;       // barrier bound on the duality gap
    VecR lambda;            // dual scalar per cone
    std::vector<VecR> z;    // dual vector per cone, c = sum lambda_i d_i + A_i^T z_i
    int newton_steps = 0;
};

/// Slack d^T x + e - ||A x + b|| of one cone.
double cone_slack(const SocConstraint& cone, const VecR& x);

/// Log-barrier path following. `x0`, when strictly feasible, skips phase I.
/// Throws InfeasibleError when no strictly feasible point exists and
/// NumericalError when the objective is unbounded below.
SocpSolution solve_linear_socp(const LinearSocp& problem, const std::optional<VecR>& x0 = std::nullopt,
                               const SocpOptions& options = {});

/// Largest KKT violation of (x, duals): primal slack, dual cone membership,
/// stationarity and complementarity, scaled by 1 + |objective|.
double kkt_residual(const LinearSocp& problem, const SocpSolution& solution);

}  // namespace rdars
