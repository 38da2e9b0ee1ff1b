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

#include <doctest.h>

#include "oracles.hpp"
#include "rdars/socp.hpp"

using namespace rdars;

namespace {

SocConstraint ball(Index n, double radius)
{
    SocConstraint c;
    c.A = MatR::Identity(n, n);
    c.b = VecR::Zero(n);
    c.d = VecR::Zero(n);
    c.e = radius;
    return c;
}

}  // namespace

TEST_CASE("linear objective over a ball has the closed form")
{
    oracle::Rng rng(1);
    for (int t = 0; t < 10; ++t) {
        LinearSocp p;
        p.c = VecR::NullaryExpr(6, [&] { return rng.normal(); });
        p.cones.push_back(ball(6, 1.0));
        const SocpSolution s = solve_linear_socp(p);
        const VecR ref = -p.c / p.c.norm();
        CHECK((s.x - ref).norm() <= 1e-6);
        CHECK(s.objective == doctest::Approx(-p.c.norm()).epsilon(1e-9));
        CHECK(kkt_residual(p, s) <= 1e-7);
    }
}

TEST_CASE("minimum norm under random cones beats feasible samples")
{
    oracle::Rng rng(2);
    for (int t = 0; t < 5; ++t) {
        const Index n = 4;
        const VecR xs = VecR::NullaryExpr(n, [&] { return rng.normal(); });
        // Variables [x; tau]: minimize tau, ||x|| <= tau, plus cones strictly satisfied at xs.
        LinearSocp p;
        p.c = VecR::Zero(n + 1);
        p.c(n) = 1.0;
        std::vector<SocConstraint> user;
        for (int i = 0; i < 3; ++i) {
            SocConstraint c;
            c.A = MatR::NullaryExpr(2, n, [&] { return 0.3 * rng.normal(); });
            c.b = VecR::NullaryExpr(2, [&] { return 0.3 * rng.normal(); });
            c.d = VecR::NullaryExpr(n, [&] { return rng.normal(); });
            c.e = (c.A * xs + c.b).norm() - c.d.dot(xs) + 0.5;
            user.push_back(c);
            SocConstraint lifted = c;
            lifted.A.conservativeResize(2, n + 1);
            lifted.A.col(n).setZero();
            lifted.d.conservativeResize(n + 1);
            lifted.d(n) = 0.0;
            p.cones.push_back(lifted);
        }
        SocConstraint nc;
        nc.A = MatR::Zero(n, n + 1);
        nc.A.leftCols(n).setIdentity();
        nc.b = VecR::Zero(n);
        nc.d = VecR::Zero(n + 1);
        nc.d(n) = 1.0;
        p.cones.push_back(nc);

        const SocpSolution s = solve_linear_socp(p);
        const double best = s.x.head(n).norm();
        for (const auto& c : user) CHECK(cone_slack(c, s.x.head(n)) >= -1e-9);
        CHECK(kkt_residual(p, s) <= 1e-7);

        int accepted = 0;
        while (accepted < 1000) {
            const VecR x = xs + VecR::NullaryExpr(n, [&] { return 2.0 * rng.normal(); });
            bool ok = true;
            for (const auto& c : user) ok = ok && cone_slack(c, x) >= 0.0;
            if (!ok) continue;
            ++accepted;
            CHECK(best <= x.norm() + 1e-9);
        }
    }
}

TEST_CASE("warm start and phase one agree")
{
    oracle::Rng rng(3);
    LinearSocp p;
    p.c = VecR::NullaryExpr(3, [&] { return rng.normal(); });
    p.cones.push_back(ball(3, 2.0));
    SocConstraint half;  // x0 >= 0.5 as a cone with an empty norm part
    half.A = MatR::Zero(0, 3);
    half.b = VecR::Zero(0);
    half.d = VecR::Unit(3, 0);
    half.e = -0.5;
    p.cones.push_back(half);
    const SocpSolution cold = solve_linear_socp(p);
    const SocpSolution warm = solve_linear_socp(p, VecR::Unit(3, 0));
    CHECK((cold.x - warm.x).norm() <= 1e-6);
    CHECK(cold.x(0) >= 0.5 - 1e-9);
}

TEST_CASE("infeasible and unbounded problems")
{
    LinearSocp p;
    p.c = VecR::Ones(2);
    p.cones.push_back(ball(2, -1.0));
    CHECK_THROWS_AS(solve_linear_socp(p), InfeasibleError);

    LinearSocp q;
    q.c = VecR::Ones(2);
    CHECK_THROWS_AS(solve_linear_socp(q), NumericalError);

    LinearSocp r;  // half-space only: unbounded below
    r.c = VecR::Unit(2, 0);
    SocConstraint h;
    h.A = MatR::Zero(0, 2);
    h.b = VecR::Zero(0);
    h.d = VecR::Unit(2, 1);
    h.e = 1.0;
    r.cones.push_back(h);
    CHECK_THROWS_AS(solve_linear_socp(r), NumericalError);
}
