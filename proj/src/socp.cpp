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

#include "rdars/socp.hpp"

#include <cmath>
#include <limits>

namespace rdars {

double cone_slack(const SocConstraint& cone, const VecR& x)
{
    const double u = cone.d.dot(x) + cone.e;
    const double r = cone.A.rows() > 0 ? (cone.A * x + cone.b).norm() : 0.0;
    return u - r;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Barrier {
    double value = 0.0;
    VecR grad;
    MatR hess;
};

bool strictly_feasible(const std::vector<SocConstraint>& cones, const VecR& x)
{
    for (const auto& cone : cones)
        if (!(cone_slack(cone, x) > 0.0)) return false;
    return true;
}

// Value of -sum log(u^2 - ||y||^2), or +inf outside the interior.
double barrier_value(const std::vector<SocConstraint>& cones, const VecR& x)
{
    double v = 0.0;
    for (const auto& cone : cones) {
        const double u = cone.d.dot(x) + cone.e;
        if (!(u > 0.0)) return kInf;
        const double yy = cone.A.rows() > 0 ? (cone.A * x + cone.b).squaredNorm() : 0.0;
        const double g = u * u - yy;
        if (!(g > 0.0)) return kInf;
        v -= std::log(g);
    }
    return v;
}

Barrier barrier(const std::vector<SocConstraint>& cones, const VecR& x)
{
    const Index n = x.size();
    Barrier out{0.0, VecR::Zero(n), MatR::Zero(n, n)};
    for (const auto& cone : cones) {
        const double u = cone.d.dot(x) + cone.e;
        VecR dg = 2.0 * u * cone.d;
        MatR d2g = 2.0 * cone.d * cone.d.transpose();
        double g = u * u;
        if (cone.A.rows() > 0) {
            const VecR y = cone.A * x + cone.b;
            g -= y.squaredNorm();
            dg -= 2.0 * cone.A.transpose() * y;
            d2g -= 2.0 * cone.A.transpose() * cone.A;
        }
        out.value -= std::log(g);
        out.grad -= dg / g;
        out.hess += dg * dg.transpose() / (g * g) - d2g / g;
    }
    return out;
}

struct Centered {
    VecR x;
    int steps = 0;
};

// Newton's method on t c^T x + barrier(x) from a strictly feasible start.
// `stop` lets phase I exit as soon as the iterate is good enough.
template <typename Stop>
Centered center(const VecR& c, const std::vector<SocConstraint>& cones, VecR x, double t, int max_newton,
                Stop&& stop)
{
    Centered out;
    for (int it = 0; it < max_newton; ++it) {
        if (stop(x)) break;
        const Barrier b = barrier(cones, x);
        const VecR grad = t * c + b.grad;
        MatR H = b.hess;
        const double reg = 1e-14 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
        H.diagonal().array() += reg;
        Eigen::LDLT<MatR> ldlt(H);
        VecR dx = -ldlt.solve(grad);
        if (!dx.allFinite()) dx = -grad / (1.0 + grad.norm());
        const double decrement = -grad.dot(dx);
        ++out.steps;
        if (decrement < 0.0) dx = -grad;  // fall back to steepest descent
        if (std::abs(decrement) * 0.5 < 1e-12) break;

        const double slope = grad.dot(dx);
        double step = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 80; ++ls) {
            const VecR xn = x + step * dx;
            const double bv = barrier_value(cones, xn);
            // Compare increments: absolute values lose precision once t is large.
            if (std::isfinite(bv) && t * c.dot(step * dx) + (bv - b.value) <= 0.25 * step * slope) {
                x = xn;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
        if (x.norm() > 1e14) throw NumericalError("conic problem appears unbounded");
    }
    out.x = std::move(x);
    return out;
}

VecR phase_one(const LinearSocp& p, const VecR& x_start, const SocpOptions& opt, int& steps)
{
    const Index n = p.c.size();
    double s0 = 0.0;
    for (const auto& cone : p.cones) s0 = std::max(s0, -cone_slack(cone, x_start));
    s0 = s0 + 1.0;

    // Variables [x; s]: ||A x + b|| <= d^T x + e + s, and s >= -1.
    std::vector<SocConstraint> cones;
    for (const auto& cone : p.cones) {
        SocConstraint q;
        q.A = MatR::Zero(cone.A.rows(), n + 1);
        q.A.leftCols(n) = cone.A;
        q.b = cone.b;
        q.d = VecR::Zero(n + 1);
        q.d.head(n) = cone.d;
        q.d(n) = 1.0;
        q.e = cone.e;
        cones.push_back(std::move(q));
    }
    SocConstraint floor;
    floor.A = MatR::Zero(0, n + 1);
    floor.b = VecR::Zero(0);
    floor.d = VecR::Zero(n + 1);
    floor.d(n) = 1.0;
    floor.e = 1.0;
    cones.push_back(floor);

    VecR c = VecR::Zero(n + 1);
    c(n) = 1.0;
    VecR y(n + 1);
    y.head(n) = x_start;
    y(n) = s0;

    auto done = [&](const VecR& v) { return v(n) < 0.0 && strictly_feasible(p.cones, v.head(n)); };
    double t = 1.0;
    const double m = static_cast<double>(cones.size());
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        const Centered r = center(c, cones, y, t, opt.max_newton, done);
        y = r.x;
        steps += r.steps;
        if (done(y)) return y.head(n);
        // s* >= 0 once the gap certifies it.
        if (y(n) - 2.0 * m / t >= 0.0) break;
        t *= opt.t_growth;
    }
    throw InfeasibleError("conic constraints have no strictly feasible point");
}

}  // namespace

double kkt_residual(const LinearSocp& p, const SocpSolution& s)
{
    const double scale = 1.0 + std::abs(s.objective);
    double worst = 0.0;
    VecR stat = p.c;
    for (std::size_t i = 0; i < p.cones.size(); ++i) {
        const auto& cone = p.cones[i];
        const double lam = s.lambda(static_cast<Index>(i));
        const VecR& z = s.z[i];
        worst = std::max(worst, std::max(0.0, -cone_slack(cone, s.x)));
        worst = std::max(worst, std::max(0.0, z.norm() - lam));
        stat -= lam * cone.d;
        if (cone.A.rows() > 0) stat -= cone.A.transpose() * z;
        const double u = cone.d.dot(s.x) + cone.e;
        double comp = lam * u;
        if (cone.A.rows() > 0) comp += z.dot(cone.A * s.x + cone.b);
        worst = std::max(worst, std::abs(comp) / scale);
    }
    worst = std::max(worst, stat.norm() / (1.0 + p.c.norm()));
    return worst;
}

namespace {

// Barrier duals inherit the cancellation in u^2 - ||y||^2 near the boundary.
// Refit lambda on the active cones with z = -lambda y / ||y|| and keep the
// result when it is nonnegative and reduces the KKT residual.
void polish_duals(const LinearSocp& p, SocpSolution& sol)
{
    const Index n = p.c.size();
    std::vector<std::size_t> active;
    std::vector<VecR> dirs;
    for (std::size_t i = 0; i < p.cones.size(); ++i) {
        const auto& cone = p.cones[i];
        const double u = cone.d.dot(sol.x) + cone.e;
        if (cone_slack(cone, sol.x) > 1e-7 * (1.0 + std::abs(u))) continue;
        VecR g = cone.d;
        if (cone.A.rows() > 0) {
            const VecR y = cone.A * sol.x + cone.b;
            const double r = y.norm();
            if (!(r > 0.0)) return;
            g -= cone.A.transpose() * y / r;
        }
        active.push_back(i);
        dirs.push_back(std::move(g));
    }
    if (active.empty()) return;
    MatR G(n, static_cast<Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) G.col(static_cast<Index>(j)) = dirs[j];
    const VecR lam = G.colPivHouseholderQr().solve(p.c);
    if (!lam.allFinite() || lam.minCoeff() < 0.0) return;

    SocpSolution cand = sol;
    cand.lambda.setZero();
    for (auto& z : cand.z) z.setZero();
    for (std::size_t j = 0; j < active.size(); ++j) {
        const std::size_t i = active[j];
        const auto& cone = p.cones[i];
        cand.lambda(static_cast<Index>(i)) = lam(static_cast<Index>(j));
        if (cone.A.rows() > 0) {
            const VecR y = cone.A * sol.x + cone.b;
            cand.z[i] = -lam(static_cast<Index>(j)) * y / y.norm();
        }
    }
    if (kkt_residual(p, cand) < kkt_residual(p, sol)) sol = std::move(cand);
}

}  // namespace

SocpSolution solve_linear_socp(const LinearSocp& p, const std::optional<VecR>& x0, const SocpOptions& opt)
{
    const Index n = p.c.size();
    for (const auto& cone : p.cones) {
        if (cone.d.size() != n || (cone.A.rows() > 0 && cone.A.cols() != n) || cone.b.size() != cone.A.rows())
            throw DimensionError("cone dimensions do not match the variable");
    }
    SocpSolution sol;
    VecR x = x0.value_or(VecR::Zero(n));
    if (x.size() != n) throw DimensionError("starting point has the wrong length");
    if (!strictly_feasible(p.cones, x)) x = phase_one(p, x, opt, sol.newton_steps);

    const double m = static_cast<double>(p.cones.size());
    if (m == 0) {
        if (p.c.norm() > 0) throw NumericalError("conic problem appears unbounded");
        sol.x = x;
        return sol;
    }
    const double cn = std::max(p.c.norm(), 1e-300);
    // Start where the objective and barrier are balanced.
    double t = std::max(1.0, 1.0 / cn);
    auto never = [](const VecR&) { return false; };
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        const Centered r = center(p.c, p.cones, x, t, opt.max_newton, never);
        x = r.x;
        sol.newton_steps += r.steps;
        const double obj = p.c.dot(x);
        if (2.0 * m / t <= opt.gap_tol * (1.0 + std::abs(obj))) break;
        t *= opt.t_growth;
    }

    sol.x = x;
    sol.objective = p.c.dot(x);
    sol.gap = 2.0 * m / t;
    sol.lambda.resize(p.cones.size());
    for (std::size_t i = 0; i < p.cones.size(); ++i) {
        const auto& cone = p.cones[i];
        const double u = cone.d.dot(x) + cone.e;
        VecR y = cone.A.rows() > 0 ? VecR(cone.A * x + cone.b) : VecR::Zero(0);
        const double g = u * u - y.squaredNorm();
        sol.lambda(static_cast<Index>(i)) = 2.0 * u / (t * g);
        sol.z.push_back(-2.0 * y / (t * g));
    }
    polish_duals(p, sol);
    return sol;
}

}  // namespace rdars
