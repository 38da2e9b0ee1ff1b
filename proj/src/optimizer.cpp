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

#include "rdars/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rdars/assignment.hpp"
#include "rdars/metrics.hpp"
#include "rdars/random.hpp"

namespace rdars {

OptimizerSettings settings_from_config(const SystemConfig& config)
{
    OptimizerSettings s;
    s.power_w = config.power_watts();
    s.sigma2_sq = config.sigma2_sq();
    s.sigma_alpha_sq = config.sigma_alpha_sq;
    for (int k = 0; k < config.K; ++k) {
        s.sigma1_sq.push_back(config.sigma1_sq(k));
        s.gamma_bar.push_back(config.gamma_bar(k));
    }
    s.connected = config.a;
    s.penalty = config.penalty;
    s.stopping = config.stopping;
    s.seed = config.seed;
    return s;
}

void PenaltySchedule::decay()
{
    rho1 = std::max(c1 * rho1, floor);
    rho2 = std::max(c2 * rho2, floor);
}

// ---------------------------------------------------------------------------
// Receive filter

VecC update_receive_filter(const MatC& H2, const MatC& F)
{
    const MatC G = H2 * F;
    const double norm = G.norm();
    if (!(norm > 0.0)) throw NumericalError("zero echo: H2 F vanishes");
    const MatC Gn = G / norm;
    Eigen::SelfAdjointEigenSolver<MatC> es(Gn * Gn.adjoint());
    VecC w = es.eigenvectors().col(es.eigenvalues().size() - 1);
    Index big = 0;
    w.cwiseAbs().maxCoeff(&big);
    w *= std::conj(w(big)) / std::abs(w(big));
    return w / w.norm();
}

// ---------------------------------------------------------------------------
// Transmit beamformer

bool BeamformingProblem::constrained() const
{
    return std::any_of(gamma_bar.begin(), gamma_bar.end(), [](double g) { return g > 0.0; });
}

BeamformingProblem build_beamforming_problem(const VecC& w, const MatC& H2, const MatC& F_t,
                                             const std::vector<VecC>& h1, const std::vector<double>& gamma_bar,
                                             const std::vector<double>& sigma1_sq, double power)
{
    const Index K = static_cast<Index>(h1.size());
    if (F_t.cols() != K || static_cast<Index>(gamma_bar.size()) != K || static_cast<Index>(sigma1_sq.size()) != K)
        throw DimensionError("beamforming problem: inconsistent user count");
    BeamformingProblem p;
    p.h1 = h1;
    p.gamma_bar = gamma_bar;
    p.sigma1_sq = sigma1_sq;
    p.power = power;
    // C = I_K (x) (H2^H w w^H H2) / (w^H w), applied to f_t.
    const VecC g = H2.adjoint() * w;
    const RowC proj = (w.adjoint() * H2 * F_t) / w.squaredNorm();
    p.c.resize(F_t.size());
    for (Index k = 0; k < K; ++k) p.c.segment(k * F_t.rows(), F_t.rows()) = g * proj(k);
    return p;
}

VecR embed_beamformer(const MatC& F, double power)
{
    const VecC f = F.reshaped() / std::sqrt(power);
    return real_stack(f);
}

MatC extract_beamformer(const VecR& x, Index rows, Index users, double power)
{
    return complex_unstack(x * std::sqrt(power)).reshaped(rows, users);
}

namespace {

// Real rows of h^T x_i (re and im) over the stacked real variable of size 2n.
void complex_rows(const VecC& h, Index offset, Index n, MatR& A, Index row)
{
    const Index L = h.size();
    A.block(row, offset, 1, L) = h.real().transpose();
    A.block(row, n + offset, 1, L) = -h.imag().transpose();
    A.block(row + 1, offset, 1, L) = h.imag().transpose();
    A.block(row + 1, n + offset, 1, L) = h.real().transpose();
}

// Cones of the users with a positive target over a variable with `extra` trailing entries.
std::vector<SocConstraint> sinr_cones(const BeamformingProblem& p, Index extra)
{
    const Index K = p.users();
    const Index L = p.rows();
    const Index n = K * L;
    std::vector<SocConstraint> cones;
    for (Index k = 0; k < K; ++k) {
        const double gamma = p.gamma_bar[static_cast<std::size_t>(k)];
        if (!(gamma > 0.0)) continue;
        const VecC h = p.h1[static_cast<std::size_t>(k)] *
                       (std::sqrt(p.power) / std::sqrt(p.sigma1_sq[static_cast<std::size_t>(k)]));
        SocConstraint cone;
        cone.A = MatR::Zero(2 * K + 1, 2 * n + extra);
        for (Index i = 0; i < K; ++i) complex_rows(h, i * L, n, cone.A, 2 * i);
        cone.A *= std::sqrt(gamma);
        cone.b = VecR::Zero(2 * K + 1);
        cone.b(2 * K) = std::sqrt(gamma);
        MatR rowk = MatR::Zero(2, 2 * n + extra);
        complex_rows(h, k * L, n, rowk, 0);
        cone.d = std::sqrt(1.0 + gamma) * rowk.row(0).transpose();
        cone.e = 0.0;
        cones.push_back(std::move(cone));
    }
    return cones;
}

}  // namespace

LinearSocp beamforming_socp(const BeamformingProblem& p)
{
    const Index n = p.users() * p.rows();
    LinearSocp socp;
    socp.c = -real_stack(p.c);
    const double cn = socp.c.norm();
    if (cn > 0.0) socp.c /= cn;
    socp.cones = sinr_cones(p, 0);
    SocConstraint ball;
    ball.A = MatR::Identity(2 * n, 2 * n);
    ball.b = VecR::Zero(2 * n);
    ball.d = VecR::Zero(2 * n);
    ball.e = 1.0;
    socp.cones.push_back(std::move(ball));
    return socp;
}

MatC phase_align(const MatC& F, const std::vector<VecC>& h1)
{
    MatC out = F;
    for (Index k = 0; k < F.cols(); ++k) {
        const cd g = (h1[static_cast<std::size_t>(k)].transpose() * F.col(k))(0);
        if (std::abs(g) > 0.0) out.col(k) *= std::conj(g) / std::abs(g);
    }
    return out;
}

MatC update_transmit_beamformer(const MatC& F_prev, const BeamformingProblem& p)
{
    const Index L = p.rows();
    const Index K = p.users();
    if (F_prev.rows() != L || F_prev.cols() != K) throw DimensionError("F_prev shape differs from the problem");
    if (!p.constrained()) {
        const double cn = p.c.norm();
        if (!(cn > 0.0)) return F_prev;
        return (p.c * (std::sqrt(p.power) / cn)).reshaped(L, K);
    }
    const LinearSocp socp = beamforming_socp(p);
    const VecR x0 = (1.0 - 1e-9) * embed_beamformer(phase_align(F_prev, p.h1), p.power);
    const SocpSolution sol = solve_linear_socp(socp, x0);
    return extract_beamformer(sol.x, L, K, p.power);
}

MatC minimum_power_beamformer(const std::vector<VecC>& h1, const std::vector<double>& gamma_bar,
                              const std::vector<double>& sigma1_sq, double power)
{
    BeamformingProblem p;
    p.h1 = h1;
    p.gamma_bar = gamma_bar;
    p.sigma1_sq = sigma1_sq;
    p.power = power;
    const Index L = p.rows();
    const Index K = p.users();
    const Index n = K * L;
    if (!p.constrained()) return MatC::Zero(L, K);

    for (Index k = 0; k < K; ++k)
        if (gamma_bar[static_cast<std::size_t>(k)] > 0.0 && h1[static_cast<std::size_t>(k)].norm() == 0.0)
            throw InfeasibleError("infeasible SINR targets: user " + std::to_string(k) + " has a zero channel");

    // Variables [x; tau]: minimize tau subject to ||x|| <= tau and the user cones.
    LinearSocp socp;
    socp.c = VecR::Zero(2 * n + 1);
    socp.c(2 * n) = 1.0;
    socp.cones = sinr_cones(p, 1);
    SocConstraint norm;
    norm.A = MatR::Zero(2 * n, 2 * n + 1);
    norm.A.leftCols(2 * n).setIdentity();
    norm.b = VecR::Zero(2 * n);
    norm.d = VecR::Zero(2 * n + 1);
    norm.d(2 * n) = 1.0;
    socp.cones.push_back(std::move(norm));

    SocpSolution sol;
    try {
        sol = solve_linear_socp(socp);
    } catch (const InfeasibleError&) {
        throw InfeasibleError("infeasible SINR targets: no beamformer meets every user's threshold");
    }
    const double tau = sol.x.head(2 * n).norm();
    if (tau > 1.0) {
        std::ostringstream msg;
        msg << "infeasible SINR targets: minimum power is " << 10.0 * std::log10(tau * tau * power) + 30.0
            << " dBm, budget " << 10.0 * std::log10(power) + 30.0 << " dBm";
        throw InfeasibleError(msg.str());
    }
    MatC F = extract_beamformer(sol.x.head(2 * n), L, K, power);
    return F * (std::sqrt(power) / F.norm());
}

// ---------------------------------------------------------------------------
// Auxiliary variables

double auxiliary_fmu(const RowC& t, Index k, double gamma, double sigma_sq, double mu)
{
    double interference = 0.0;
    for (Index i = 0; i < t.size(); ++i)
        if (i != k) interference += std::norm(t(i)) / ((1.0 + mu * gamma) * (1.0 + mu * gamma));
    return gamma * (interference + sigma_sq) - std::norm(t(k)) / ((1.0 - mu) * (1.0 - mu));
}

AuxiliaryState update_auxiliary(const std::vector<VecC>& h1, const MatC& F, const std::vector<double>& gamma_bar,
                                const std::vector<double>& sigma1_sq)
{
    const Index K = static_cast<Index>(h1.size());
    AuxiliaryState out;
    out.s = MatC::Zero(K, K);
    out.mu = VecR::Zero(K);
    out.infeasible.assign(static_cast<std::size_t>(K), false);
    for (Index k = 0; k < K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const RowC t = h1[kk].transpose() * F;
        const double gamma = gamma_bar[kk];
        const double sigma = sigma1_sq[kk];
        if (auxiliary_fmu(t, k, gamma, sigma, 0.0) <= 0.0) {
            out.s.row(k) = t;
            continue;
        }
        if (std::abs(t(k)) == 0.0) {
            out.infeasible[kk] = true;
            out.s.row(k) = t;
            continue;
        }
        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            if (auxiliary_fmu(t, k, gamma, sigma, mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        // Keep the side where the constraint holds.
        const double mu = hi < 1.0 ? hi : lo;
        out.mu(k) = mu;
        for (Index i = 0; i < K; ++i) out.s(k, i) = i == k ? t(i) / (1.0 - mu) : t(i) / (1.0 + mu * gamma);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Reflection and selection

VecC phase_alignment_solution(const VecC& q5, const VecC& phi_prev)
{
    VecC out(q5.size());
    for (Index i = 0; i < q5.size(); ++i)
        out(i) = q5(i) == cd(0.0, 0.0) ? phi_prev(i) : -std::polar(1.0, std::arg(q5(i)));
    return out;
}

VecC update_reflection(const PhiMajorizer& m) { return phase_alignment_solution(m.q5, m.phi_t); }

VecR smallest_entries_indicator(const VecR& cost, Index a_count)
{
    if (a_count < 0 || a_count > cost.size()) throw DimensionError("selection count out of range");
    std::vector<Index> idx(static_cast<std::size_t>(cost.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index x, Index y) { return cost(x) < cost(y); });
    VecR a = VecR::Zero(cost.size());
    for (Index j = 0; j < a_count; ++j) a(idx[static_cast<std::size_t>(j)]) = 1.0;
    return a;
}

VecR update_mode_selection(const SelectionMajorizer& m, Index a_count)
{
    return smallest_entries_indicator(m.q10.real(), a_count);
}

MatR update_selection_columns(const ColumnMajorizer& m)
{
    const MatR cost = m.cost_matrix();
    const std::vector<Index> rows = solve_assignment(cost);
    MatR A_a = MatR::Zero(cost.rows(), cost.cols());
    for (std::size_t j = 0; j < rows.size(); ++j) A_a(rows[j], static_cast<Index>(j)) = 1.0;
    return A_a;
}

// ---------------------------------------------------------------------------
// Driver

ChannelSet effective_channels(const OptimizerSettings& settings, const ChannelSet& channels)
{
    ChannelSet ch = channels;
    if (!settings.reflection_enabled) ch.H_br.setZero();
    return ch;
}

namespace {

std::vector<double> active_targets(const OptimizerSettings& s)
{
    if (s.enforce_sinr) return s.gamma_bar;
    return std::vector<double>(s.gamma_bar.size(), 0.0);
}

void check_settings(const OptimizerSettings& s, const ChannelSet& ch)
{
    const auto K = static_cast<std::size_t>(ch.K());
    if (s.sigma1_sq.size() != K || s.gamma_bar.size() != K)
        throw DimensionError("settings carry per-user values for a different user count");
    if (s.connected < 0 || s.connected > ch.N()) throw DimensionError("connected count out of range");
    if (!(s.power_w > 0.0)) throw std::invalid_argument("transmit power must be positive");
}

}  // namespace

InitialPoint initialize(const OptimizerSettings& settings, const ChannelSet& ch)
{
    check_settings(settings, ch);
    const Index N = ch.N();
    RandomStream rng(derive_seed(settings.seed, static_cast<std::uint64_t>(Link::reflection_init)));
    VecC phi(N);
    for (Index n = 0; n < N; ++n) phi(n) = rng.unit_phase();

    InitialPoint init;
    init.state = first_elements_state(phi, settings.connected);
    const Composites comp = assemble_composites(ch, init.state);
    const std::vector<double> targets = active_targets(settings);
    const Index L = ch.M() + settings.connected;
    const Index K = ch.K();

    MatC F = minimum_power_beamformer(comp.h1, targets, settings.sigma1_sq, settings.power_w);
    if (!(F.norm() > 0.0)) {
        // Unconstrained start: matched filters toward the users, then unit columns.
        F.resize(L, K);
        for (Index k = 0; k < K; ++k) F.col(k) = comp.h1[static_cast<std::size_t>(k)].conjugate();
        if (!(F.norm() > 0.0)) {
            F.setZero();
            for (Index k = 0; k < K; ++k) F(k % L, k) = 1.0;
        }
        F *= std::sqrt(settings.power_w) / F.norm();
    }
    init.beamformer.F = F;
    init.beamformer.w = VecC::Zero(ch.M());
    init.aux = update_auxiliary(comp.h1, F, targets, settings.sigma1_sq);
    return init;
}

JointSolution run_joint_optimization(const SystemConfig& config, const ChannelSet& channels)
{
    return run_joint_optimization(settings_from_config(config), channels);
}

JointSolution run_joint_optimization(const OptimizerSettings& settings, const ChannelSet& raw)
{
    const ChannelSet ch = effective_channels(settings, raw);
    const InitialPoint init = initialize(settings, ch);
    const std::vector<double> targets = active_targets(settings);
    const Index N = ch.N();
    const Index a = settings.connected;
    const bool phase_block = settings.optimize_phase && settings.reflection_enabled && a < N;
    const bool select_block = settings.optimize_selection && a > 0 && a < N;

    JointSolution sol;
    sol.beamformer = init.beamformer;
    sol.state = init.state;
    sol.aux = init.aux;
    sol.penalty = PenaltySchedule{settings.penalty.rho1_init, settings.penalty.rho2_init, settings.penalty.c1,
                                  settings.penalty.c2, settings.penalty.rho_floor};
    JointSolution last_good = sol;

    auto inputs = [&](const JointSolution& s) {
        return ObjectiveInputs{ch,
                               s.state,
                               s.beamformer.w,
                               s.beamformer.F,
                               s.aux.s,
                               s.penalty.rho1,
                               s.penalty.rho2,
                               settings.sigma_alpha_sq,
                               settings.sigma2_sq};
    };

    double prev_snr = std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < settings.stopping.max_iters; ++it) {
        Composites comp = assemble_composites(ch, sol.state);
        sol.beamformer.w = update_receive_filter(comp.H2, sol.beamformer.F);
        const BeamformingProblem bp = build_beamforming_problem(sol.beamformer.w, comp.H2, sol.beamformer.F,
                                                                comp.h1, targets, settings.sigma1_sq,
                                                                settings.power_w);
        try {
            sol.beamformer.F = update_transmit_beamformer(sol.beamformer.F, bp);
        } catch (const InfeasibleError& e) {
            throw OptimizationAborted(it, last_good,
                                      "SINR targets unattainable at iteration " + std::to_string(it) + ": " + e.what());
        }

        sol.radar_snr = radar_snr<double>(sol.beamformer.w, comp.H2, sol.beamformer.F, settings.sigma_alpha_sq,
                                          settings.sigma2_sq);
        sol.sinr = user_sinr<double>(comp.h1, sol.beamformer.F, settings.sigma1_sq);
        const PenaltyResiduals res =
            penalty_residuals<double>(sol.state.a_vec, sol.state.A_a, sol.aux.s, comp.h1, sol.beamformer.F);
        sol.comm_residual = res.comm;
        sol.selection_residual = res.selection;
        sol.iterations = it + 1;

        TraceRow row;
        row.iter = it;
        row.radar_snr_db = linear_to_db(sol.radar_snr);
        row.penalized_obj = penalized_objective_direct(inputs(sol));
        row.comm_residual = res.comm;
        row.selection_residual = res.selection;
        row.min_sinr_db = sol.sinr.size() ? linear_to_db(sol.sinr.minCoeff()) : 0.0;
        row.rho1 = sol.penalty.rho1;
        row.rho2 = sol.penalty.rho2;
        sol.trace.push_back(row);
        last_good = sol;

        const double rel = std::abs(sol.radar_snr - prev_snr) / std::abs(prev_snr);
        prev_snr = sol.radar_snr;
        if (it > 0 && rel < settings.stopping.rel_tol && res.comm < settings.stopping.residual_tol &&
            res.selection < settings.stopping.residual_tol) {
            sol.converged = true;
            break;
        }
        if (it + 1 == settings.stopping.max_iters) break;

        auto audit = [&](const char* block, double before) {
            sol.descent.push_back({it, block, before, penalized_objective_direct(inputs(sol))});
        };
        const double scale = echo_scale(inputs(sol));

        if (phase_block) {
            const ObjectiveInputs in = inputs(sol);
            const double before = penalized_objective_direct(in);
            const PhiMajorizer m = build_phi_majorizer(echo_affine_phi(in), penalty_affine_phi(in), scale,
                                                       sol.penalty.rho1, sol.state.phi);
            sol.state.phi = update_reflection(m);
            audit("phi", before);
        }
        {
            const double before = penalized_objective_direct(inputs(sol));
            comp = assemble_composites(ch, sol.state);
            sol.aux = update_auxiliary(comp.h1, sol.beamformer.F, targets, settings.sigma1_sq);
            audit("s", before);
        }
        if (select_block) {
            {
                const ObjectiveInputs in = inputs(sol);
                const double before = penalized_objective_direct(in);
                const SelectionMajorizer m =
                    build_selection_majorizer(echo_affine_selection(in), penalty_affine_selection(in), scale,
                                              sol.penalty.rho1, sol.penalty.rho2, sol.state.A_a, sol.state.a_vec);
                sol.state.a_vec = update_mode_selection(m, a);
                audit("a", before);
            }
            {
                const ObjectiveInputs in = inputs(sol);
                const double before = penalized_objective_direct(in);
                const ColumnMajorizer m =
                    build_column_majorizer(echo_affine_columns(in), penalty_affine_columns(in), scale,
                                           sol.penalty.rho1, sol.penalty.rho2, sol.state.a_vec, sol.state.A_a);
                sol.state.A_a = update_selection_columns(m);
                audit("aa", before);
            }
        }
        sol.penalty.decay();
    }
    return sol;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace)
{
    out << "iter,radar_snr_db,penalized_obj,comm_residual,selection_residual,min_sinr_db,rho1,rho2\n";
    char buf[512];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.radar_snr_db,
                      r.penalized_obj, r.comm_residual, r.selection_residual, r.min_sinr_db, r.rho1, r.rho2);
        out << buf;
    }
}

}  // namespace rdars
