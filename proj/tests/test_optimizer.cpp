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

#include <sstream>

#include "oracles.hpp"
#include "rdars/metrics.hpp"
#include "rdars/optimizer.hpp"
#include "rdars/schemes.hpp"

using namespace rdars;

namespace {

double angle_between(const VecC& a, const VecC& b)
{
    const double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
    return std::acos(std::min(1.0, c));
}

OptimizerSettings toy_settings(Index K, double gamma, Index connected)
{
    OptimizerSettings s;
    s.power_w = 1.0;
    s.sigma1_sq.assign(static_cast<std::size_t>(K), 0.1);
    s.gamma_bar.assign(static_cast<std::size_t>(K), gamma);
    s.sigma2_sq = 1.0;
    s.connected = connected;
    s.stopping.max_iters = 30;
    return s;
}

}  // namespace

TEST_CASE("receive filter")
{
    SUBCASE("rank-one toy")
    {
        MatC H2 = MatC::Zero(3, 3);
        H2(0, 0) = 1.0;
        MatC F = MatC::Identity(3, 2);
        const VecC w = update_receive_filter(H2, F);
        CHECK(std::abs(std::abs(w(0)) - 1.0) < 1e-12);
        CHECK(w(0).imag() == 0.0);
    }
    SUBCASE("aligns with h4, ignores scale and beats random filters")
    {
        oracle::Rng rng(1);
        for (int t = 0; t < 10; ++t) {
            const ChannelSet ch = oracle::random_channels(rng, 4, 5, 2);
            const RdarsState st = oracle::random_state(rng, 5, 2);
            const Composites c = assemble_composites(ch, st);
            const MatC F = rng.cmat(6, 2);
            const VecC w = update_receive_filter(c.H2, F);
            CHECK(w.norm() == doctest::Approx(1.0));
            const VecC g = oracle::h4(ch, st);
            CHECK(std::abs(w.dot(g)) / g.norm() >= 1.0 - 1e-10);
            CHECK(angle_between(w, g) <= 1e-5);
            CHECK((update_receive_filter(c.H2, MatC(2.0 * F)) - w).norm() <= 1e-10);
            const double best = radar_snr<double>(w, c.H2, F, 1.0, 1.0);
            for (int j = 0; j < 1000; ++j) CHECK(radar_snr<double>(rng.cvec(4), c.H2, F, 1.0, 1.0) <= best * (1 + 1e-12));
        }
    }
    SUBCASE("zero echo")
    {
        CHECK_THROWS_AS(update_receive_filter(MatC::Zero(2, 3), MatC::Ones(3, 1)), NumericalError);
    }
}

TEST_CASE("transmit beamformer without constraints is the normalized objective")
{
    oracle::Rng rng(2);
    BeamformingProblem p;
    p.h1 = {rng.cvec(3), rng.cvec(3)};
    p.gamma_bar = {0.0, 0.0};
    p.sigma1_sq = {1.0, 1.0};
    p.power = 0.1;
    p.c = rng.cvec(6);
    const MatC F = update_transmit_beamformer(MatC::Ones(3, 2), p);
    const VecC f = F.reshaped();
    CHECK((f - std::sqrt(0.1) * p.c / p.c.norm()).norm() <= 1e-14);
}

TEST_CASE("transmit beamformer with constraints")
{
    oracle::Rng rng(3);
    SUBCASE("zero channel is infeasible")
    {
        CHECK_THROWS_AS(minimum_power_beamformer({VecC::Zero(2)}, {1.0}, {1.0}, 1.0), InfeasibleError);
        BeamformingProblem p;
        p.h1 = {VecC::Zero(2)};
        p.gamma_bar = {1.0};
        p.sigma1_sq = {1.0};
        p.power = 1.0;
        p.c = VecC::Ones(2);
        CHECK_THROWS_AS(update_transmit_beamformer(MatC::Ones(2, 1), p), InfeasibleError);
    }
    SUBCASE("single user toy satisfies the KKT conditions")
    {
        BeamformingProblem p;
        p.h1 = {rng.cvec(2)};
        p.gamma_bar = {4.0};
        p.sigma1_sq = {0.5};
        p.power = 1.0;
        p.c = rng.cvec(2);
        const LinearSocp socp = beamforming_socp(p);
        const SocpSolution s = solve_linear_socp(socp);
        CHECK(kkt_residual(socp, s) <= 1e-6);
    }
    SUBCASE("power bound, SINR targets and conditional ascent")
    {
        for (int t = 0; t < 10; ++t) {
            const ChannelSet ch = oracle::random_channels(rng, 4, 6, 2);
            const RdarsState st = oracle::random_state(rng, 6, 2);
            const Composites c = assemble_composites(ch, st);
            const std::vector<double> gamma{10.0, 10.0}, sigma{1e-3, 1e-3};
            const MatC F0 = minimum_power_beamformer(c.h1, gamma, sigma, 0.1);
            CHECK(F0.squaredNorm() == doctest::Approx(0.1).epsilon(1e-12));
            const VecC w = update_receive_filter(c.H2, F0);
            const BeamformingProblem p = build_beamforming_problem(w, c.H2, F0, c.h1, gamma, sigma, 0.1);
            const MatC F = update_transmit_beamformer(F0, p);
            CHECK(F.squaredNorm() <= 0.1 + 1e-9);
            const VecR sinr = user_sinr<double>(c.h1, F, sigma);
            for (Index k = 0; k < 2; ++k) CHECK(linear_to_db(sinr(k)) >= 10.0 - 1e-6);
            CHECK(radar_snr<double>(w, c.H2, F, 1.0, 1.0) >= radar_snr<double>(w, c.H2, F0, 1.0, 1.0) - 1e-6);
        }
    }
}

TEST_CASE("embedding round trip and phase alignment")
{
    oracle::Rng rng(4);
    const MatC F = rng.cmat(3, 2);
    CHECK((extract_beamformer(embed_beamformer(F, 0.3), 3, 2, 0.3) - F).norm() <= 1e-14);
    const std::vector<VecC> h{rng.cvec(3), rng.cvec(3)};
    const MatC A = phase_align(F, h);
    for (Index k = 0; k < 2; ++k) {
        const cd g = (h[static_cast<std::size_t>(k)].transpose() * A.col(k))(0);
        CHECK(std::abs(g.imag()) <= 1e-12 * std::abs(g));
        CHECK(g.real() > 0.0);
    }
}

TEST_CASE("auxiliary update")
{
    SUBCASE("boundary case is slack")
    {
        const AuxiliaryState a = update_auxiliary({VecC::Ones(1)}, MatC::Constant(1, 1, 2.0), {4.0}, {1.0});
        CHECK(a.mu(0) == 0.0);
        CHECK(a.s(0, 0) == cd(2.0, 0.0));
    }
    SUBCASE("single user closed form")
    {
        const AuxiliaryState a = update_auxiliary({VecC::Ones(1)}, MatC::Constant(1, 1, 1.0), {4.0}, {1.0});
        CHECK(a.mu(0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(a.s(0, 0) - cd(2.0, 0.0)) <= 1e-9);
    }
    SUBCASE("zero signal is reported")
    {
        MatC F = MatC::Zero(2, 2);
        F(0, 1) = 1.0;
        std::vector<VecC> h{(VecC(2) << 1.0, 0.0).finished(), (VecC(2) << 0.0, 1.0).finished()};
        const AuxiliaryState a = update_auxiliary(h, F, {1.0, 0.0}, {1.0, 1.0});
        CHECK(a.infeasible[0]);
        CHECK_FALSE(a.infeasible[1]);
    }
    SUBCASE("random users against a grid and the KKT conditions")
    {
        oracle::Rng rng(5);
        for (int t = 0; t < 20; ++t) {
            const Index K = 3;
            std::vector<VecC> h{rng.cvec(4), rng.cvec(4), rng.cvec(4)};
            const MatC F = 0.3 * rng.cmat(4, 3);
            const std::vector<double> gamma{5.0, 20.0, 0.5}, sigma{0.2, 0.1, 0.3};
            const AuxiliaryState a = update_auxiliary(h, F, gamma, sigma);
            for (Index k = 0; k < K; ++k) {
                const auto kk = static_cast<std::size_t>(k);
                const RowC t_row = h[kk].transpose() * F;
                // Sign change on a uniform grid over [0, 1).
                double grid_mu = 0.0;
                const int n = 10000;
                for (int i = 0; i < n; ++i) {
                    const double mu = double(i) / n;
                    if (auxiliary_fmu(t_row, k, gamma[kk], sigma[kk], mu) <= 0.0) {
                        grid_mu = mu;
                        break;
                    }
                }
                CHECK(std::abs(a.mu(k) - grid_mu) <= 1e-3);
                double interf = 0.0;
                for (Index i = 0; i < K; ++i)
                    if (i != k) interf += std::norm(a.s(k, i));
                const double g = gamma[kk] * (interf + sigma[kk]) - std::norm(a.s(k, k));
                CHECK(g <= 1e-9);
                CHECK(std::abs(a.mu(k) * g) <= 1e-6);
                double prev = std::numeric_limits<double>::infinity();
                for (int i = 0; i < 100; ++i) {
                    const double v = auxiliary_fmu(t_row, k, gamma[kk], sigma[kk], i / 100.0);
                    CHECK(v <= prev);
                    prev = v;
                }
            }
        }
    }
}

TEST_CASE("phase alignment")
{
    VecC q(2);
    q << cd(2.0, 0.0), cd(0.0, -1.0);
    const VecC phi = phase_alignment_solution(q, VecC::Ones(2));
    CHECK(std::abs(phi(0) - cd(-1.0, 0.0)) <= 1e-15);
    CHECK(std::abs(phi(1) - cd(0.0, 1.0)) <= 1e-15);
    CHECK(q.dot(phi).real() == doctest::Approx(-3.0));

    const VecC pos = phase_alignment_solution(VecC::Constant(3, 0.7), VecC::Ones(3));
    for (Index i = 0; i < 3; ++i) CHECK(std::abs(pos(i) - cd(-1.0, 0.0)) <= 1e-15);

    VecC z = VecC::Zero(2);
    const VecC prev = (VecC(2) << cd(0, 1), cd(1, 0)).finished();
    CHECK(phase_alignment_solution(z, prev) == prev);
}

TEST_CASE("reflection update against a phase grid")
{
    oracle::Rng rng(6);
    for (int t = 0; t < 10; ++t) {
        const ChannelSet ch = oracle::random_channels(rng, 2, 2, 1);
        RdarsState st = oracle::random_state(rng, 2, 0);
        const VecC w = rng.cvec(2);
        const MatC F = rng.cmat(2, 1);
        const MatC s = rng.cmat(1, 1);
        const ObjectiveInputs in{ch, st, w, F, s, 2.0, 1.0, 1.0, 1.0};
        const PhiMajorizer m = build_phi_majorizer(echo_affine_phi(in), penalty_affine_phi(in), echo_scale(in), 2.0,
                                                   st.phi);
        const VecC phi = update_reflection(m);
        const double got = m.q5.dot(phi).real();
        double best = std::numeric_limits<double>::infinity();
        const double step = 2 * kPi / 64;
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                VecC p(2);
                p << std::polar(1.0, i * step), std::polar(1.0, j * step);
                best = std::min(best, m.q5.dot(p).real());
            }
        CHECK(got <= best + 1e-12);
        CHECK(got >= best - m.q5.cwiseAbs().sum() * (1 - std::cos(step / 2)) - 1e-12);
        const double before = oracle::objective(ch, st, w, F, s, 2.0, 1.0, 1.0, 1.0);
        st.phi = phi;
        CHECK(oracle::objective(ch, st, w, F, s, 2.0, 1.0, 1.0, 1.0) <= before + 1e-9 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("mode selection")
{
    VecR c(4);
    c << 0.5, -1.2, 0.3, 2.0;
    CHECK(smallest_entries_indicator(c, 2) == (VecR(4) << 0, 1, 1, 0).finished());
    CHECK(smallest_entries_indicator(c, 4) == VecR::Ones(4));

    oracle::Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        const VecR cost = VecR::NullaryExpr(6, [&] { return rng.normal(); });
        const VecR a = smallest_entries_indicator(cost, 2);
        double best = std::numeric_limits<double>::infinity();
        int feasible = 0;
        oracle::for_each_subset(6, 2, [&](const VecR& v) {
            best = std::min(best, cost.dot(v));
            ++feasible;
        });
        CHECK(feasible == 15);
        CHECK(cost.dot(a) == doctest::Approx(best).epsilon(1e-14));
    }
}

TEST_CASE("column update follows a dominant selection penalty")
{
    oracle::Rng rng(8);
    const ChannelSet ch = oracle::random_channels(rng, 2, 3, 1);
    RdarsState st = oracle::random_state(rng, 3, 1);
    st.a_vec = (VecR(3) << 0, 1, 0).finished();
    st.A_a = MatR::Zero(3, 1);
    st.A_a(0, 0) = 1.0;
    const VecC w = rng.cvec(2);
    const MatC F = 1e-3 * rng.cmat(3, 1);
    const MatC s = MatC::Zero(1, 1);
    const double rho2 = 1e-6;
    const ObjectiveInputs in{ch, st, w, F, s, 1.0, rho2, 1.0, 1.0};
    const ColumnMajorizer m = build_column_majorizer(echo_affine_columns(in), penalty_affine_columns(in),
                                                     echo_scale(in), 1.0, rho2, st.a_vec, st.A_a);
    const MatR A_a = update_selection_columns(m);
    CHECK(A_a(1, 0) == 1.0);
    CHECK(A_a.sum() == 1.0);
}

TEST_CASE("initialization")
{
    oracle::Rng rng(9);
    const ChannelSet ch = oracle::random_channels(rng, 3, 4, 2);
    SUBCASE("no constraint gives a full-power start")
    {
        OptimizerSettings s = toy_settings(2, 0.0, 1);
        const InitialPoint p = initialize(s, ch);
        CHECK(p.beamformer.F.squaredNorm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.state.a_vec(0) == 1.0);
        CHECK(p.state.a_vec.sum() == 1.0);
        for (Index i = 0; i < 4; ++i) CHECK(std::abs(std::abs(p.state.phi(i)) - 1.0) < 1e-15);
    }
    SUBCASE("zero user channels are infeasible")
    {
        ChannelSet z = ch;
        for (auto& h : z.h_bu) h.setZero();
        for (auto& h : z.h_ru) h.setZero();
        CHECK_THROWS_AS(initialize(toy_settings(2, 1.0, 1), z), InfeasibleError);
    }
    SUBCASE("desk preset meets the targets")
    {
        SystemConfig c = desk_preset();
        c.seed = 4;
        const ChannelSet dch = synthesize_channels(c, derive_geometry(c), c.seed);
        const OptimizerSettings s = settings_from_config(c);
        const InitialPoint p = initialize(s, dch);
        const Composites comp = assemble_composites(dch, p.state);
        const VecR sinr = user_sinr<double>(comp.h1, p.beamformer.F, s.sigma1_sq);
        for (Index k = 0; k < 2; ++k) CHECK(linear_to_db(sinr(k)) >= 10.0 - 1e-6);
        CHECK(p.beamformer.F.squaredNorm() == doctest::Approx(0.1).epsilon(1e-12));
    }
    SUBCASE("targets beyond the budget")
    {
        OptimizerSettings s = toy_settings(2, 1e12, 1);
        CHECK_THROWS_AS(initialize(s, ch), InfeasibleError);
    }
}

TEST_CASE("penalty schedule")
{
    PenaltySchedule p{1.0, 10.0, 0.5, 0.1, 0.2};
    p.decay();
    CHECK(p.rho1 == 0.5);
    CHECK(p.rho2 == 1.0);
    p.decay();
    p.decay();
    CHECK(p.rho1 == 0.2);
    CHECK(p.rho2 == 0.2);
}

TEST_CASE("all-connected surface matches the distributed antenna scheme")
{
    SystemConfig c = desk_preset();
    c.N = 4;
    c.N1 = 2;
    c.N2 = 2;
    c.a = 4;
    c.seed = 3;
    const ChannelSet ch = synthesize_channels(c, derive_geometry(c), c.seed);
    const JointSolution full = run_joint_optimization(apply_scheme(scheme_spec(Scheme::rdars_isac), c), ch);
    const JointSolution das = run_joint_optimization(apply_scheme(scheme_spec(Scheme::das_isac), c), ch);
    CHECK(std::abs(full.radar_snr - das.radar_snr) <= 1e-9 * das.radar_snr);
}

TEST_CASE("desk run audit")
{
    SystemConfig c = desk_preset();
    c.seed = 17;
    const ChannelSet ch = synthesize_channels(c, derive_geometry(c), c.seed);
    const JointSolution sol = run_joint_optimization(c, ch);
    CHECK(sol.iterations <= 200);
    CHECK(sol.trace.size() == static_cast<std::size_t>(sol.iterations));
    for (Index i = 0; i < sol.state.phi.size(); ++i) CHECK(std::abs(sol.state.phi(i)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sol.state.a_vec.sum() == 2.0);
    CHECK((MatR(sol.state.a_vec.asDiagonal()) - sol.state.A_a * sol.state.A_a.transpose()).norm() == 0.0);
    CHECK(sol.beamformer.F.squaredNorm() <= 0.1 * (1 + 1e-8));
    for (Index k = 0; k < sol.sinr.size(); ++k) CHECK(linear_to_db(sol.sinr(k)) >= 10.0 - 1e-3);
    for (const auto& d : sol.descent) CHECK(d.after <= d.before + 1e-7 * (1 + std::abs(d.before)));

    const JointSolution again = run_joint_optimization(c, ch);
    std::ostringstream a, b;
    write_trace_csv(a, sol.trace);
    write_trace_csv(b, again.trace);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("iter,radar_snr_db,penalized_obj,comm_residual,selection_residual,min_sinr_db,rho1,rho2\n", 0) ==
          0);
}

TEST_CASE("full-scale configuration runs to completion")
{
    SystemConfig c = paper_preset();
    c.seed = 1;
    const ChannelSet ch = synthesize_channels(c, derive_geometry(c), c.seed);
    const JointSolution sol = run_joint_optimization(c, ch);
    CHECK(sol.iterations >= 1);
    CHECK(std::isfinite(sol.radar_snr));
    CHECK(sol.beamformer.F.squaredNorm() <= 0.1 * (1 + 1e-8));
}
