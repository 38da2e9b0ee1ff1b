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
#include "rdars/channel.hpp"
#include "rdars/metrics.hpp"
#include "rdars/steering.hpp"

using namespace rdars;

TEST_CASE("sinr hand values")
{
    {
        std::vector<VecC> h{(VecC(2) << 1.0, 0.0).finished()};
        MatC F(2, 1);
        F << 2.0, 0.0;
        CHECK(user_sinr<double>(h, F, {1.0})(0) == doctest::Approx(4.0));
    }
    {
        std::vector<VecC> h{(VecC(2) << 1.0, 1.0).finished(), (VecC(2) << 1.0, 1.0).finished()};
        const MatC F = MatC::Identity(2, 2);
        CHECK(user_sinr<double>(h, F, {1.0, 1.0})(0) == doctest::Approx(0.5));
    }
    {
        std::vector<VecC> h{VecC::Zero(2)};
        CHECK_THROWS_AS(user_sinr<double>(h, MatC::Zero(2, 1), {0.0}), NumericalError);
    }
}

TEST_CASE("sinr matches summation and ignores column phases")
{
    oracle::Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        std::vector<VecC> h{rng.cvec(5), rng.cvec(5), rng.cvec(5)};
        MatC F = rng.cmat(5, 3);
        const std::vector<double> s{0.3, 1.0, 2.0};
        const VecR got = user_sinr<double>(h, F, s);
        for (Index k = 0; k < 3; ++k) CHECK(std::abs(got(k) - oracle::sinr(h, F, s, k)) <= 1e-12 * got(k));
        F.col(1) *= std::polar(1.0, 1.234);
        const VecR rot = user_sinr<double>(h, F, s);
        CHECK((rot - got).norm() <= 1e-12 * got.norm());
    }
}

TEST_CASE("radar snr")
{
    const MatC I = MatC::Identity(2, 2);
    VecC w = VecC::Zero(2);
    w(0) = 1.0;
    CHECK(radar_snr<double>(w, I, I, 1.0, 1.0) == doctest::Approx(1.0));

    oracle::Rng rng(2);
    for (int t = 0; t < 10; ++t) {
        const ChannelSet ch = oracle::random_channels(rng, 3, 5, 2);
        const RdarsState st = oracle::random_state(rng, 5, 2);
        const Composites c = assemble_composites(ch, st);
        const VecC wr = rng.cvec(3);
        const MatC F = rng.cmat(5, 2);
        const double g = radar_snr<double>(wr, c.H2, F, 2.0, 0.5);
        CHECK(radar_snr<double>(VecC(5.0 * wr), c.H2, F, 2.0, 0.5) == doctest::Approx(g).epsilon(1e-12));
        const double fact =
            2.0 / 0.5 * (c.v.transpose() * F).squaredNorm() * std::norm(wr.dot(c.h4)) / wr.squaredNorm();
        CHECK(std::abs(g - fact) <= 1e-10 * g);
        CHECK(std::abs(g - oracle::radar_snr(ch, st, wr, F, 2.0, 0.5)) <= 1e-10 * g);
    }
    CHECK_THROWS_AS(radar_snr<double>(VecC::Zero(2), I, I, 1.0, 1.0), NumericalError);
}

TEST_CASE("bs beampattern peaks at the matched angle")
{
    const Index M = 8;
    const double th0 = 0.4;
    MatC F = MatC::Zero(M, 1);
    F.col(0) = ula_steering(th0, M).conjugate() / std::sqrt(double(M));
    VecR grid = VecR::LinSpaced(2001, -kPi / 2, kPi / 2);
    grid(1000) = th0;
    const VecR g = beampattern_bs<double>(F, M, grid);
    Index best = 0;
    g.maxCoeff(&best);
    CHECK(best == 1000);
    CHECK(g(best) == doctest::Approx(10 * std::log10(double(M))).epsilon(1e-12));

    const VecR zero = beampattern_bs<double>(MatC::Zero(M, 2), M, grid);
    CHECK(zero.maxCoeff() == kGainFloorDb);
    CHECK_THROWS(beampattern_bs<double>(F, M, VecR()));
}

TEST_CASE("rdars beampattern grid maximum agrees with a dense grid")
{
    oracle::Rng rng(31);
    const ChannelSet ch = oracle::random_channels(rng, 3, 12, 2);
    const RdarsState st = oracle::random_state(rng, 12, 2);
    const MatC F = rng.cmat(5, 2);
    const VecR th = VecR::LinSpaced(61, -kPi / 2, kPi / 2);
    const VecR ps = VecR::LinSpaced(31, -kPi / 2, kPi / 2);
    const MatR coarse = beampattern_rdars<double>(F, ch.H_br, st.phi, st.a_vec, st.A_a, 4, 3, th, ps);
    const VecR thf = VecR::LinSpaced(601, -kPi / 2, kPi / 2);
    const VecR psf = VecR::LinSpaced(301, -kPi / 2, kPi / 2);
    const MatR fine = beampattern_rdars<double>(F, ch.H_br, st.phi, st.a_vec, st.A_a, 4, 3, thf, psf);
    Index i = 0, j = 0;
    fine.maxCoeff(&i, &j);
    // The fine optimum lies within one coarse step of the coarse optimum's angles.
    Index ci = 0, cj = 0;
    coarse.maxCoeff(&ci, &cj);
    const double step_t = th(1) - th(0), step_p = ps(1) - ps(0);
    const bool near = std::abs(thf(i) - th(ci)) <= step_t + 1e-12 && std::abs(psf(j) - ps(cj)) <= step_p + 1e-12;
    // Ties between distant lobes are allowed if the values agree.
    CHECK((near || std::abs(fine(i, j) - coarse(ci, cj)) < 0.5));
    CHECK(fine.maxCoeff() >= coarse.maxCoeff() - 1e-9);

    // Field at one angle versus a direct evaluation.
    VecC field(12);
    double direct = 0.0;
    const VecC u = upa_steering(th(ci), ps(cj), 4, 3);
    for (Index k = 0; k < 2; ++k) {
        for (Index n = 0; n < 12; ++n) {
            cd acc = 0.0;
            for (Index m = 0; m < 3; ++m) acc += (1.0 - st.a_vec(n)) * st.phi(n) * ch.H_br(n, m) * F(m, k);
            for (Index c = 0; c < 2; ++c) acc += st.A_a(n, c) * F(3 + c, k);
            field(n) = acc;
        }
        direct += std::norm(cd(u.transpose() * field));
    }
    CHECK(coarse(ci, cj) == doctest::Approx(10 * std::log10(direct)).epsilon(1e-10));
}

TEST_CASE("penalty residuals")
{
    oracle::Rng rng(5);
    const ChannelSet ch = oracle::random_channels(rng, 2, 4, 2);
    const RdarsState st = oracle::random_state(rng, 4, 1);
    const Composites c = assemble_composites(ch, st);
    const MatC F = rng.cmat(3, 2);
    MatC s(2, 2);
    for (Index k = 0; k < 2; ++k) s.row(k) = c.h1[static_cast<std::size_t>(k)].transpose() * F;
    const PenaltyResiduals r = penalty_residuals<double>(st.a_vec, st.A_a, s, c.h1, F);
    CHECK(r.comm < 1e-24);
    CHECK(r.selection == 0.0);

    VecR a(2);
    a << 1.0, 0.0;
    MatR A_a(2, 1);
    A_a << 0.0, 1.0;
    std::vector<VecC> h{VecC::Zero(1)};
    CHECK(penalty_residuals<double>(a, A_a, MatC::Zero(1, 1), h, MatC::Zero(1, 1)).selection == 2.0);
}
