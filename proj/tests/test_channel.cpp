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

#include <Eigen/SVD>

#include "oracles.hpp"
#include "rdars/channel.hpp"
#include "rdars/steering.hpp"

using namespace rdars;

TEST_CASE("steering vectors")
{
    const VecC u = ula_steering(0.0, 4);
    for (Index i = 0; i < 4; ++i) CHECK(std::abs(u(i) - cd(1.0, 0.0)) < 1e-15);

    const VecC e = ula_steering(kPi / 2, 2, 0.5);
    CHECK(std::abs(e(0) - cd(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(e(1) - cd(-1.0, 0.0)) < 1e-12);

    const VecC p = upa_steering(0.0, 0.0, 3, 5);
    CHECK(p.size() == 15);
    for (Index i = 0; i < p.size(); ++i) CHECK(std::abs(p(i) - cd(1.0, 0.0)) < 1e-15);

    oracle::Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const double th = rng.uniform() * 2 * kPi - kPi;
        const double ps = rng.uniform() * kPi - kPi / 2;
        for (auto v : {ula_steering(th, 7), upa_steering(th, ps, 4, 3)})
            for (Index i = 0; i < v.size(); ++i) CHECK(std::abs(std::abs(v(i)) - 1.0) < 1e-12);
        // Element (n1, n2) carries the separable phase.
        const VecC q = upa_steering(th, ps, 4, 3, 0.5);
        const cd expect = std::polar(1.0, -kPi * (2 * std::sin(th) * std::cos(ps) + 1 * std::sin(ps)));
        CHECK(std::abs(q(2 + 4 * 1) - expect) < 1e-12);
    }
    CHECK_THROWS(ula_steering(std::nan(""), 3));
}

TEST_CASE("path loss")
{
    CHECK(path_loss_gain(1.0, 2.0) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(10 * std::log10(path_loss_gain(10.0, 2.0)) == doctest::Approx(-50.0).epsilon(1e-12));
    CHECK(10 * std::log10(path_loss_gain(15.0, 2.4)) == doctest::Approx(-58.2245).epsilon(1e-4));
    CHECK_THROWS(path_loss_gain(0.0, 2.0));
}

TEST_CASE("pure line of sight at kappa = 1")
{
    SystemConfig c = desk_preset();
    c.kappa = 1.0;
    const Geometry g = derive_geometry(c);
    const ChannelSet ch = synthesize_channels(c, g, 11);
    const MatC los = std::sqrt(ch.alpha_Hbr) * upa_steering(g.theta_br_a, g.psi_br_a, c.N1, c.N2) *
                     ula_steering(g.theta_br_d, c.M).transpose();
    CHECK((ch.H_br - los).norm() <= 1e-14 * los.norm());
    // A different seed only moves the users.
    const ChannelSet other = synthesize_channels(c, g, 12);
    CHECK((other.H_br - ch.H_br).norm() == 0.0);
    CHECK((other.h_bt - ch.h_bt).norm() == 0.0);
}

TEST_CASE("synthesis is deterministic per seed")
{
    const SystemConfig c = desk_preset();
    const Geometry g = derive_geometry(c);
    const ChannelSet a = synthesize_channels(c, g, 99);
    const ChannelSet b = synthesize_channels(c, g, 99);
    const ChannelSet d = synthesize_channels(c, g, 100);
    CHECK((a.H_br - b.H_br).norm() == 0.0);
    for (std::size_t k = 0; k < a.h_bu.size(); ++k) {
        CHECK((a.h_bu[k] - b.h_bu[k]).norm() == 0.0);
        CHECK((a.h_ru[k] - b.h_ru[k]).norm() == 0.0);
    }
    CHECK((a.H_br - d.H_br).norm() > 0.0);
    CHECK(a.H_br.rows() == 24);
    CHECK(a.H_br.cols() == 8);
    CHECK(a.K() == 2);
    for (const auto& p : a.user_positions) {
        CHECK((p - c.placement.user_center).norm() <= c.placement.user_radius + 1e-12);
        CHECK(p.z() == c.placement.user_center.z());
    }
}

TEST_CASE("rayleigh entries have unit variance at kappa = 0")
{
    SystemConfig c = desk_preset();
    c.kappa = 0.0;
    c.M = 100;
    c.N = 100;
    c.N1 = 10;
    c.N2 = 10;
    const ChannelSet ch = synthesize_channels(c, derive_geometry(c), 5);
    const MatC z = ch.H_br / std::sqrt(ch.alpha_Hbr);
    const cd mean = z.mean();
    const double var = (z.array() - mean).abs2().sum() / double(z.size() - 1);
    CHECK(std::abs(var - 1.0) <= 0.05);
}

TEST_CASE("composite channels match the term-by-term model")
{
    oracle::Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        const Index M = rng.integer(1, 4), N = rng.integer(2, 6), K = rng.integer(1, 3), a = rng.integer(0, 2);
        const ChannelSet ch = oracle::random_channels(rng, M, N, K);
        const RdarsState st = oracle::random_state(rng, N, a);
        const Composites c = assemble_composites(ch, st);
        for (Index k = 0; k < K; ++k) {
            const VecC ref = oracle::h1(ch, st, k);
            CHECK((c.h1[static_cast<std::size_t>(k)] - ref).norm() <= 1e-12 * std::max(1.0, ref.norm()));
        }
        const VecC h4 = oracle::h4(ch, st);
        CHECK((c.h4 - h4).norm() <= 1e-12 * h4.norm());
        // H2 f equals the round-trip echo for every canonical f.
        for (Index j = 0; j < M + a; ++j) {
            VecC f = VecC::Zero(M + a);
            f(j) = 1.0;
            for (Index m = 0; m < M; ++m) {
                VecC w = VecC::Zero(M);
                w(m) = 1.0;
                CHECK(std::abs(c.H2(m, j) - oracle::echo(ch, st, w, f)) <= 1e-12 * std::max(1.0, c.H2.norm()));
            }
        }
        Eigen::JacobiSVD<MatC> svd(c.H2);
        const VecR sv = svd.singularValues();
        if (sv.size() > 1) CHECK(sv(1) <= 1e-10 * sv(0));
    }
}

TEST_CASE("special reductions of the composites")
{
    oracle::Rng rng(4);
    const ChannelSet ch = oracle::random_channels(rng, 3, 4, 2);
    SUBCASE("all elements connected removes the reflection")
    {
        const RdarsState st = first_elements_state(rng.phases(4), 4);
        const Composites c = assemble_composites(ch, st);
        CHECK((c.h4 - ch.h_bt).norm() == 0.0);
    }
    SUBCASE("no connected elements")
    {
        const VecC phi = rng.phases(4);
        const RdarsState st = first_elements_state(phi, 0);
        const Composites c = assemble_composites(ch, st);
        CHECK(c.h1[0].size() == 3);
        const VecC ref = ch.h_bu[0] + ch.H_br.transpose() * phi.cwiseProduct(ch.h_ru[0]);
        CHECK((c.h1[0] - ref).norm() < 1e-12);
    }
    SUBCASE("dimension mismatch")
    {
        RdarsState st = first_elements_state(rng.phases(5), 1);
        CHECK_THROWS_AS(assemble_composites(ch, st), DimensionError);
    }
}

TEST_CASE("state helpers")
{
    const RdarsState st = make_state(VecC::Ones(5), (VecR(5) << 0, 1, 0, 1, 0).finished());
    CHECK(st.A_a.cols() == 2);
    CHECK(st.A_a(1, 0) == 1.0);
    CHECK(st.A_a(3, 1) == 1.0);
    CHECK(selection_consistent(st));
    RdarsState bad = st;
    bad.a_vec(0) = 1.0;
    CHECK_FALSE(selection_consistent(bad));
    CHECK(selection_from_columns(st.A_a, 5) == st.a_vec);
}

TEST_CASE("channel dump round trip")
{
    const SystemConfig c = desk_preset();
    const ChannelSet ch = synthesize_channels(c, derive_geometry(c), 7);
    std::stringstream ss;
    write_channels(ss, ch);
    const ChannelSet back = read_channels(ss);
    CHECK((back.H_br - ch.H_br).norm() == 0.0);
    CHECK((back.h_rt - ch.h_rt).norm() == 0.0);
    CHECK(back.K() == ch.K());
    CHECK((back.h_ru[1] - ch.h_ru[1]).norm() == 0.0);
    CHECK(back.alpha_Hbr == ch.alpha_Hbr);
}
