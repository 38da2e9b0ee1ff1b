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

#include "rdars/channel.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rdars/random.hpp"
#include "rdars/steering.hpp"

namespace rdars {

RdarsState make_state(const VecC& phi, const VecR& a_vec)
{
    if (phi.size() != a_vec.size()) throw DimensionError("phi and a_vec lengths differ");
    const Index N = phi.size();
    Index count = 0;
    for (Index n = 0; n < N; ++n) {
        if (a_vec(n) != 0.0 && a_vec(n) != 1.0) throw DimensionError("a_vec must be binary");
        count += a_vec(n) == 1.0;
    }
    RdarsState s{phi, a_vec, MatR::Zero(N, count)};
    Index col = 0;
    for (Index n = 0; n < N; ++n)
        if (a_vec(n) == 1.0) s.A_a(n, col++) = 1.0;
    return s;
}

RdarsState first_elements_state(const VecC& phi, Index a)
{
    if (a < 0 || a > phi.size()) throw DimensionError("connected count out of range");
    VecR a_vec = VecR::Zero(phi.size());
    a_vec.head(a).setOnes();
    return make_state(phi, a_vec);
}

VecR selection_from_columns(const MatR& A_a, Index N)
{
    if (A_a.rows() != N) throw DimensionError("A_a must have N rows");
    return (A_a * A_a.transpose()).diagonal();
}

bool selection_consistent(const RdarsState& state)
{
    const Index N = state.N();
    if (state.a_vec.size() != N || state.A_a.rows() != N) return false;
    for (Index j = 0; j < state.A_a.cols(); ++j) {
        Index ones = 0;
        for (Index n = 0; n < N; ++n) {
            const double v = state.A_a(n, j);
            if (v != 0.0 && v != 1.0) return false;
            ones += v == 1.0;
        }
        if (ones != 1) return false;
    }
    const MatR diff = MatR(state.a_vec.asDiagonal()) - state.A_a * state.A_a.transpose();
    return diff.cwiseAbs().maxCoeff() == 0.0 || N == 0;
}

Composites assemble_composites(const ChannelSet& ch, const RdarsState& st)
{
    const Index M = ch.M();
    const Index N = ch.N();
    const Index a = st.A_a.cols();
    if (st.phi.size() != N || st.a_vec.size() != N || st.A_a.rows() != N)
        throw DimensionError("RDARS state does not match the channel dimensions");

    // Diagonal of (I - A) Phi.
    const VecC d = (VecR::Ones(N) - st.a_vec).cast<cd>().cwiseProduct(st.phi);

    Composites out;
    out.H3 = (VecR::Ones(N) - st.a_vec).asDiagonal() * ch.H_br;
    out.h4 = ch.h_bt + ch.H_br.transpose() * d.cwiseProduct(ch.h_rt);
    out.v.resize(M + a);
    out.v.head(M) = out.h4;
    out.v.tail(a) = st.A_a.transpose() * ch.h_rt;
    out.H2 = out.h4 * out.v.transpose();

    out.h1.reserve(ch.h_bu.size());
    for (std::size_t k = 0; k < ch.h_bu.size(); ++k) {
        VecC h(M + a);
        h.head(M) = ch.h_bu[k] + ch.H_br.transpose() * d.cwiseProduct(ch.h_ru[k]);
        h.tail(a) = st.A_a.transpose() * ch.h_ru[k];
        out.h1.push_back(std::move(h));
    }
    return out;
}

namespace {

MatC nlos_matrix(RandomStream& rng, Index rows, Index cols)
{
    MatC out(rows, cols);
    for (Index c = 0; c < cols; ++c)
        for (Index r = 0; r < rows; ++r) out(r, c) = rng.complex_normal();
    return out;
}

}  // namespace

ChannelSet synthesize_channels(const SystemConfig& config, const Geometry& g, std::uint64_t seed)
{
    const Index M = config.M;
    const Index N1 = config.N1;
    const Index N2 = config.N2;
    const double r = config.spacing_ratio;
    const double los = std::sqrt(config.kappa);
    const double nlos = std::sqrt(1.0 - config.kappa);
    const auto& pl = config.pathloss;

    ChannelSet ch;

    ch.alpha_Hbr = path_loss_gain(g.dist_bs_rdars, pl.alpha_hbr, pl.P0_db, pl.d0_m);
    {
        RandomStream rng(derive_seed(seed, static_cast<std::uint64_t>(Link::bs_rdars)));
        const MatC H_los = upa_steering(g.theta_br_a, g.psi_br_a, N1, N2, r) *
                           ula_steering(g.theta_br_d, M, r).transpose();
        ch.H_br = std::sqrt(ch.alpha_Hbr) * (los * H_los + nlos * nlos_matrix(rng, N1 * N2, M));
    }

    ch.alpha_hbt = path_loss_gain(g.dist_bs_target, pl.alpha_hbt, pl.P0_db, pl.d0_m);
    ch.alpha_hrt = path_loss_gain(g.dist_rdars_target, pl.alpha_hrt, pl.P0_db, pl.d0_m);
    ch.h_bt = std::sqrt(ch.alpha_hbt) * ula_steering(g.theta_bt_d, M, r);
    ch.h_rt = std::sqrt(ch.alpha_hrt) * upa_steering(g.theta_rt_d, g.psi_rt_d, N1, N2, r);

    for (int k = 0; k < config.K; ++k) {
        const auto kk = static_cast<std::uint64_t>(k);
        RandomStream pos_rng(derive_seed(seed, static_cast<std::uint64_t>(Link::user_position), kk));
        const double radius = g.user_radius * std::sqrt(pos_rng.uniform());
        const double angle = 2.0 * kPi * pos_rng.uniform();
        const Vec3 p = g.user_center + Vec3(radius * std::cos(angle), radius * std::sin(angle), 0.0);
        ch.user_positions.push_back(p);

        const double a_bu = path_loss_gain((p - g.pos_bs).norm(), pl.alpha_hbu, pl.P0_db, pl.d0_m);
        const double a_ru = path_loss_gain((p - g.pos_rdars).norm(), pl.alpha_hru, pl.P0_db, pl.d0_m);
        ch.alpha_hbu.push_back(a_bu);
        ch.alpha_hru.push_back(a_ru);

        RandomStream bu_rng(derive_seed(seed, static_cast<std::uint64_t>(Link::bs_user), kk));
        RandomStream ru_rng(derive_seed(seed, static_cast<std::uint64_t>(Link::rdars_user), kk));
        const VecC bu_los = ula_steering(bs_azimuth(g.pos_bs, p), M, r);
        const VecC ru_los = upa_steering(rdars_azimuth(g.pos_rdars, p), rdars_elevation(g.pos_rdars, p), N1, N2, r);
        ch.h_bu.push_back(std::sqrt(a_bu) * (los * bu_los + nlos * VecC(nlos_matrix(bu_rng, M, 1))));
        ch.h_ru.push_back(std::sqrt(a_ru) * (los * ru_los + nlos * VecC(nlos_matrix(ru_rng, N1 * N2, 1))));
    }
    return ch;
}

// ---------------------------------------------------------------------------
// Text dump

namespace {

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix(std::ostream& out, const std::string& name, const MatC& m)
{
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j)
            out << (j ? " " : "") << fmt(m(i, j).real()) << ',' << fmt(m(i, j).imag());
        out << '\n';
    }
}

MatC read_matrix(std::istream& in, const std::string& expected)
{
    std::string name;
    Index rows = 0;
    Index cols = 0;
    if (!(in >> name >> rows >> cols) || name != expected)
        throw std::runtime_error("channel dump: expected block '" + expected + "'");
    MatC m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
            std::string tok;
            if (!(in >> tok)) throw std::runtime_error("channel dump: truncated block '" + expected + "'");
            const auto comma = tok.find(',');
            if (comma == std::string::npos) throw std::runtime_error("channel dump: malformed entry " + tok);
            m(i, j) = cd(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
        }
    return m;
}

double read_scalar(std::istream& in, const std::string& expected)
{
    std::string name;
    std::string value;
    if (!(in >> name >> value) || name != expected)
        throw std::runtime_error("channel dump: expected scalar '" + expected + "'");
    return std::stod(value);
}

}  // namespace

void write_channels(std::ostream& out, const ChannelSet& ch)
{
    out << "rdars-channels 1\n";
    out << "K " << ch.K() << '\n';
    out << "alpha_Hbr " << fmt(ch.alpha_Hbr) << '\n';
    out << "alpha_hbt " << fmt(ch.alpha_hbt) << '\n';
    out << "alpha_hrt " << fmt(ch.alpha_hrt) << '\n';
    write_matrix(out, "H_br", ch.H_br);
    write_matrix(out, "h_bt", ch.h_bt);
    write_matrix(out, "h_rt", ch.h_rt);
    for (Index k = 0; k < ch.K(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        out << "alpha_hbu " << fmt(ch.alpha_hbu.at(kk)) << '\n';
        out << "alpha_hru " << fmt(ch.alpha_hru.at(kk)) << '\n';
        const Vec3 p = kk < ch.user_positions.size() ? ch.user_positions[kk] : Vec3::Zero();
        out << "user " << fmt(p.x()) << ' ' << fmt(p.y()) << ' ' << fmt(p.z()) << '\n';
        write_matrix(out, "h_bu", ch.h_bu[kk]);
        write_matrix(out, "h_ru", ch.h_ru[kk]);
    }
}

ChannelSet read_channels(std::istream& in)
{
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "rdars-channels" || version != 1)
        throw std::runtime_error("channel dump: bad header");
    ChannelSet ch;
    const auto K = static_cast<Index>(read_scalar(in, "K"));
    ch.alpha_Hbr = read_scalar(in, "alpha_Hbr");
    ch.alpha_hbt = read_scalar(in, "alpha_hbt");
    ch.alpha_hrt = read_scalar(in, "alpha_hrt");
    ch.H_br = read_matrix(in, "H_br");
    ch.h_bt = read_matrix(in, "h_bt");
    ch.h_rt = read_matrix(in, "h_rt");
    for (Index k = 0; k < K; ++k) {
        ch.alpha_hbu.push_back(read_scalar(in, "alpha_hbu"));
        ch.alpha_hru.push_back(read_scalar(in, "alpha_hru"));
        std::string tag;
        std::string x, y, z;
        if (!(in >> tag >> x >> y >> z) || tag != "user") throw std::runtime_error("channel dump: expected user");
        ch.user_positions.emplace_back(std::stod(x), std::stod(y), std::stod(z));
        ch.h_bu.push_back(read_matrix(in, "h_bu"));
        ch.h_ru.push_back(read_matrix(in, "h_ru"));
    }
    if (ch.h_bt.size() != ch.M() || ch.h_rt.size() != ch.N())
        throw std::runtime_error("channel dump: inconsistent dimensions");
    return ch;
}

}  // namespace rdars
