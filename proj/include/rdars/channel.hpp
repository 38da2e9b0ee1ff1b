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

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rdars/scenario.hpp"
#include "rdars/types.hpp"

namespace rdars {

/// The five propagation channels of one realization plus their path-loss gains.
struct ChannelSet {
    MatC H_br;                 // N x M, BS -> RDARS
    std::vector<VecC> h_bu;    // K x (M), BS -> user k
    std::vector<VecC> h_ru;    // K x (N), RDARS -> user k
    VecC h_bt;                 // M, BS -> target
    VecC h_rt;                 // N, RDARS -> target

    double alpha_Hbr = 0.0;
    double alpha_hbt = 0.0;
    double alpha_hrt = 0.0;
    std::vector<double> alpha_hbu;
    std::vector<double> alpha_hru;
    std::vector<Vec3> user_positions;

    Index M() const { return H_br.cols(); }
    Index N() const { return H_br.rows(); }
    Index K() const { return static_cast<Index>(h_bu.size()); }
};

/// Reflection phases, connected-mode indicator and column-selection matrix.
struct RdarsState {
    VecC phi;    // N, unit modulus
    VecR a_vec;  // N, entries in {0, 1}
    MatR A_a;    // N x a, one-hot columns

    Index N() const { return phi.size(); }
    Index connected() const { return A_a.cols(); }
};

/// State with the given phases, `a_vec` as indicator and A_a built from its
/// support in ascending row order.
RdarsState make_state(const VecC& phi, const VecR& a_vec);
/// First `a` elements connected.
RdarsState first_elements_state(const VecC& phi, Index a);
VecR selection_from_columns(const MatR& A_a, Index N);
/// True when A = A_a A_a^T holds exactly and every column is one-hot.
bool selection_consistent(const RdarsState& state);

/// Composite user channels and round-trip echo channel for a fixed RDARS state.
struct Composites {
    std::vector<VecC> h1;  // K x (M + a)
    MatC H3;               // N x M, (I - A) H_br
    VecC h4;               // M
    VecC v;                // M + a, H2 = h4 v^T
    MatC H2;               // M x (M + a)
};

Composites assemble_composites(const ChannelSet& channels, const RdarsState& state);

/// Draws user positions and all fading from streams keyed by (seed, link, user).
ChannelSet synthesize_channels(const SystemConfig& config, const Geometry& geometry, std::uint64_t seed);

/// Plain-text dump: one "re,im" token per complex entry, see docs/channels.md.
void write_channels(std::ostream& out, const ChannelSet& channels);
ChannelSet read_channels(std::istream& in);

}  // namespace rdars
