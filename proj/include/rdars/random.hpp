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
#include <random>

#include "rdars/types.hpp"

namespace rdars {

/// One round of the splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a master seed with stream coordinates into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Deterministic random stream whose draws do not depend on the standard
/// library's distribution implementations.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();
    /// Circularly symmetric CN(0, 1).
    cd complex_normal();
    /// Uniform phase on [0, 2pi).
    cd unit_phase();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Stable link identifiers so each channel has its own stream.
enum class Link : std::uint64_t {
    bs_rdars = 1,
    bs_user = 2,
    rdars_user = 3,
    user_position = 4,
    reflection_init = 5,
};

}  // namespace rdars
