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

#include <cmath>
#include <stdexcept>

#include "rdars/types.hpp"

namespace rdars {

/// ULA response [1, e^{-j2pi r sin(theta)}, ..., e^{-j2pi r (M-1) sin(theta)}]^T, r = d / wavelength.
template <typename Scalar = double>
CVector<Scalar> ula_steering(Scalar theta, Index M, Scalar spacing_ratio = Scalar(0.5))
{
    if (!std::isfinite(theta)) throw std::invalid_argument("steering angle must be finite");
    if (M < 1) throw DimensionError("ULA needs at least one element");
    CVector<Scalar> a(M);
    const Scalar step = Scalar(2) * Scalar(kPi) * spacing_ratio * std::sin(theta);
    for (Index m = 0; m < M; ++m) a(m) = std::polar(Scalar(1), -step * Scalar(m));
    return a;
}

/// UPA response with element (n1, n2) at index n1 + N1 * n2 and phase
/// -2pi r (n1 sin(theta) cos(psi) + n2 sin(psi)).
template <typename Scalar = double>
CVector<Scalar> upa_steering(Scalar theta, Scalar psi, Index N1, Index N2, Scalar spacing_ratio = Scalar(0.5))
{
    if (!std::isfinite(theta) || !std::isfinite(psi)) throw std::invalid_argument("steering angle must be finite");
    if (N1 < 1 || N2 < 1) throw DimensionError("UPA needs at least one element per axis");
    CVector<Scalar> a(N1 * N2);
    const Scalar k = Scalar(2) * Scalar(kPi) * spacing_ratio;
    const Scalar u = std::sin(theta) * std::cos(psi);
    const Scalar v = std::sin(psi);
    for (Index n2 = 0; n2 < N2; ++n2)
        for (Index n1 = 0; n1 < N1; ++n1)
            a(n1 + N1 * n2) = std::polar(Scalar(1), -k * (Scalar(n1) * u + Scalar(n2) * v));
    return a;
}

/// Linear gain 10^{(P0 - 10 alpha log10(d / d0)) / 10}.
inline double path_loss_gain(double d_m, double alpha, double P0_db = -30.0, double d0_m = 1.0)
{
    if (!(d_m > 0.0)) throw std::invalid_argument("path-loss distance must be > 0");
    return std::pow(10.0, (P0_db - 10.0 * alpha * std::log10(d_m / d0_m)) / 10.0);
}

}  // namespace rdars
