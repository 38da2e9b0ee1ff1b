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

#include <algorithm>
#include <cmath>
#include <vector>

#include "rdars/steering.hpp"
#include "rdars/types.hpp"

namespace rdars {

inline constexpr double kGainFloorDb = -120.0;

/// Per-user SINR |h_k^T f_k|^2 / (sum_{i != k} |h_k^T f_i|^2 + sigma_k^2).
template <typename Scalar>
RVector<Scalar> user_sinr(const std::vector<CVector<Scalar>>& h1, const CMatrix<Scalar>& F,
                          const std::vector<Scalar>& sigma1_sq)
{
    const auto K = static_cast<Index>(h1.size());
    if (F.cols() != K || static_cast<Index>(sigma1_sq.size()) != K)
        throw DimensionError("user_sinr: F columns, channels and noise powers must all have K entries");
    RVector<Scalar> out(K);
    for (Index k = 0; k < K; ++k) {
        const auto& h = h1[static_cast<std::size_t>(k)];
        if (h.size() != F.rows()) throw DimensionError("user_sinr: channel length differs from F rows");
        const RVector<Scalar> gains = (h.transpose() * F).cwiseAbs2().transpose();
        const Scalar signal = gains(k);
        const Scalar denom = gains.sum() - signal + sigma1_sq[static_cast<std::size_t>(k)];
        if (denom == Scalar(0)) {
            if (signal == Scalar(0)) throw NumericalError("user_sinr: zero signal, interference and noise");
            out(k) = std::numeric_limits<Scalar>::infinity();
        } else {
            out(k) = signal / denom;
        }
    }
    return out;
}

/// sigma_alpha^2 w^H H2 F F^H H2^H w / (sigma_2^2 w^H w).
template <typename Scalar>
Scalar radar_snr(const CVector<Scalar>& w, const CMatrix<Scalar>& H2, const CMatrix<Scalar>& F,
                 Scalar sigma_alpha_sq, Scalar sigma2_sq)
{
    const Scalar ww = w.squaredNorm();
    if (ww == Scalar(0)) throw NumericalError("radar_snr: zero receive filter");
    const Scalar echo = (w.adjoint() * H2 * F).squaredNorm();
    return sigma_alpha_sq * echo / (sigma2_sq * ww);
}

template <typename Scalar>
Scalar gain_to_db(Scalar g)
{
    if (!(g > Scalar(0))) return Scalar(kGainFloorDb);
    return std::max(Scalar(10) * std::log10(g), Scalar(kGainFloorDb));
}

/// BS transmit pattern sum_k |a_ULA(theta)^T f_{k,1}|^2 in dB over `thetas`.
template <typename Scalar>
RVector<Scalar> beampattern_bs(const CMatrix<Scalar>& F, Index M, const RVector<Scalar>& thetas,
                               Scalar spacing_ratio = Scalar(0.5))
{
    if (thetas.size() == 0) throw std::invalid_argument("beampattern: empty angle grid");
    const CMatrix<Scalar> F1 = F.topRows(M);
    RVector<Scalar> out(thetas.size());
    for (Index t = 0; t < thetas.size(); ++t) {
        const CVector<Scalar> a = ula_steering<Scalar>(thetas(t), M, spacing_ratio);
        out(t) = gain_to_db<Scalar>((a.transpose() * F1).squaredNorm());
    }
    return out;
}

/// RDARS aperture pattern: rows index `thetas`, columns index `psis`. The
/// aperture field is (I - A) Phi H_br f_{k,1} + A_a f_{k,2}.
template <typename Scalar>
RMatrix<Scalar> beampattern_rdars(const CMatrix<Scalar>& F, const CMatrix<Scalar>& H_br, const CVector<Scalar>& phi,
                                  const RVector<Scalar>& a_vec, const RMatrix<Scalar>& A_a, Index N1, Index N2,
                                  const RVector<Scalar>& thetas, const RVector<Scalar>& psis,
                                  Scalar spacing_ratio = Scalar(0.5))
{
    if (thetas.size() == 0 || psis.size() == 0) throw std::invalid_argument("beampattern: empty angle grid");
    const Index M = H_br.cols();
    const CVector<Scalar> d =
        (RVector<Scalar>::Ones(a_vec.size()) - a_vec).template cast<Complex<Scalar>>().cwiseProduct(phi);
    const CMatrix<Scalar> field =
        d.asDiagonal() * (H_br * F.topRows(M)) + A_a.template cast<Complex<Scalar>>() * F.bottomRows(A_a.cols());
    RMatrix<Scalar> out(thetas.size(), psis.size());
    for (Index t = 0; t < thetas.size(); ++t)
        for (Index p = 0; p < psis.size(); ++p) {
            const CVector<Scalar> a = upa_steering<Scalar>(thetas(t), psis(p), N1, N2, spacing_ratio);
            out(t, p) = gain_to_db<Scalar>((a.transpose() * field).squaredNorm());
        }
    return out;
}

struct PenaltyResiduals {
    double comm = 0.0;       // sum_{k,i} |h_k^T f_i - s_{k,i}|^2
    double selection = 0.0;  // ||A - A_a A_a^T||_F^2
};

template <typename Scalar>
PenaltyResiduals penalty_residuals(const RVector<Scalar>& a_vec, const RMatrix<Scalar>& A_a,
                                   const CMatrix<Scalar>& s, const std::vector<CVector<Scalar>>& h1,
                                   const CMatrix<Scalar>& F)
{
    const auto K = static_cast<Index>(h1.size());
    if (s.rows() != K || s.cols() != F.cols()) throw DimensionError("penalty_residuals: s must be K x K");
    PenaltyResiduals out;
    for (Index k = 0; k < K; ++k)
        out.comm += static_cast<double>(
            ((h1[static_cast<std::size_t>(k)].transpose() * F).transpose() - s.row(k).transpose()).squaredNorm());
    const RMatrix<Scalar> diff = RMatrix<Scalar>(a_vec.asDiagonal()) - A_a * A_a.transpose();
    out.selection = static_cast<double>(diff.squaredNorm());
    return out;
}

}  // namespace rdars
