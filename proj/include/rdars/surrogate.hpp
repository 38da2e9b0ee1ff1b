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

#include <vector>

#include "rdars/channel.hpp"
#include "rdars/types.hpp"

namespace rdars {

using RowC = Eigen::Matrix<cd, 1, Eigen::Dynamic>;

/// Default limit on the lifted (Kronecker) dimension N^2 for dense coefficient sets.
inline constexpr Index kKronCap = 256;

/// Everything the penalized objective depends on, by reference.
struct ObjectiveInputs {
    const ChannelSet& channels;
    const RdarsState& state;
    const VecC& w;
    const MatC& F;  // (M + a) x K
    const MatC& s;  // K x K, s(k, i)
    double rho1 = 1.0;
    double rho2 = 1.0;
    double sigma_alpha_sq = 1.0;
    double sigma2_sq = 1.0;
};

/// sigma_alpha^2 / (sigma_2^2 ||w||^2): multiplies sum_k |w^H H2 f_k|^2 in the objective.
double echo_scale(const ObjectiveInputs& in);

struct ObjectiveTerms {
    double echo = 0.0;       // -radar SNR
    double comm = 0.0;       // (1 / 2 rho1) sum |h_k^T f_i - s_ki|^2
    double selection = 0.0;  // (1 / 2 rho2) ||A - A_a A_a^T||_F^2
    double total() const { return echo + comm + selection; }
};

/// Term-by-term evaluation with freshly assembled composites.
ObjectiveTerms penalized_objective_terms(const ObjectiveInputs& in);
double penalized_objective_direct(const ObjectiveInputs& in);

/// w^H H2 f_k = x_k + Y_k v + (l_k v)(r v) for the block variable v. The
/// quadratic coefficient row Z_k = l_k (x) r is kept factored.
struct EchoAffineParts {
    Index dim = 0;
    std::vector<cd> x;
    std::vector<RowC> Y;
    std::vector<RowC> l;
    RowC r;  // shared by all users; empty when the block is affine

    Index users() const { return static_cast<Index>(x.size()); }
    bool quadratic() const { return r.size() == dim && dim > 0; }
    cd value(Index k, const VecC& v) const;
    /// Dense Z_k of length dim^2 with entry (i dim + j) = l_i r_j.
    RowC Z(Index k) const;
};

/// h_k^T f_i - s_ki = s_tilde(k, i) + e_ki^T v; E[k] holds e_ki as column i.
struct PenaltyAffineParts {
    MatC s_tilde;
    std::vector<MatC> E;

    cd value(Index k, Index i, const VecC& v) const;
};

EchoAffineParts echo_affine_phi(const ObjectiveInputs& in);
EchoAffineParts echo_affine_selection(const ObjectiveInputs& in);
EchoAffineParts echo_affine_columns(const ObjectiveInputs& in);
PenaltyAffineParts penalty_affine_phi(const ObjectiveInputs& in);
PenaltyAffineParts penalty_affine_selection(const ObjectiveInputs& in);
PenaltyAffineParts penalty_affine_columns(const ObjectiveInputs& in);

/// -scale sum_k |c_k(v)|^2 + (1 / 2 rho1) sum_{k,i} |p_ki(v)|^2.
double affine_block_value(const EchoAffineParts& echo, const PenaltyAffineParts& pen, double scale, double rho1,
                          const VecC& v);

/// Stacked one-hot columns vec(A_a), column j at rows [j N, (j + 1) N).
VecR vec_columns(const MatR& A_a);
MatR unvec_columns(const VecR& a_a, Index N);

// ---------------------------------------------------------------------------
// Closed-form expansions. Echo coefficients already carry the echo scale, so
// each evaluate_* call reproduces the objective itself.

struct PhiCoefficients {
    double r1 = 0.0;
    VecC r2;
    VecC r3;  // lifted; empty unless materialized
    MatC R4;
    MatC R5;
    MatC R6;
    double r7 = 0.0;
    VecC r8;
    MatC R9;
    bool lifted = false;
};

struct SelectionCoefficients {
    double r10 = 0.0;
    VecC r11;
    VecC r12;
    MatC R13;
    MatC R14;
    MatC R15;
    double r16 = 0.0;
    VecC r17;
    MatC R18;
    VecR r19;
    double r20 = 0.0;
    bool lifted = false;
};

struct ColumnCoefficients {
    double r21 = 0.0;
    VecC r22;
    MatC R23;
    double r24 = 0.0;
    VecC r25;
    MatC R26;
    double a_count = 0.0;
    VecR kron_diag;  // diagonal of I_a (x) A
};

/// Lifted terms are materialized only when dim^2 <= kron_cap.
PhiCoefficients build_phi_coefficients(const ObjectiveInputs& in, Index kron_cap = kKronCap);
SelectionCoefficients build_selection_coefficients(const ObjectiveInputs& in, Index kron_cap = kKronCap);
ColumnCoefficients build_column_coefficients(const ObjectiveInputs& in);

/// Objective value from the coefficient expansion. The phi form omits the selection
/// penalty, which does not depend on phi. Throws when lifted terms are absent.
double evaluate_phi_objective(const PhiCoefficients& c, const VecC& phi, double rho1);
double evaluate_selection_objective(const SelectionCoefficients& c, const VecR& a, double rho1, double rho2);
double evaluate_column_objective(const ColumnCoefficients& c, const VecR& a_a, double rho1, double rho2);

// ---------------------------------------------------------------------------
// Majorizers

/// Largest eigenvalue of (X + X^H) / 2.
double lambda_max_symmetric(const MatR& X);
double lambda_max_hermitian(const MatC& X);

/// x_t^T Q x_t + x_t^T (Q + Q^T)(x - x_t) + lambda / 2 ||x - x_t||^2.
double quadratic_taylor_bound(const MatR& Q, double lambda, const VecR& x_t, const VecR& x);
/// [Re z; Im z].
VecR real_stack(const VecC& z);
/// U y = y_top + j y_bottom.
VecC complex_unstack(const VecR& y);

struct PhiMajorizer {
    VecC phi_t;
    double scale = 0.0;
    double rho1 = 1.0;
    double f_t = 0.0;  // phi-block objective at phi_t

    VecC q1;
    MatC Q2;
    MatR Qbar2;
    double lambda1 = 0.0;
    VecC q3;
    VecC r8;
    MatC R9;
    MatR Rbar9;
    double lambda2 = 0.0;
    VecC q4;
    VecC q5;

    /// Re{q5^H phi} shifted to touch the block objective at phi_t; a global
    /// upper bound on the unit-modulus set.
    double surrogate(const VecC& phi) const;
};

PhiMajorizer build_phi_majorizer(const EchoAffineParts& echo, const PenaltyAffineParts& pen, double scale,
                                 double rho1, const VecC& phi_t);

/// phi~^H R~ phi~ = scale sum_k |Y_k phi + Z_k (phi (x) phi)|^2.
double phi_quartic_term(const EchoAffineParts& echo, double scale, const VecC& phi);
/// First-order bound of -phi~^H R~ phi~ around phi_t.
double phi_quartic_bound(const EchoAffineParts& echo, double scale, const VecC& phi_t, const VecC& phi);

struct SelectionMajorizer {
    VecR a_t;
    double f_t = 0.0;  // a-block objective at a_t

    VecC q6;
    MatR Qt7;  // -Re(Q7)
    double lambda3 = 0.0;
    VecC q8;
    VecC r17;
    MatC R18;
    double lambda4 = 0.0;
    VecC q9;
    VecR r19;
    VecC q10;

    /// Linear surrogate touching at a_t; upper bound on binary vectors with sum a_t.sum().
    double surrogate(const VecR& a) const;
};

SelectionMajorizer build_selection_majorizer(const EchoAffineParts& echo, const PenaltyAffineParts& pen,
                                             double scale, double rho1, double rho2, const MatR& A_a,
                                             const VecR& a_t);

/// Second-order bound a^T R a <= a^T Lambda a + 2 Re{a^T (R - Lambda) a_t} + a_t^T (Lambda - R) a_t.
double hermitian_curvature_bound(const MatC& R, double lambda, const VecR& a_t, const VecR& a);

struct ColumnMajorizer {
    VecR x_t;  // vec(A_a) at the expansion point
    Index N = 0;
    double f_t = 0.0;

    VecC q16;
    VecC r25;
    MatC R26;
    double lambda26 = 0.0;
    VecC q17;
    VecR q18;
    VecC q19;

    /// N x a matrix of Re{q19}: entry (n, j) is the cost of sending column j to row n.
    MatR cost_matrix() const;
    double surrogate(const VecR& a_a) const;
};

ColumnMajorizer build_column_majorizer(const EchoAffineParts& echo, const PenaltyAffineParts& pen, double scale,
                                       double rho1, double rho2, const VecR& a_vec, const MatR& A_a_t);

}  // namespace rdars
