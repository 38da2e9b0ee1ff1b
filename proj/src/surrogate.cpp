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

#include "rdars/surrogate.hpp"

#include "rdars/metrics.hpp"

namespace rdars {

namespace {

struct Blocks {
    Index M;
    Index N;
    Index K;
    Index a;
    MatC F1;
    MatC F2;
};

Blocks split(const ObjectiveInputs& in)
{
    Blocks b{in.channels.M(), in.channels.N(), in.channels.K(), in.state.A_a.cols(), {}, {}};
    if (in.F.rows() != b.M + b.a || in.F.cols() != b.K)
        throw DimensionError("F must be (M + a) x K");
    if (in.s.rows() != b.K || in.s.cols() != b.K) throw DimensionError("s must be K x K");
    if (in.w.size() != b.M) throw DimensionError("w must have M entries");
    b.F1 = in.F.topRows(b.M);
    b.F2 = in.F.bottomRows(b.a);
    return b;
}

VecC kron(const VecC& u, const VecC& v)
{
    VecC out(u.size() * v.size());
    for (Index i = 0; i < u.size(); ++i) out.segment(i * v.size(), v.size()) = u(i) * v;
    return out;
}

double sq(cd z) { return std::norm(z); }

}  // namespace

double echo_scale(const ObjectiveInputs& in)
{
    const double ww = in.w.squaredNorm();
    if (ww == 0.0) throw NumericalError("zero receive filter");
    return in.sigma_alpha_sq / (in.sigma2_sq * ww);
}

ObjectiveTerms penalized_objective_terms(const ObjectiveInputs& in)
{
    split(in);
    const Composites comp = assemble_composites(in.channels, in.state);
    ObjectiveTerms t;
    t.echo = -radar_snr<double>(in.w, comp.H2, in.F, in.sigma_alpha_sq, in.sigma2_sq);
    const PenaltyResiduals res = penalty_residuals<double>(in.state.a_vec, in.state.A_a, in.s, comp.h1, in.F);
    t.comm = res.comm / (2.0 * in.rho1);
    t.selection = res.selection / (2.0 * in.rho2);
    return t;
}

double penalized_objective_direct(const ObjectiveInputs& in) { return penalized_objective_terms(in).total(); }

// ---------------------------------------------------------------------------
// Affine parts

cd EchoAffineParts::value(Index k, const VecC& v) const
{
    const auto kk = static_cast<std::size_t>(k);
    cd out = x[kk] + (Y[kk] * v)(0);
    if (quadratic()) out += (l[kk] * v)(0) * (r * v)(0);
    return out;
}

RowC EchoAffineParts::Z(Index k) const
{
    RowC out = RowC::Zero(dim * dim);
    if (!quadratic()) return out;
    const RowC& lk = l[static_cast<std::size_t>(k)];
    for (Index i = 0; i < dim; ++i) out.segment(i * dim, dim) = lk(i) * r;
    return out;
}

cd PenaltyAffineParts::value(Index k, Index i, const VecC& v) const
{
    return s_tilde(k, i) + (E[static_cast<std::size_t>(k)].col(i).transpose() * v)(0);
}

EchoAffineParts echo_affine_phi(const ObjectiveInputs& in)
{
    const Blocks b = split(in);
    const auto& ch = in.channels;
    const VecR keep = VecR::Ones(b.N) - in.state.a_vec;
    const MatC H3 = keep.asDiagonal() * ch.H_br;

    const cd alpha0 = in.w.dot(ch.h_bt);
    const RowC alpha_phi = (H3 * in.w.conjugate()).cwiseProduct(ch.h_rt).transpose();

    EchoAffineParts out;
    out.dim = b.N;
    out.r = alpha_phi;
    for (Index k = 0; k < b.K; ++k) {
        const cd beta0 = (ch.h_bt.transpose() * b.F1.col(k))(0) +
                         (ch.h_rt.transpose() * in.state.A_a * b.F2.col(k))(0);
        const RowC beta_phi = ch.h_rt.cwiseProduct(H3 * b.F1.col(k)).transpose();
        out.x.push_back(alpha0 * beta0);
        out.Y.push_back(alpha0 * beta_phi + beta0 * alpha_phi);
        out.l.push_back(beta_phi);
    }
    return out;
}

EchoAffineParts echo_affine_selection(const ObjectiveInputs& in)
{
    const Blocks b = split(in);
    const auto& ch = in.channels;
    const VecC g = in.state.phi.cwiseProduct(ch.h_rt);  // phi (.) h_rt
    const VecC h_eff = ch.h_bt + ch.H_br.transpose() * g;  // h4 with every element reflecting

    const cd alpha0 = in.w.dot(h_eff);
    const RowC alpha_a = (ch.H_br * in.w.conjugate()).cwiseProduct(g).transpose();

    EchoAffineParts out;
    out.dim = b.N;
    out.r = alpha_a;
    for (Index k = 0; k < b.K; ++k) {
        const cd beta0 = (h_eff.transpose() * b.F1.col(k))(0) +
                         (ch.h_rt.transpose() * in.state.A_a * b.F2.col(k))(0);
        const RowC beta_a = g.cwiseProduct(ch.H_br * b.F1.col(k)).transpose();
        out.x.push_back(alpha0 * beta0);
        out.Y.push_back(-(alpha0 * beta_a + beta0 * alpha_a));
        out.l.push_back(beta_a);
    }
    return out;
}

EchoAffineParts echo_affine_columns(const ObjectiveInputs& in)
{
    const Blocks b = split(in);
    const auto& ch = in.channels;
    const VecC d = (VecR::Ones(b.N) - in.state.a_vec).cast<cd>().cwiseProduct(in.state.phi);
    const VecC h4 = ch.h_bt + ch.H_br.transpose() * d.cwiseProduct(ch.h_rt);
    const cd g = in.w.dot(h4);

    EchoAffineParts out;
    out.dim = b.N * b.a;
    for (Index k = 0; k < b.K; ++k) {
        out.x.push_back(g * (h4.transpose() * b.F1.col(k))(0));
        out.Y.push_back(g * kron(b.F2.col(k), ch.h_rt).transpose());
        out.l.emplace_back();
    }
    return out;
}

PenaltyAffineParts penalty_affine_phi(const ObjectiveInputs& in)
{
    const Blocks b = split(in);
    const auto& ch = in.channels;
    const MatC H3F = (VecR::Ones(b.N) - in.state.a_vec).asDiagonal() * ch.H_br * b.F1;  // N x K

    PenaltyAffineParts out;
    out.s_tilde.resize(b.K, b.K);
    for (Index k = 0; k < b.K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const RowC direct = ch.h_bu[kk].transpose() * b.F1 + ch.h_ru[kk].transpose() * in.state.A_a * b.F2;
        out.s_tilde.row(k) = direct - in.s.row(k);
        out.E.push_back(ch.h_ru[kk].asDiagonal() * H3F);
    }
    return out;
}

PenaltyAffineParts penalty_affine_selection(const ObjectiveInputs& in)
{
    const Blocks b = split(in);
    const auto& ch = in.channels;
    const MatC PhiHF = in.state.phi.asDiagonal() * ch.H_br * b.F1;  // N x K

    PenaltyAffineParts out;
    out.s_tilde.resize(b.K, b.K);
    for (Index k = 0; k < b.K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const RowC full = ch.h_bu[kk].transpose() * b.F1 + ch.h_ru[kk].transpose() * PhiHF +
                          ch.h_ru[kk].transpose() * in.state.A_a * b.F2;
        out.s_tilde.row(k) = full - in.s.row(k);
        out.E.push_back(-(ch.h_ru[kk].asDiagonal() * PhiHF));
    }
    return out;
}

PenaltyAffineParts penalty_affine_columns(const ObjectiveInputs& in)
{
    const Blocks b = split(in);
    const auto& ch = in.channels;
    const VecC d = (VecR::Ones(b.N) - in.state.a_vec).cast<cd>().cwiseProduct(in.state.phi);
    const MatC DHF = d.asDiagonal() * ch.H_br * b.F1;

    PenaltyAffineParts out;
    out.s_tilde.resize(b.K, b.K);
    for (Index k = 0; k < b.K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const RowC full = ch.h_bu[kk].transpose() * b.F1 + ch.h_ru[kk].transpose() * DHF;
        out.s_tilde.row(k) = full - in.s.row(k);
        MatC E(b.N * b.a, b.K);
        for (Index i = 0; i < b.K; ++i) E.col(i) = kron(b.F2.col(i), ch.h_ru[kk]);
        out.E.push_back(std::move(E));
    }
    return out;
}

double affine_block_value(const EchoAffineParts& echo, const PenaltyAffineParts& pen, double scale, double rho1,
                          const VecC& v)
{
    double echo_sum = 0.0;
    for (Index k = 0; k < echo.users(); ++k) echo_sum += sq(echo.value(k, v));
    double pen_sum = 0.0;
    for (Index k = 0; k < pen.s_tilde.rows(); ++k)
        for (Index i = 0; i < pen.s_tilde.cols(); ++i) pen_sum += sq(pen.value(k, i, v));
    return -scale * echo_sum + pen_sum / (2.0 * rho1);
}

VecR vec_columns(const MatR& A_a) { return A_a.reshaped(); }

MatR unvec_columns(const VecR& a_a, Index N)
{
    if (N <= 0 || a_a.size() % N != 0) throw DimensionError("vec(A_a) length must be a multiple of N");
    return a_a.reshaped(N, a_a.size() / N);
}

// ---------------------------------------------------------------------------
// Coefficients

namespace {

struct EchoSums {
    double c0 = 0.0;  // sum |x|^2
    VecC c1;          // sum Y^H x
    VecC c2;          // sum Z^H x
    MatC YY;          // sum Y^H Y
    MatC ZY;          // sum Z^H Y
    MatC ZZ;          // sum Z^H Z
};

EchoSums echo_sums(const EchoAffineParts& e, double scale, bool lifted)
{
    const Index n = e.dim;
    EchoSums s;
    s.c1 = VecC::Zero(n);
    s.YY = MatC::Zero(n, n);
    if (lifted) {
        s.c2 = VecC::Zero(n * n);
        s.ZY = MatC::Zero(n * n, n);
        s.ZZ = MatC::Zero(n * n, n * n);
    }
    for (Index k = 0; k < e.users(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const cd x = e.x[kk];
        const RowC& Y = e.Y[kk];
        s.c0 += scale * sq(x);
        s.c1 += scale * Y.adjoint() * x;
        s.YY += scale * Y.adjoint() * Y;
        if (lifted) {
            const RowC Z = e.Z(k);
            s.c2 += scale * Z.adjoint() * x;
            s.ZY += scale * Z.adjoint() * Y;
            s.ZZ += scale * Z.adjoint() * Z;
        }
    }
    return s;
}

struct PenaltySums {
    double c0 = 0.0;  // sum |s~|^2
    VecC c1;          // sum conj(e) s~
    MatC EE;          // sum e e^H
};

PenaltySums penalty_sums(const PenaltyAffineParts& p, Index dim)
{
    PenaltySums s;
    s.c1 = VecC::Zero(dim);
    s.EE = MatC::Zero(dim, dim);
    for (Index k = 0; k < p.s_tilde.rows(); ++k) {
        const MatC& E = p.E[static_cast<std::size_t>(k)];
        for (Index i = 0; i < p.s_tilde.cols(); ++i) {
            const cd st = p.s_tilde(k, i);
            s.c0 += sq(st);
            s.c1 += E.col(i).conjugate() * st;
            s.EE += E.col(i) * E.col(i).adjoint();
        }
    }
    return s;
}

}  // namespace

PhiCoefficients build_phi_coefficients(const ObjectiveInputs& in, Index kron_cap)
{
    const EchoAffineParts echo = echo_affine_phi(in);
    const PenaltyAffineParts pen = penalty_affine_phi(in);
    const bool lifted = echo.dim * echo.dim <= kron_cap;
    const EchoSums es = echo_sums(echo, echo_scale(in), lifted);
    const PenaltySums ps = penalty_sums(pen, echo.dim);

    PhiCoefficients c;
    c.r1 = es.c0;
    c.r2 = es.c1;
    c.R4 = es.YY;
    c.lifted = lifted;
    if (lifted) {
        c.r3 = es.c2;
        c.R5 = es.ZY;
        c.R6 = es.ZZ;
    }
    c.r7 = ps.c0;
    c.r8 = ps.c1;
    c.R9 = ps.EE;
    return c;
}

SelectionCoefficients build_selection_coefficients(const ObjectiveInputs& in, Index kron_cap)
{
    const EchoAffineParts echo = echo_affine_selection(in);
    const PenaltyAffineParts pen = penalty_affine_selection(in);
    const bool lifted = echo.dim * echo.dim <= kron_cap;
    const EchoSums es = echo_sums(echo, echo_scale(in), lifted);
    const PenaltySums ps = penalty_sums(pen, echo.dim);
    const MatR AAt = in.state.A_a * in.state.A_a.transpose();

    SelectionCoefficients c;
    c.r10 = es.c0;
    c.r11 = es.c1;
    c.R13 = es.YY;
    c.lifted = lifted;
    if (lifted) {
        c.r12 = es.c2;
        c.R14 = es.ZY;
        c.R15 = es.ZZ;
    }
    c.r16 = ps.c0;
    c.r17 = ps.c1;
    c.R18 = ps.EE;
    c.r19 = (MatR::Identity(echo.dim, echo.dim) - 2.0 * AAt).diagonal();
    c.r20 = AAt.trace();
    return c;
}

ColumnCoefficients build_column_coefficients(const ObjectiveInputs& in)
{
    const EchoAffineParts echo = echo_affine_columns(in);
    const PenaltyAffineParts pen = penalty_affine_columns(in);
    const EchoSums es = echo_sums(echo, echo_scale(in), false);
    const PenaltySums ps = penalty_sums(pen, echo.dim);

    ColumnCoefficients c;
    c.r21 = es.c0;
    c.r22 = es.c1;
    // Enters the expansion inside 2Re{.}, hence the half.
    c.R23 = 0.5 * es.YY;
    c.r24 = ps.c0;
    c.r25 = ps.c1;
    c.R26 = ps.EE;
    c.a_count = in.state.a_vec.sum();
    c.kron_diag = in.state.a_vec.replicate(in.state.A_a.cols(), 1);
    return c;
}

double evaluate_phi_objective(const PhiCoefficients& c, const VecC& phi, double rho1)
{
    if (!c.lifted) throw std::logic_error("phi coefficients were built without lifted terms");
    if (phi.size() != c.r2.size()) throw DimensionError("phi length differs from the coefficient dimension");
    const VecC pp = kron(phi, phi);
    const double echo = c.r1 + 2.0 * c.r2.dot(phi).real() + 2.0 * c.r3.dot(pp).real() +
                        phi.dot(c.R4 * phi).real() + 2.0 * pp.dot(c.R5 * phi).real() + pp.dot(c.R6 * pp).real();
    const double pen = c.r7 + 2.0 * c.r8.dot(phi).real() + (phi.transpose() * c.R9 * phi.conjugate())(0).real();
    return -echo + pen / (2.0 * rho1);
}

double evaluate_selection_objective(const SelectionCoefficients& c, const VecR& a, double rho1, double rho2)
{
    if (!c.lifted) throw std::logic_error("selection coefficients were built without lifted terms");
    if (a.size() != c.r11.size()) throw DimensionError("a length differs from the coefficient dimension");
    const VecC ac = a.cast<cd>();
    const VecC aa = kron(ac, ac);
    const double echo = c.r10 + 2.0 * c.r11.dot(ac).real() + 2.0 * c.r12.dot(aa).real() +
                        (ac.transpose() * c.R13 * ac)(0).real() + 2.0 * (aa.transpose() * c.R14 * ac)(0).real() +
                        (aa.transpose() * c.R15 * aa)(0).real();
    const double pen = c.r16 + 2.0 * c.r17.dot(ac).real() + (ac.transpose() * c.R18 * ac)(0).real();
    return -echo + pen / (2.0 * rho1) + (c.r19.dot(a) + c.r20) / (2.0 * rho2);
}

double evaluate_column_objective(const ColumnCoefficients& c, const VecR& a_a, double rho1, double rho2)
{
    if (a_a.size() != c.r22.size()) throw DimensionError("vec(A_a) length differs from the coefficient dimension");
    const VecC x = a_a.cast<cd>();
    const double echo = c.r21 + 2.0 * (c.r22.dot(x) + (x.transpose() * c.R23 * x)(0)).real();
    const double pen = c.r24 + 2.0 * c.r25.dot(x).real() + (x.transpose() * c.R26 * x)(0).real();
    const double sel = c.a_count - a_a.dot(c.kron_diag.cwiseProduct(a_a));
    return -echo + pen / (2.0 * rho1) + sel / rho2;
}

// ---------------------------------------------------------------------------
// Majorizers

double lambda_max_symmetric(const MatR& X)
{
    if (X.size() == 0) return 0.0;
    const MatR S = 0.5 * (X + X.transpose());
    Eigen::SelfAdjointEigenSolver<MatR> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double lambda_max_hermitian(const MatC& X)
{
    if (X.size() == 0) return 0.0;
    const MatC S = 0.5 * (X + X.adjoint());
    Eigen::SelfAdjointEigenSolver<MatC> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double quadratic_taylor_bound(const MatR& Q, double lambda, const VecR& x_t, const VecR& x)
{
    const VecR dx = x - x_t;
    return x_t.dot(Q * x_t) + x_t.dot((Q + Q.transpose()) * dx) + 0.5 * lambda * dx.squaredNorm();
}

VecR real_stack(const VecC& z)
{
    VecR out(2 * z.size());
    out << z.real(), z.imag();
    return out;
}

VecC complex_unstack(const VecR& y)
{
    const Index n = y.size() / 2;
    VecC out(n);
    for (Index i = 0; i < n; ++i) out(i) = cd(y(i), y(n + i));
    return out;
}

double phi_quartic_term(const EchoAffineParts& echo, double scale, const VecC& phi)
{
    double sum = 0.0;
    for (Index k = 0; k < echo.users(); ++k) sum += sq(echo.value(k, phi) - echo.x[static_cast<std::size_t>(k)]);
    return scale * sum;
}

double phi_quartic_bound(const EchoAffineParts& echo, double scale, const VecC& phi_t, const VecC& phi)
{
    double sum = 0.0;
    for (Index k = 0; k < echo.users(); ++k) {
        const cd x = echo.x[static_cast<std::size_t>(k)];
        const cd dt = echo.value(k, phi_t) - x;
        const cd d = echo.value(k, phi) - x;
        sum += -2.0 * (std::conj(dt) * d).real() + sq(dt);
    }
    return scale * sum;
}

PhiMajorizer build_phi_majorizer(const EchoAffineParts& echo, const PenaltyAffineParts& pen, double scale,
                                 double rho1, const VecC& phi_t)
{
    const Index N = echo.dim;
    if (phi_t.size() != N) throw DimensionError("phi_t length differs from the block dimension");
    PhiMajorizer m;
    m.phi_t = phi_t;
    m.scale = scale;
    m.rho1 = rho1;
    m.f_t = affine_block_value(echo, pen, scale, rho1, phi_t);

    m.q1 = VecC::Zero(N);
    MatC G = MatC::Zero(N, N);
    for (Index k = 0; k < echo.users(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const cd c_t = echo.value(k, phi_t);
        m.q1 += scale * echo.Y[kk].adjoint() * c_t;
        if (echo.quadratic()) G += scale * std::conj(c_t) * echo.l[kk].transpose() * echo.r;
    }
    m.Q2 = G.conjugate();
    m.Qbar2.resize(2 * N, 2 * N);
    m.Qbar2 << -m.Q2.real(), -m.Q2.imag(), -m.Q2.imag(), m.Q2.real();
    const VecR phibar_t = real_stack(phi_t);
    const MatR S2 = m.Qbar2 + m.Qbar2.transpose();
    m.lambda1 = lambda_max_symmetric(S2);
    m.q3 = complex_unstack((S2 - m.lambda1 * MatR::Identity(2 * N, 2 * N)) * phibar_t);

    const PenaltySums ps = penalty_sums(pen, N);
    m.r8 = ps.c1;
    m.R9 = ps.EE;
    m.Rbar9.resize(2 * N, 2 * N);
    m.Rbar9 << m.R9.real(), m.R9.imag(), -m.R9.imag(), m.R9.real();
    const MatR S9 = m.Rbar9 + m.Rbar9.transpose();
    m.lambda2 = lambda_max_symmetric(S9);
    m.q4 = complex_unstack((S9 - m.lambda2 * MatR::Identity(2 * N, 2 * N)) * phibar_t);

    m.q5 = -2.0 * m.q1 + 2.0 * m.q3 + (2.0 * m.r8 + m.q4) / (2.0 * rho1);
    return m;
}

double PhiMajorizer::surrogate(const VecC& phi) const { return f_t + q5.dot(phi - phi_t).real(); }

double hermitian_curvature_bound(const MatC& R, double lambda, const VecR& a_t, const VecR& a)
{
    const VecC ac = a.cast<cd>();
    const VecC tc = a_t.cast<cd>();
    const MatC L = lambda * MatC::Identity(R.rows(), R.cols());
    return (ac.transpose() * L * ac)(0).real() + 2.0 * (ac.transpose() * (R - L) * tc)(0).real() +
           (tc.transpose() * (L - R) * tc)(0).real();
}

SelectionMajorizer build_selection_majorizer(const EchoAffineParts& echo, const PenaltyAffineParts& pen,
                                             double scale, double rho1, double rho2, const MatR& A_a,
                                             const VecR& a_t)
{
    const Index N = echo.dim;
    if (a_t.size() != N) throw DimensionError("a_t length differs from the block dimension");
    SelectionMajorizer m;
    m.a_t = a_t;
    const VecC at = a_t.cast<cd>();
    const MatR AAt = A_a * A_a.transpose();
    m.r19 = (MatR::Identity(N, N) - 2.0 * AAt).diagonal();
    m.f_t = affine_block_value(echo, pen, scale, rho1, at) + (m.r19.dot(a_t) + AAt.trace()) / (2.0 * rho2);

    m.q6 = VecC::Zero(N);
    MatC G = MatC::Zero(N, N);
    for (Index k = 0; k < echo.users(); ++k) {
        const auto kk = static_cast<std::size_t>(k);
        const cd c_t = echo.value(k, at);
        m.q6 += scale * echo.Y[kk].adjoint() * c_t;
        if (echo.quadratic()) G += scale * std::conj(c_t) * echo.l[kk].transpose() * echo.r;
    }
    const MatC Q7 = G.conjugate();
    m.Qt7 = -Q7.real();
    const MatR S7 = m.Qt7 + m.Qt7.transpose();
    m.lambda3 = lambda_max_symmetric(S7);
    m.q8 = -2.0 * m.q6 + (2.0 * (S7 - m.lambda3 * MatR::Identity(N, N)) * a_t).cast<cd>();

    const PenaltySums ps = penalty_sums(pen, N);
    m.r17 = ps.c1;
    m.R18 = ps.EE;
    m.lambda4 = lambda_max_hermitian(m.R18);
    m.q9 = m.r17 + (m.R18 - m.lambda4 * MatC::Identity(N, N)) * at;

    m.q10 = m.q8 + m.q9 / rho1 + (m.r19 / (2.0 * rho2)).cast<cd>();
    return m;
}

double SelectionMajorizer::surrogate(const VecR& a) const { return f_t + q10.real().dot(a - a_t); }

ColumnMajorizer build_column_majorizer(const EchoAffineParts& echo, const PenaltyAffineParts& pen, double scale,
                                       double rho1, double rho2, const VecR& a_vec, const MatR& A_a_t)
{
    const Index n = echo.dim;
    ColumnMajorizer m;
    m.N = A_a_t.rows();
    m.x_t = vec_columns(A_a_t);
    if (m.x_t.size() != n) throw DimensionError("A_a_t size differs from the block dimension");
    const VecC xt = m.x_t.cast<cd>();
    const VecR kd = a_vec.replicate(A_a_t.cols(), 1);
    m.f_t = affine_block_value(echo, pen, scale, rho1, xt) + (a_vec.sum() - m.x_t.dot(kd.cwiseProduct(m.x_t))) / rho2;

    m.q16 = VecC::Zero(n);
    for (Index k = 0; k < echo.users(); ++k)
        m.q16 += scale * echo.Y[static_cast<std::size_t>(k)].adjoint() * echo.value(k, xt);

    const PenaltySums ps = penalty_sums(pen, n);
    m.r25 = ps.c1;
    m.R26 = ps.EE;
    m.lambda26 = lambda_max_hermitian(m.R26);
    m.q17 = m.r25 + (m.R26 - m.lambda26 * MatC::Identity(n, n)) * xt;
    m.q18 = kd.cwiseProduct(m.x_t);
    m.q19 = -2.0 * m.q16 + m.q17 / rho1 - (2.0 / rho2) * m.q18.cast<cd>();
    return m;
}

MatR ColumnMajorizer::cost_matrix() const { return unvec_columns(q19.real(), N); }

double ColumnMajorizer::surrogate(const VecR& a_a) const { return f_t + q19.real().dot(a_a - x_t); }

}  // namespace rdars
