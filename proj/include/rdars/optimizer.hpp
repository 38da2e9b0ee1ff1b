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
#include <optional>
#include <string>
#include <vector>

#include "rdars/channel.hpp"
#include "rdars/scenario.hpp"
#include "rdars/socp.hpp"
#include "rdars/surrogate.hpp"
#include "rdars/types.hpp"

namespace rdars {

/// A (possibly constrained) instance of the joint problem. Built from a
/// SystemConfig directly or through a scheme.
struct OptimizerSettings {
    double power_w = 0.1;
    std::vector<double> sigma1_sq;
    double sigma2_sq = 1e-11;
    std::vector<double> gamma_bar;  // linear; 0 disables the user's constraint
    double sigma_alpha_sq = 1.0;
    Index connected = 3;
    PenaltyConfig penalty;
    StoppingConfig stopping;
    std::uint64_t seed = 0;

    bool optimize_phase = true;
    bool optimize_selection = true;
    bool enforce_sinr = true;
    bool reflection_enabled = true;
};

OptimizerSettings settings_from_config(const SystemConfig& config);

struct Beamformer {
    MatC F;  // (M + a) x K
    VecC w;  // M
};

struct AuxiliaryState {
    MatC s;   // K x K
    VecR mu;  // K
    std::vector<bool> infeasible;
};

struct PenaltySchedule {
    double rho1 = 1e3;
    double rho2 = 1e5;
    double c1 = 0.8;
    double c2 = 0.8;
    double floor = 1e-8;

    void decay();
};

struct TraceRow {
    int iter = 0;
    double radar_snr_db = 0.0;
    double penalized_obj = 0.0;
    double comm_residual = 0.0;
    double selection_residual = 0.0;
    double min_sinr_db = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

/// Penalized objective before and after one block step at fixed penalties.
struct DescentRecord {
    int iter = 0;
    std::string block;
    double before = 0.0;
    double after = 0.0;
};

struct JointSolution {
    Beamformer beamformer;
    RdarsState state;
    AuxiliaryState aux;
    PenaltySchedule penalty;
    std::vector<TraceRow> trace;
    std::vector<DescentRecord> descent;
    int iterations = 0;
    bool converged = false;
    double radar_snr = 0.0;  // linear
    VecR sinr;               // linear, per user
    double comm_residual = 0.0;
    double selection_residual = 0.0;
};

/// Raised when the beamforming SOCP becomes infeasible mid-run.
class OptimizationAborted : public InfeasibleError {
public:
    OptimizationAborted(int iteration, JointSolution last, const std::string& what)
        : InfeasibleError(what), iteration_(iteration), last_(std::move(last)) {}
    int iteration() const noexcept { return iteration_; }
    const JointSolution& last_feasible() const noexcept { return last_; }

private:
    int iteration_;
    JointSolution last_;
};

// ---------------------------------------------------------------------------
// Block updates

/// Unit-norm principal eigenvector of H2 F F^H H2^H with its largest entry made real positive.
VecC update_receive_filter(const MatC& H2, const MatC& F);

/// Data of the linearized transmit problem: maximize Re{c^H f} over the
/// per-user cones and ||f||^2 <= P, with f = vec(F).
struct BeamformingProblem {
    VecC c;  // C f_t
    std::vector<VecC> h1;
    std::vector<double> gamma_bar;
    std::vector<double> sigma1_sq;
    double power = 0.0;

    Index users() const { return static_cast<Index>(h1.size()); }
    Index rows() const { return h1.empty() ? 0 : h1.front().size(); }
    bool constrained() const;
};

BeamformingProblem build_beamforming_problem(const VecC& w, const MatC& H2, const MatC& F_t,
                                             const std::vector<VecC>& h1, const std::vector<double>& gamma_bar,
                                             const std::vector<double>& sigma1_sq, double power);

/// Real-embedded SOCP over x = [Re f; Im f] / sqrt(P). The objective vector
/// is normalized; the cone for user k is the real-part restriction of its SINR constraint.
LinearSocp beamforming_socp(const BeamformingProblem& problem);
VecR embed_beamformer(const MatC& F, double power);
MatC extract_beamformer(const VecR& x, Index rows, Index users, double power);

/// Rotates every column so that h_k^T f_k is real and non-negative.
MatC phase_align(const MatC& F, const std::vector<VecC>& h1);

/// Solves the linearized transmit problem; closed form when no user is constrained.
MatC update_transmit_beamformer(const MatC& F_prev, const BeamformingProblem& problem);

/// Minimum-power beamformer meeting every SINR target, or InfeasibleError.
MatC minimum_power_beamformer(const std::vector<VecC>& h1, const std::vector<double>& gamma_bar,
                              const std::vector<double>& sigma1_sq, double power);

/// f_mu for user k given t_i = h_k^T f_i.
double auxiliary_fmu(const RowC& t, Index k, double gamma, double sigma_sq, double mu);
AuxiliaryState update_auxiliary(const std::vector<VecC>& h1, const MatC& F, const std::vector<double>& gamma_bar,
                                const std::vector<double>& sigma1_sq);

/// phi* = -exp(j arg q5); entries with q5 = 0 keep their previous phase.
VecC phase_alignment_solution(const VecC& q5, const VecC& phi_prev);
VecC update_reflection(const PhiMajorizer& majorizer);

/// Indicator of the `a_count` smallest entries of cost (ties go to the lower index).
VecR smallest_entries_indicator(const VecR& cost, Index a_count);
VecR update_mode_selection(const SelectionMajorizer& majorizer, Index a_count);
MatR update_selection_columns(const ColumnMajorizer& majorizer);

struct InitialPoint {
    Beamformer beamformer;
    RdarsState state;
    AuxiliaryState aux;
};

/// Random phases from the settings seed, first `connected` elements selected,
/// minimum-power beamformer scaled to full power.
InitialPoint initialize(const OptimizerSettings& settings, const ChannelSet& channels);

/// The channel set actually seen by the optimizer (H_br removed when reflection is disabled).
ChannelSet effective_channels(const OptimizerSettings& settings, const ChannelSet& channels);

/// Block coordinate descent over (w, F, phi, s, a, A_a) with decaying penalties.
JointSolution run_joint_optimization(const OptimizerSettings& settings, const ChannelSet& channels);
JointSolution run_joint_optimization(const SystemConfig& config, const ChannelSet& channels);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace rdars
