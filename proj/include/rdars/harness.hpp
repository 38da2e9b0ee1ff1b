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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rdars/optimizer.hpp"
#include "rdars/scenario.hpp"
#include "rdars/schemes.hpp"

namespace rdars {

enum class ExperimentKind { convergence, power, elements, sinr, fixed_vs_opt_a, beampattern };

std::string experiment_name(ExperimentKind kind);
/// Throws ConfigError("experiment", ...) for unknown names.
ExperimentKind parse_experiment(std::string_view name);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::power;
    std::vector<double> grid;  // dBm, element count or dB depending on kind
    std::vector<SchemeSpec> schemes;
    int trials = 1;
    SystemConfig base;
    std::uint64_t master_seed = 0;
    bool timing = false;   // measure wall_ms; otherwise it is written as 0
    unsigned threads = 0;  // 0 = hardware concurrency
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Default sweep grid and scheme list for a kind, relative to `base`.
std::vector<double> default_grid(ExperimentKind kind, const SystemConfig& base);
std::vector<SchemeSpec> default_schemes(ExperimentKind kind);

/// Throws ConfigError for an empty grid, trials < 1 or no schemes.
void validate(const ExperimentSpec& spec);

/// The base configuration moved to one sweep point.
SystemConfig config_at(const ExperimentSpec& spec, double sweep_value);
std::uint64_t trial_seed(std::uint64_t master_seed, int trial);

struct ExperimentRecord {
    std::string scheme;
    int trial = 0;
    std::uint64_t seed = 0;
    double sweep_value = 0.0;
    double radar_snr_db = 0.0;
    double min_sinr_db = 0.0;
    double comm_residual = 0.0;
    double selection_residual = 0.0;
    int iterations = 0;
    double wall_ms = 0.0;
    bool feasible = true;  // false rows carry NaN metrics
};

struct TraceArtifact {
    std::string scheme;
    int trial = 0;
    double sweep_value = 0.0;
    std::vector<TraceRow> rows;
};

struct BeampatternArtifact {
    std::string scheme;
    int trial = 0;
    VecR bs_theta;
    VecR bs_gain_db;
    VecR rdars_theta;
    VecR rdars_psi;
    MatR rdars_gain_db;  // rdars_theta x rdars_psi
};

struct ExperimentResult {
    ExperimentKind kind = ExperimentKind::power;
    std::vector<ExperimentRecord> records;  // sorted by (sweep point, trial, scheme order)
    std::vector<TraceArtifact> traces;
    std::vector<BeampatternArtifact> beampatterns;
};

/// Runs every scheme on paired channels for each (sweep value, trial).
/// Infeasible runs become rows with feasible = false; other solver errors propagate.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Mean and standard error (s / sqrt(n)) of one metric over trials.
struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    int count = 0;
};
MeanStderr mean_stderr(const std::vector<double>& values);

struct SummaryPoint {
    std::string scheme;
    double sweep_value = 0.0;
    int failed = 0;
    MeanStderr radar_snr_db;
    MeanStderr min_sinr_db;
};
/// Grouped by (scheme, sweep value), infeasible rows excluded from the statistics.
std::vector<SummaryPoint> summarize(const std::vector<ExperimentRecord>& records);

inline constexpr const char* kRecordsHeader =
    "scheme,trial,seed,sweep_value,radar_snr_db,min_sinr_db,comm_residual,selection_residual,iterations,wall_ms";

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
std::string summary_json(const ExperimentResult& result);

/// Writes records.csv, summary.json, trace_<scheme>_<trial>.csv and beampattern CSVs.
void emit_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir);

}  // namespace rdars
