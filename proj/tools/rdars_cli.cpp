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

#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rdars/harness.hpp"
#include "rdars/scenario.hpp"
#include "rdars/schemes.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct RunOptions {
    std::string config_path;
    std::string experiment = "power";
    std::string schemes;
    std::string preset = "desk";
    std::vector<double> grid;
    int trials = 20;
    std::uint64_t seed = 1;
    std::string out = "out";
    unsigned threads = 0;
    bool timing = false;
    bool quiet = false;
};

int run(const RunOptions& o)
{
    using namespace rdars;
    SystemConfig base;
    if (o.preset == "paper")
        base = paper_preset();
    else if (o.preset == "desk")
        base = desk_preset();
    else
        throw ConfigError("preset", "unknown preset '" + o.preset + "'");
    if (!o.config_path.empty()) base = load_config(o.config_path, base);
    validate(base);

    ExperimentSpec spec;
    spec.kind = parse_experiment(o.experiment);
    spec.base = base;
    spec.grid = o.grid.empty() ? default_grid(spec.kind, base) : o.grid;
    spec.schemes = o.schemes.empty() ? default_schemes(spec.kind) : parse_scheme_list(o.schemes);
    spec.trials = o.trials;
    spec.master_seed = o.seed;
    spec.timing = o.timing;
    spec.threads = o.threads;
    if (!o.quiet)
        spec.progress = [](std::size_t done, std::size_t total) {
            std::fprintf(stderr, "\r%zu/%zu", done, total);
            if (done == total) std::fputc('\n', stderr);
        };

    const ExperimentResult result = run_experiment(spec);
    emit_outputs(result, o.out);

    std::size_t failed = 0;
    for (const auto& r : result.records) failed += r.feasible ? 0 : 1;
    if (!o.quiet)
        std::fprintf(stderr, "%zu records written to %s (%zu infeasible)\n", result.records.size(), o.out.c_str(),
                     failed);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"RDARS-aided ISAC beamforming and mode-selection simulator"};
    app.require_subcommand(1);

    RunOptions o;
    CLI::App* cmd = app.add_subcommand("run", "Run a Monte Carlo experiment and write CSV/JSON outputs");
    cmd->add_option("--config", o.config_path, "Config file applied on top of the preset")->check(CLI::ExistingFile);
    cmd->add_option("--experiment", o.experiment,
                    "convergence | power | elements | sinr | fixed-vs-opt-A | beampattern")
        ->capture_default_str();
    cmd->add_option("--schemes", o.schemes, "Comma-separated scheme names (default depends on the experiment)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per sweep point")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    cmd->add_option("--preset", o.preset, "Base parameters: desk or paper")->capture_default_str();
    cmd->add_option("--grid", o.grid, "Override the sweep grid")->delimiter(',');
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
    cmd->add_flag("--timing", o.timing, "Record wall-clock time per run (makes records.csv non-deterministic)");
    cmd->add_flag("--quiet", o.quiet, "No progress output");

    CLI::App* show = app.add_subcommand("show-config", "Print the effective configuration");
    std::string show_preset = "desk";
    std::string show_path;
    show->add_option("--preset", show_preset)->capture_default_str();
    show->add_option("--config", show_path)->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*show) {
            rdars::SystemConfig c = show_preset == "paper" ? rdars::paper_preset() : rdars::desk_preset();
            if (!show_path.empty()) c = rdars::load_config(show_path, c);
            rdars::validate(c);
            std::cout << rdars::serialize_config(c);
            return 0;
        }
        return run(o);
    } catch (const rdars::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const rdars::GeometryError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kExitSolver;
    }
}
