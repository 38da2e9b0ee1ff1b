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

#include "rdars/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "rdars/channel.hpp"
#include "rdars/metrics.hpp"
#include "rdars/random.hpp"

namespace rdars {

namespace {

struct KindName {
    ExperimentKind kind;
    const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::convergence, "convergence"},   {ExperimentKind::power, "power"},
    {ExperimentKind::elements, "elements"},         {ExperimentKind::sinr, "sinr"},
    {ExperimentKind::fixed_vs_opt_a, "fixed-vs-opt-A"}, {ExperimentKind::beampattern, "beampattern"},
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

VecR linspace(double lo, double hi, Index n)
{
    return VecR::LinSpaced(n, lo, hi);
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string experiment_name(ExperimentKind kind)
{
    for (const auto& k : kKinds)
        if (k.kind == kind) return k.name;
    return "unknown";
}

ExperimentKind parse_experiment(std::string_view name)
{
    for (const auto& k : kKinds)
        if (name == k.name) return k.kind;
    if (name == "fixed-vs-opt-a") return ExperimentKind::fixed_vs_opt_a;
    throw ConfigError("experiment", "unknown experiment kind '" + std::string(name) + "'");
}

std::vector<double> default_grid(ExperimentKind kind, const SystemConfig& base)
{
    switch (kind) {
    case ExperimentKind::power:
    case ExperimentKind::fixed_vs_opt_a:
        return {10.0, 15.0, 20.0, 25.0, 30.0};
    case ExperimentKind::elements: {
        const double n = base.N;
        return {n / 2.0, n, 1.5 * n, 2.0 * n};
    }
    case ExperimentKind::sinr:
        return {0.0, 5.0, 10.0, 15.0, 20.0};
    case ExperimentKind::convergence:
    case ExperimentKind::beampattern:
        return {base.P_dbm};
    }
    return {};
}

std::vector<SchemeSpec> default_schemes(ExperimentKind kind)
{
    std::vector<Scheme> ids;
    switch (kind) {
    case ExperimentKind::convergence:
        ids = {Scheme::rdars_isac};
        break;
    case ExperimentKind::fixed_vs_opt_a:
        ids = {Scheme::rdars_isac, Scheme::rdars_isac_fixed_a};
        break;
    case ExperimentKind::beampattern:
        ids = {Scheme::rdars_isac, Scheme::rdars_sensing_opt};
        break;
    default:
        ids = {Scheme::rdars_isac,       Scheme::rdars_isac_random_phase, Scheme::rdars_sensing_opt,
               Scheme::rdars_sensing_random, Scheme::das_isac,           Scheme::das_sensing,
               Scheme::passive_ris_isac};
    }
    std::vector<SchemeSpec> out;
    for (Scheme id : ids) out.push_back(scheme_spec(id));
    return out;
}

void validate(const ExperimentSpec& spec)
{
    if (spec.grid.empty()) throw ConfigError("grid", "sweep grid is empty");
    if (spec.trials < 1) throw ConfigError("trials", "trials must be at least 1");
    if (spec.schemes.empty()) throw ConfigError("schemes", "no schemes selected");
    for (const auto& s : spec.schemes) check_scheme(s);
    for (double v : spec.grid) validate(config_at(spec, v));
}

SystemConfig config_at(const ExperimentSpec& spec, double v)
{
    SystemConfig c = spec.base;
    switch (spec.kind) {
    case ExperimentKind::power:
    case ExperimentKind::fixed_vs_opt_a:
        c.P_dbm = v;
        break;
    case ExperimentKind::elements: {
        if (v != std::floor(v) || v < 1.0) throw ConfigError("grid", "element counts must be positive integers");
        c.N = static_cast<int>(v);
        std::tie(c.N1, c.N2) = near_square_factorization(c.N);
        break;
    }
    case ExperimentKind::sinr:
        std::fill(c.gamma_bar_db.begin(), c.gamma_bar_db.end(), v);
        break;
    case ExperimentKind::convergence:
    case ExperimentKind::beampattern:
        c.P_dbm = v;
        break;
    }
    return c;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int trial)
{
    return derive_seed(master_seed, static_cast<std::uint64_t>(trial));
}

namespace {

struct TaskOutput {
    std::vector<ExperimentRecord> records;
    std::vector<TraceArtifact> traces;
    std::vector<BeampatternArtifact> beampatterns;
};

BeampatternArtifact beampattern_of(const std::string& scheme, int trial, const SystemConfig& config,
                                   const ChannelSet& ch, const JointSolution& sol)
{
    BeampatternArtifact b;
    b.scheme = scheme;
    b.trial = trial;
    b.bs_theta = linspace(-kPi / 2.0, kPi / 2.0, 361);
    b.bs_gain_db = beampattern_bs<double>(sol.beamformer.F, ch.M(), b.bs_theta, config.spacing_ratio);
    b.rdars_theta = linspace(-kPi / 2.0, kPi / 2.0, 181);
    b.rdars_psi = linspace(-kPi / 2.0, kPi / 2.0, 91);
    b.rdars_gain_db = beampattern_rdars<double>(sol.beamformer.F, ch.H_br, sol.state.phi, sol.state.a_vec,
                                                sol.state.A_a, config.N1, config.N2, b.rdars_theta, b.rdars_psi,
                                                config.spacing_ratio);
    return b;
}

TaskOutput run_task(const ExperimentSpec& spec, double value, int trial)
{
    TaskOutput out;
    SystemConfig config = config_at(spec, value);
    const std::uint64_t seed = trial_seed(spec.master_seed, trial);
    config.seed = seed;
    const ChannelSet channels = synthesize_channels(config, derive_geometry(config), seed);

    for (const SchemeSpec& scheme : spec.schemes) {
        const OptimizerSettings settings = apply_scheme(scheme, config);
        ExperimentRecord rec;
        rec.scheme = scheme.name();
        rec.trial = trial;
        rec.seed = seed;
        rec.sweep_value = value;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const JointSolution sol = run_joint_optimization(settings, channels);
            rec.radar_snr_db = linear_to_db(sol.radar_snr);
            rec.min_sinr_db = sol.sinr.size() ? linear_to_db(sol.sinr.minCoeff()) : kNaN;
            rec.comm_residual = sol.comm_residual;
            rec.selection_residual = sol.selection_residual;
            rec.iterations = sol.iterations;
            if (spec.kind == ExperimentKind::convergence)
                out.traces.push_back({rec.scheme, trial, value, sol.trace});
            if (spec.kind == ExperimentKind::beampattern)
                out.beampatterns.push_back(beampattern_of(rec.scheme, trial, config, effective_channels(settings, channels), sol));
        } catch (const OptimizationAborted& e) {
            rec.feasible = false;
            rec.radar_snr_db = rec.min_sinr_db = rec.comm_residual = rec.selection_residual = kNaN;
            rec.iterations = e.iteration();
        } catch (const InfeasibleError&) {
            rec.feasible = false;
            rec.radar_snr_db = rec.min_sinr_db = rec.comm_residual = rec.selection_residual = kNaN;
            rec.iterations = 0;
        }
        if (spec.timing)
            rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec)
{
    validate(spec);
    struct Task {
        double value;
        int trial;
    };
    std::vector<Task> tasks;
    for (double v : spec.grid)
        for (int t = 0; t < spec.trials; ++t) tasks.push_back({v, t});

    std::vector<TaskOutput> outputs(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::exception_ptr failure;
    std::mutex mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            {
                std::lock_guard lock(mutex);
                if (failure) return;
            }
            try {
                outputs[i] = run_task(spec, tasks[i].value, tasks[i].trial);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (spec.progress) {
                std::lock_guard lock(mutex);
                spec.progress(d, tasks.size());
            }
        }
    };

    unsigned n = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, tasks.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    // Task order is already (sweep point, trial); scheme order follows the spec.
    ExperimentResult result;
    result.kind = spec.kind;
    for (auto& o : outputs) {
        for (auto& r : o.records) result.records.push_back(std::move(r));
        for (auto& t : o.traces) result.traces.push_back(std::move(t));
        for (auto& b : o.beampatterns) result.beampatterns.push_back(std::move(b));
    }
    return result;
}

MeanStderr mean_stderr(const std::vector<double>& values)
{
    MeanStderr m;
    m.count = static_cast<int>(values.size());
    if (values.empty()) {
        m.mean = m.stderr_ = kNaN;
        return m;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    m.mean = sum / m.count;
    if (m.count < 2) return m;
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.stderr_ = std::sqrt(ss / (m.count - 1)) / std::sqrt(static_cast<double>(m.count));
    return m;
}

std::vector<SummaryPoint> summarize(const std::vector<ExperimentRecord>& records)
{
    // Preserve first-appearance order of schemes and sweep values.
    std::vector<std::pair<std::string, double>> keys;
    std::map<std::pair<std::string, double>, std::vector<const ExperimentRecord*>> groups;
    for (const auto& r : records) {
        const auto key = std::make_pair(r.scheme, r.sweep_value);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) keys.push_back(key);
        it->second.push_back(&r);
    }
    std::vector<SummaryPoint> out;
    for (const auto& key : keys) {
        SummaryPoint p;
        p.scheme = key.first;
        p.sweep_value = key.second;
        std::vector<double> snr;
        std::vector<double> sinr;
        for (const ExperimentRecord* r : groups[key]) {
            if (!r->feasible) {
                ++p.failed;
                continue;
            }
            snr.push_back(r->radar_snr_db);
            if (std::isfinite(r->min_sinr_db)) sinr.push_back(r->min_sinr_db);
        }
        p.radar_snr_db = mean_stderr(snr);
        p.min_sinr_db = mean_stderr(sinr);
        out.push_back(std::move(p));
    }
    return out;
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records)
{
    out << kRecordsHeader << '\n';
    for (const auto& r : records) {
        out << r.scheme << ',' << r.trial << ',' << r.seed << ',' << fmt(r.sweep_value) << ','
            << fmt(r.radar_snr_db) << ',' << fmt(r.min_sinr_db) << ',' << fmt(r.comm_residual) << ','
            << fmt(r.selection_residual) << ',' << r.iterations << ',' << fmt(r.wall_ms) << '\n';
    }
}

std::string summary_json(const ExperimentResult& result)
{
    using nlohmann::json;
    auto stat = [](const MeanStderr& m) {
        json j;
        j["mean"] = std::isfinite(m.mean) ? json(m.mean) : json(nullptr);
        j["stderr"] = m.count >= 2 ? json(m.stderr_) : json(nullptr);
        j["count"] = m.count;
        return j;
    };
    json points = json::array();
    for (const auto& p : summarize(result.records)) {
        points.push_back({{"scheme", p.scheme},
                          {"sweep_value", p.sweep_value},
                          {"failed", p.failed},
                          {"radar_snr_db", stat(p.radar_snr_db)},
                          {"min_sinr_db", stat(p.min_sinr_db)}});
    }
    json doc;
    doc["experiment"] = experiment_name(result.kind);
    doc["aggregation"] = "arithmetic mean of dB values; stderr = sample std / sqrt(n)";
    doc["points"] = std::move(points);
    return doc.dump(2) + "\n";
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

}  // namespace

void emit_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    {
        auto f = open_out(out_dir / "records.csv");
        write_records_csv(f, result.records);
    }
    {
        auto f = open_out(out_dir / "summary.json");
        f << summary_json(result);
    }
    for (const auto& t : result.traces) {
        auto f = open_out(out_dir / ("trace_" + t.scheme + "_" + std::to_string(t.trial) + ".csv"));
        write_trace_csv(f, t.rows);
    }
    for (const auto& b : result.beampatterns) {
        const std::string tag = b.scheme + "_" + std::to_string(b.trial) + ".csv";
        {
            auto f = open_out(out_dir / ("beampattern_bs_" + tag));
            f << "theta_rad,gain_db\n";
            for (Index i = 0; i < b.bs_theta.size(); ++i) f << fmt(b.bs_theta(i)) << ',' << fmt(b.bs_gain_db(i)) << '\n';
        }
        auto f = open_out(out_dir / ("beampattern_rdars_" + tag));
        f << "theta_rad,psi_rad,gain_db\n";
        for (Index i = 0; i < b.rdars_theta.size(); ++i)
            for (Index j = 0; j < b.rdars_psi.size(); ++j)
                f << fmt(b.rdars_theta(i)) << ',' << fmt(b.rdars_psi(j)) << ',' << fmt(b.rdars_gain_db(i, j)) << '\n';
    }
}

}  // namespace rdars
