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

#include "rdars/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace rdars {

SystemConfig paper_preset() { return SystemConfig{}; }

SystemConfig desk_preset()
{
    SystemConfig c;
    c.M = 8;
    c.N = 24;
    c.N1 = 6;
    c.N2 = 4;
    c.a = 2;
    c.K = 2;
    return c;
}

void broadcast_per_user(SystemConfig& config)
{
    const auto K = static_cast<std::size_t>(std::max(config.K, 0));
    if (config.sigma1_dbm.size() == 1) config.sigma1_dbm.assign(K, config.sigma1_dbm.front());
    if (config.gamma_bar_db.size() == 1) config.gamma_bar_db.assign(K, config.gamma_bar_db.front());
}

std::pair<int, int> near_square_factorization(int N)
{
    int n2 = static_cast<int>(std::floor(std::sqrt(static_cast<double>(N))));
    while (n2 > 1 && N % n2 != 0) --n2;
    n2 = std::max(n2, 1);
    return {N / n2, n2};
}

namespace {

void require(bool ok, const std::string& key, const std::string& message)
{
    if (!ok) throw ConfigError(key, message);
}

bool finite(const Vec3& v) { return v.allFinite(); }

}  // namespace

void validate(const SystemConfig& c)
{
    require(c.M >= 1, "M", "M must be >= 1");
    require(c.N1 >= 1 && c.N2 >= 1, "N1", "N1 and N2 must be >= 1");
    require(c.N == c.N1 * c.N2, "N", "N must equal N1*N2");
    require(c.a >= 1, "a", "a must be \xE2\x89\xA5 1");
    require(c.a <= c.N, "a", "a must be <= N");
    require(c.K >= 1, "K", "K must be >= 1");
    require(std::isfinite(c.P_dbm), "P_dbm", "P_dbm must be finite");
    require(c.sigma1_dbm.size() == static_cast<std::size_t>(c.K), "sigma1_dbm",
            "sigma1_dbm must have one entry or K entries");
    for (double s : c.sigma1_dbm) require(std::isfinite(s), "sigma1_dbm", "sigma1_dbm must be finite");
    require(std::isfinite(c.sigma2_dbm), "sigma2_dbm", "sigma2_dbm must be finite");
    require(c.gamma_bar_db.size() == static_cast<std::size_t>(c.K), "gamma_bar_db",
            "gamma_bar_db must have one entry or K entries");
    for (double g : c.gamma_bar_db)
        require(!std::isnan(g) && g != std::numeric_limits<double>::infinity(), "gamma_bar_db",
                "gamma_bar_db must be finite or -inf");
    require(std::isfinite(c.sigma_alpha_sq) && c.sigma_alpha_sq > 0.0, "sigma_alpha_sq",
            "sigma_alpha_sq must be > 0");
    require(c.kappa >= 0.0 && c.kappa <= 1.0, "kappa", "kappa must lie in [0, 1]");
    require(std::isfinite(c.spacing_ratio) && c.spacing_ratio > 0.0, "spacing_ratio",
            "spacing_ratio must be > 0");
    require(c.pathloss.d0_m > 0.0, "pathloss.d0_m", "pathloss.d0_m must be > 0");
    require(std::isfinite(c.pathloss.P0_db), "pathloss.P0_db", "pathloss.P0_db must be finite");
    require(c.penalty.rho1_init > 0.0, "penalty.rho1_init", "penalty.rho1_init must be > 0");
    require(c.penalty.rho2_init > 0.0, "penalty.rho2_init", "penalty.rho2_init must be > 0");
    require(c.penalty.c1 > 0.0 && c.penalty.c1 < 1.0, "penalty.c1", "penalty.c1 must lie in (0, 1)");
    require(c.penalty.c2 > 0.0 && c.penalty.c2 < 1.0, "penalty.c2", "penalty.c2 must lie in (0, 1)");
    require(c.penalty.rho_floor > 0.0, "penalty.rho_floor", "penalty.rho_floor must be > 0");
    require(c.stopping.rel_tol > 0.0, "stopping.rel_tol", "stopping.rel_tol must be > 0");
    require(c.stopping.residual_tol > 0.0, "stopping.residual_tol", "stopping.residual_tol must be > 0");
    require(c.stopping.max_iters >= 1, "stopping.max_iters", "stopping.max_iters must be >= 1");
    require(finite(c.placement.bs) && finite(c.placement.rdars) && finite(c.placement.target) &&
                finite(c.placement.user_center),
            "geometry", "positions must be finite");
    require(c.placement.user_radius >= 0.0, "geometry.user_radius", "geometry.user_radius must be >= 0");
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (trim(value.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(key, "cannot parse '" + value + "' as a number for key " + key);
}

int parse_int(const std::string& key, const std::string& value)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError(key, "cannot parse '" + value + "' as an integer for key " + key);
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError(key, "cannot parse '" + value + "' as an unsigned integer for key " + key);
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError(key, "empty list for key " + key);
    return out;
}

Vec3 parse_point(const std::string& key, const std::string& value)
{
    const auto v = parse_list(key, value);
    if (v.size() != 3) throw ConfigError(key, key + " expects three comma-separated coordinates");
    return {v[0], v[1], v[2]};
}

std::string fmt(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
    return out;
}

std::string fmt_point(const Vec3& p) { return fmt(p.x()) + "," + fmt(p.y()) + "," + fmt(p.z()); }

using Setter = std::function<void(SystemConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto dbl = [&t](const char* name, double SystemConfig::*field) {
            t[name] = [field](SystemConfig& c, const std::string& k, const std::string& v) {
                c.*field = parse_double(k, v);
            };
        };
        auto integer = [&t](const char* name, int SystemConfig::*field) {
            t[name] = [field](SystemConfig& c, const std::string& k, const std::string& v) {
                c.*field = parse_int(k, v);
            };
        };
        integer("M", &SystemConfig::M);
        integer("N", &SystemConfig::N);
        integer("N1", &SystemConfig::N1);
        integer("N2", &SystemConfig::N2);
        integer("a", &SystemConfig::a);
        integer("K", &SystemConfig::K);
        dbl("P_dbm", &SystemConfig::P_dbm);
        dbl("sigma2_dbm", &SystemConfig::sigma2_dbm);
        dbl("sigma_alpha_sq", &SystemConfig::sigma_alpha_sq);
        dbl("kappa", &SystemConfig::kappa);
        dbl("spacing_ratio", &SystemConfig::spacing_ratio);
        t["sigma1_dbm"] = [](SystemConfig& c, const std::string& k, const std::string& v) {
            c.sigma1_dbm = parse_list(k, v);
        };
        t["gamma_bar_db"] = [](SystemConfig& c, const std::string& k, const std::string& v) {
            c.gamma_bar_db = parse_list(k, v);
        };
        t["seed"] = [](SystemConfig& c, const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); };

        auto nested = [&t](const std::string& name, auto member, auto field) {
            t[name] = [member, field](SystemConfig& c, const std::string& k, const std::string& v) {
                (c.*member).*field = parse_double(k, v);
            };
        };
        nested("pathloss.P0_db", &SystemConfig::pathloss, &PathLossConfig::P0_db);
        nested("pathloss.d0_m", &SystemConfig::pathloss, &PathLossConfig::d0_m);
        nested("pathloss.alpha_hbr", &SystemConfig::pathloss, &PathLossConfig::alpha_hbr);
        nested("pathloss.alpha_hbt", &SystemConfig::pathloss, &PathLossConfig::alpha_hbt);
        nested("pathloss.alpha_hbu", &SystemConfig::pathloss, &PathLossConfig::alpha_hbu);
        nested("pathloss.alpha_hrt", &SystemConfig::pathloss, &PathLossConfig::alpha_hrt);
        nested("pathloss.alpha_hru", &SystemConfig::pathloss, &PathLossConfig::alpha_hru);
        nested("penalty.rho1_init", &SystemConfig::penalty, &PenaltyConfig::rho1_init);
        nested("penalty.rho2_init", &SystemConfig::penalty, &PenaltyConfig::rho2_init);
        nested("penalty.c1", &SystemConfig::penalty, &PenaltyConfig::c1);
        nested("penalty.c2", &SystemConfig::penalty, &PenaltyConfig::c2);
        nested("penalty.rho_floor", &SystemConfig::penalty, &PenaltyConfig::rho_floor);
        nested("stopping.rel_tol", &SystemConfig::stopping, &StoppingConfig::rel_tol);
        nested("stopping.residual_tol", &SystemConfig::stopping, &StoppingConfig::residual_tol);
        t["stopping.max_iters"] = [](SystemConfig& c, const std::string& k, const std::string& v) {
            c.stopping.max_iters = parse_int(k, v);
        };
        nested("geometry.user_radius", &SystemConfig::placement, &Placement::user_radius);
        auto point = [&t](const std::string& name, Vec3 Placement::*field) {
            t[name] = [field](SystemConfig& c, const std::string& k, const std::string& v) {
                c.placement.*field = parse_point(k, v);
            };
        };
        point("geometry.bs", &Placement::bs);
        point("geometry.rdars", &Placement::rdars);
        point("geometry.target", &Placement::target);
        point("geometry.user_center", &Placement::user_center);
        nested("angles.theta_br_d", &SystemConfig::angles, &FixedAngles::theta_br_d);
        nested("angles.theta_br_a", &SystemConfig::angles, &FixedAngles::theta_br_a);
        nested("angles.theta_rt_d", &SystemConfig::angles, &FixedAngles::theta_rt_d);
        nested("angles.psi_br_a", &SystemConfig::angles, &FixedAngles::psi_br_a);
        return t;
    }();
    return table;
}

}  // namespace

SystemConfig parse_config(const std::string& text, const SystemConfig& base)
{
    SystemConfig config = base;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ConfigError("line " + std::to_string(lineno), "malformed section header: " + stripped);
            section = trim(std::string_view(stripped).substr(1, stripped.size() - 2));
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno),
                              "expected 'key = value' on line " + std::to_string(lineno));
        std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (!section.empty()) key = section + "." + key;
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(key, "unknown configuration key: " + key);
        if (value.empty()) throw ConfigError(key, "missing value for key " + key);
        it->second(config, key, value);
        seen.insert(key);
    }

    const bool has_n = seen.count("N") != 0;
    const bool has_grid = seen.count("N1") != 0 || seen.count("N2") != 0;
    if (has_n && !has_grid) {
        std::tie(config.N1, config.N2) = near_square_factorization(std::max(config.N, 1));
    } else if (has_grid && !has_n) {
        config.N = config.N1 * config.N2;
    }
    if (seen.count("K") != 0) {
        // A new K resizes per-user lists that were inherited from the base.
        if (seen.count("sigma1_dbm") == 0 && !config.sigma1_dbm.empty())
            config.sigma1_dbm.assign(static_cast<std::size_t>(std::max(config.K, 0)), config.sigma1_dbm.front());
        if (seen.count("gamma_bar_db") == 0 && !config.gamma_bar_db.empty())
            config.gamma_bar_db.assign(static_cast<std::size_t>(std::max(config.K, 0)), config.gamma_bar_db.front());
    }
    broadcast_per_user(config);
    validate(config);
    return config;
}

SystemConfig load_config(const std::filesystem::path& path, const SystemConfig& base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("path", "cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), base);
}

std::string serialize_config(const SystemConfig& c)
{
    std::ostringstream out;
    out << "M = " << c.M << "\n"
        << "N = " << c.N << "\n"
        << "N1 = " << c.N1 << "\n"
        << "N2 = " << c.N2 << "\n"
        << "a = " << c.a << "\n"
        << "K = " << c.K << "\n"
        << "P_dbm = " << fmt(c.P_dbm) << "\n"
        << "sigma1_dbm = " << fmt_list(c.sigma1_dbm) << "\n"
        << "sigma2_dbm = " << fmt(c.sigma2_dbm) << "\n"
        << "gamma_bar_db = " << fmt_list(c.gamma_bar_db) << "\n"
        << "sigma_alpha_sq = " << fmt(c.sigma_alpha_sq) << "\n"
        << "kappa = " << fmt(c.kappa) << "\n"
        << "spacing_ratio = " << fmt(c.spacing_ratio) << "\n"
        << "seed = " << c.seed << "\n"
        << "\n[pathloss]\n"
        << "P0_db = " << fmt(c.pathloss.P0_db) << "\n"
        << "d0_m = " << fmt(c.pathloss.d0_m) << "\n"
        << "alpha_hbr = " << fmt(c.pathloss.alpha_hbr) << "\n"
        << "alpha_hbt = " << fmt(c.pathloss.alpha_hbt) << "\n"
        << "alpha_hbu = " << fmt(c.pathloss.alpha_hbu) << "\n"
        << "alpha_hrt = " << fmt(c.pathloss.alpha_hrt) << "\n"
        << "alpha_hru = " << fmt(c.pathloss.alpha_hru) << "\n"
        << "\n[penalty]\n"
        << "rho1_init = " << fmt(c.penalty.rho1_init) << "\n"
        << "rho2_init = " << fmt(c.penalty.rho2_init) << "\n"
        << "c1 = " << fmt(c.penalty.c1) << "\n"
        << "c2 = " << fmt(c.penalty.c2) << "\n"
        << "rho_floor = " << fmt(c.penalty.rho_floor) << "\n"
        << "\n[stopping]\n"
        << "rel_tol = " << fmt(c.stopping.rel_tol) << "\n"
        << "residual_tol = " << fmt(c.stopping.residual_tol) << "\n"
        << "max_iters = " << c.stopping.max_iters << "\n"
        << "\n[geometry]\n"
        << "bs = " << fmt_point(c.placement.bs) << "\n"
        << "rdars = " << fmt_point(c.placement.rdars) << "\n"
        << "target = " << fmt_point(c.placement.target) << "\n"
        << "user_center = " << fmt_point(c.placement.user_center) << "\n"
        << "user_radius = " << fmt(c.placement.user_radius) << "\n"
        << "\n[angles]\n"
        << "theta_br_d = " << fmt(c.angles.theta_br_d) << "\n"
        << "theta_br_a = " << fmt(c.angles.theta_br_a) << "\n"
        << "theta_rt_d = " << fmt(c.angles.theta_rt_d) << "\n"
        << "psi_br_a = " << fmt(c.angles.psi_br_a) << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Geometry

double bs_azimuth(const Vec3& from, const Vec3& to)
{
    const Vec3 d = to - from;
    return std::atan2(-d.x(), d.y());
}

double rdars_azimuth(const Vec3& from, const Vec3& to)
{
    const Vec3 d = to - from;
    return std::atan2(d.y(), d.x());
}

double rdars_elevation(const Vec3& from, const Vec3& to)
{
    const Vec3 d = to - from;
    return std::atan2(-d.z(), d.head<2>().norm());
}

Geometry derive_geometry(const SystemConfig& config, const Placement& placement)
{
    if (!placement.bs.allFinite() || !placement.rdars.allFinite() || !placement.target.allFinite() ||
        !placement.user_center.allFinite())
        throw GeometryError("positions must be finite");
    if ((placement.bs - placement.rdars).norm() == 0.0)
        throw GeometryError("BS and RDARS positions coincide");
    if ((placement.bs - placement.target).norm() == 0.0 || (placement.rdars - placement.target).norm() == 0.0)
        throw GeometryError("target coincides with an array position");

    Geometry g;
    g.pos_bs = placement.bs;
    g.pos_rdars = placement.rdars;
    g.pos_target = placement.target;
    g.user_center = placement.user_center;
    g.user_radius = placement.user_radius;

    g.d_br = (placement.rdars - placement.bs).head<2>().norm();
    g.d_rt = (placement.target - placement.rdars).head<2>().norm();
    g.d_H = placement.bs.z();

    g.dist_bs_rdars = (placement.rdars - placement.bs).norm();
    g.dist_bs_target = (placement.target - placement.bs).norm();
    g.dist_rdars_target = (placement.target - placement.rdars).norm();

    g.theta_br_d = config.angles.theta_br_d;
    g.theta_br_a = config.angles.theta_br_a;
    g.psi_br_a = config.angles.psi_br_a;
    g.theta_rt_d = config.angles.theta_rt_d;
    g.theta_bt_d = std::atan2(g.d_br, g.d_rt);
    g.psi_rt_d = std::atan2(g.d_H, g.d_rt);
    return g;
}

}  // namespace rdars
