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
#include <string>
#include <vector>

#include "rdars/types.hpp"

namespace rdars {

using Vec3 = Eigen::Vector3d;

/// Distance-based path-loss model P0 (d/d0)^-alpha with one exponent per link.
struct PathLossConfig {
    double P0_db = -30.0;
    double d0_m = 1.0;
    double alpha_hbr = 2.4;
    double alpha_hbt = 2.3;
    double alpha_hbu = 3.0;
    double alpha_hrt = 2.0;
    double alpha_hru = 2.6;

    bool operator==(const PathLossConfig&) const = default;
};

struct PenaltyConfig {
    double rho1_init = 1e3;
    double rho2_init = 1e5;
    double c1 = 0.8;
    double c2 = 0.8;
    double rho_floor = 1e-8;

    bool operator==(const PenaltyConfig&) const = default;
};

struct StoppingConfig {
    double rel_tol = 1e-4;
    double residual_tol = 1e-6;
    int max_iters = 200;

    bool operator==(const StoppingConfig&) const = default;
};

/// Node placement in meters. Users are dropped uniformly in a horizontal disk.
struct Placement {
    Vec3 bs{15.0, 0.0, 5.0};
    Vec3 rdars{0.0, 0.0, 5.0};
    Vec3 target{0.0, 10.0, 0.0};
    Vec3 user_center{50.0, 50.0, 0.0};
    double user_radius = 5.0;

    bool operator==(const Placement&) const = default;
};

/// Angles that are fixed by configuration rather than derived from positions (rad).
struct FixedAngles {
    double theta_br_d = kPi / 2.0;
    double theta_br_a = kPi / 4.0;
    double theta_rt_d = kPi / 4.0;
    double psi_br_a = 0.0;

    bool operator==(const FixedAngles&) const = default;
};

/// Every scalar parameter of an experiment. Powers are stored in dBm / dB exactly
/// as configured; use the accessors for linear (watt) values.
struct SystemConfig {
    int M = 16;
    int N = 120;
    int N1 = 12;
    int N2 = 10;
    int a = 3;
    int K = 2;
    double P_dbm = 20.0;
    std::vector<double> sigma1_dbm{-80.0, -80.0};
    double sigma2_dbm = -80.0;
    std::vector<double> gamma_bar_db{10.0, 10.0};
    double sigma_alpha_sq = 1.0;
    double kappa = 0.5;
    double spacing_ratio = 0.5;
    PathLossConfig pathloss;
    PenaltyConfig penalty;
    StoppingConfig stopping;
    Placement placement;
    FixedAngles angles;
    std::uint64_t seed = 0;

    double power_watts() const { return dbm_to_watts(P_dbm); }
    double sigma1_sq(int k) const { return dbm_to_watts(sigma1_dbm.at(static_cast<std::size_t>(k))); }
    double sigma2_sq() const { return dbm_to_watts(sigma2_dbm); }
    /// Linear SINR target; 0 when the configured threshold is -inf dB.
    double gamma_bar(int k) const { return db_to_linear(gamma_bar_db.at(static_cast<std::size_t>(k))); }

    bool operator==(const SystemConfig&) const = default;
};

/// Full-scale parameters (M=16, N=120, a=3, P=20 dBm, -80 dBm noise, 10 dB targets).
SystemConfig paper_preset();
/// Small scenario used for fast experiments: M=8, N=24 (6x4), a=2, K=2.
SystemConfig desk_preset();

/// Broadcasts length-1 per-user vectors to K entries. Call after changing K.
void broadcast_per_user(SystemConfig& config);

/// Throws ConfigError naming the first violated key.
void validate(const SystemConfig& config);

/// Chooses N1 x N2 = N with N2 the largest divisor not exceeding sqrt(N).
std::pair<int, int> near_square_factorization(int N);

/// Parses the key/value format documented in docs/config.md on top of `base`.
SystemConfig parse_config(const std::string& text, const SystemConfig& base = paper_preset());
SystemConfig load_config(const std::filesystem::path& path, const SystemConfig& base = paper_preset());
/// Writes every key; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SystemConfig& config);

struct Geometry {
    Vec3 pos_bs;
    Vec3 pos_rdars;
    Vec3 pos_target;
    Vec3 user_center;
    double user_radius = 0.0;

    double d_br = 0.0;  // horizontal BS-RDARS distance
    double d_rt = 0.0;  // horizontal RDARS-target distance
    double d_H = 0.0;   // BS height

    double dist_bs_rdars = 0.0;  // 3D link lengths for path loss
    double dist_bs_target = 0.0;
    double dist_rdars_target = 0.0;

    double theta_br_d = 0.0;
    double theta_br_a = 0.0;
    double psi_br_a = 0.0;
    double theta_rt_d = 0.0;
    double psi_rt_d = 0.0;
    double theta_bt_d = 0.0;
};

Geometry derive_geometry(const SystemConfig& config, const Placement& placement);
inline Geometry derive_geometry(const SystemConfig& config) { return derive_geometry(config, config.placement); }

/// Azimuth of `to` seen from the BS array: measured from +y toward -x.
double bs_azimuth(const Vec3& from, const Vec3& to);
/// Azimuth / depression angle of `to` seen from the RDARS aperture.
double rdars_azimuth(const Vec3& from, const Vec3& to);
double rdars_elevation(const Vec3& from, const Vec3& to);

}  // namespace rdars
