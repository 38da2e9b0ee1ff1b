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
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rdars {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Double-precision working set used by the optimizer.
using cd = std::complex<double>;
using VecC = CVector<double>;
using MatC = CMatrix<double>;
using VecR = RVector<double>;
using MatR = RMatrix<double>;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised when a configuration key violates its invariant. `key()` names it.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class GeometryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A conic subproblem has no strictly feasible point.
class InfeasibleError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace rdars
