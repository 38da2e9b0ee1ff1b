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

#include <string>
#include <string_view>
#include <vector>

#include "rdars/optimizer.hpp"
#include "rdars/scenario.hpp"

namespace rdars {

enum class Scheme {
    rdars_isac,
    rdars_isac_random_phase,
    rdars_isac_fixed_a,
    rdars_sensing_opt,
    rdars_sensing_random,
    das_isac,
    das_sensing,
    passive_ris_isac,
};

struct SchemeSpec {
    Scheme id = Scheme::rdars_isac;
    bool optimize_phase = true;
    bool optimize_selection = true;
    bool enforce_sinr = true;
    bool reflection_enabled = true;
    bool connected_enabled = true;

    std::string name() const;
};

/// Flags of a named scheme.
SchemeSpec scheme_spec(Scheme id);
/// Accepts the kebab-case CLI identifier; throws ConfigError on unknown names.
SchemeSpec parse_scheme(std::string_view name);
std::vector<SchemeSpec> parse_scheme_list(std::string_view comma_separated);
const std::vector<Scheme>& all_schemes();

/// Throws ConfigError when the flags contradict each other.
void check_scheme(const SchemeSpec& spec);

/// Optimizer settings for `config` restricted by the scheme.
OptimizerSettings apply_scheme(const SchemeSpec& spec, const SystemConfig& config);

}  // namespace rdars
