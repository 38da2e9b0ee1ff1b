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

#include "rdars/schemes.hpp"

#include <algorithm>
#include <cctype>

namespace rdars {

namespace {

struct Entry {
    Scheme id;
    const char* name;
};

constexpr Entry kNames[] = {
    {Scheme::rdars_isac, "rdars-isac"},
    {Scheme::rdars_isac_random_phase, "rdars-isac-random-phase"},
    {Scheme::rdars_isac_fixed_a, "rdars-isac-fixed-a"},
    {Scheme::rdars_sensing_opt, "rdars-sensing-opt"},
    {Scheme::rdars_sensing_random, "rdars-sensing-random"},
    {Scheme::das_isac, "das-isac"},
    {Scheme::das_sensing, "das-sensing"},
    {Scheme::passive_ris_isac, "passive-ris-isac"},
};

}  // namespace

std::string SchemeSpec::name() const
{
    for (const auto& e : kNames)
        if (e.id == id) return e.name;
    return "unknown";
}

const std::vector<Scheme>& all_schemes()
{
    static const std::vector<Scheme> ids = [] {
        std::vector<Scheme> v;
        for (const auto& e : kNames) v.push_back(e.id);
        return v;
    }();
    return ids;
}

SchemeSpec scheme_spec(Scheme id)
{
    SchemeSpec s;
    s.id = id;
    switch (id) {
    case Scheme::rdars_isac:
        break;
    case Scheme::rdars_isac_random_phase:
        s.optimize_phase = false;
        break;
    case Scheme::rdars_isac_fixed_a:
        s.optimize_selection = false;
        break;
    case Scheme::rdars_sensing_opt:
        s.enforce_sinr = false;
        break;
    case Scheme::rdars_sensing_random:
        s.enforce_sinr = false;
        s.optimize_phase = false;
        break;
    case Scheme::das_isac:
        s.reflection_enabled = false;
        s.optimize_phase = false;
        s.optimize_selection = false;
        break;
    case Scheme::das_sensing:
        s.reflection_enabled = false;
        s.optimize_phase = false;
        s.optimize_selection = false;
        s.enforce_sinr = false;
        break;
    case Scheme::passive_ris_isac:
        s.connected_enabled = false;
        s.optimize_selection = false;
        break;
    }
    return s;
}

SchemeSpec parse_scheme(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (const auto& e : kNames)
        if (lower == e.name) return scheme_spec(e.id);
    throw ConfigError("schemes", "unknown scheme '" + std::string(name) + "'");
}

std::vector<SchemeSpec> parse_scheme_list(std::string_view list)
{
    std::vector<SchemeSpec> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const std::size_t comma = std::min(list.find(',', start), list.size());
        std::string_view item = list.substr(start, comma - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item.empty()) throw ConfigError("schemes", "empty scheme name in list");
        out.push_back(parse_scheme(item));
        start = comma + 1;
    }
    return out;
}

void check_scheme(const SchemeSpec& s)
{
    if (!s.reflection_enabled && s.optimize_phase)
        throw ConfigError("schemes", s.name() + ": phase optimization needs the reflection path");
    if (!s.connected_enabled && s.optimize_selection)
        throw ConfigError("schemes", s.name() + ": selection optimization needs connected elements");
    if (!s.reflection_enabled && !s.connected_enabled)
        throw ConfigError("schemes", s.name() + ": neither reflection nor connected elements are enabled");
}

OptimizerSettings apply_scheme(const SchemeSpec& spec, const SystemConfig& config)
{
    check_scheme(spec);
    OptimizerSettings s = settings_from_config(config);
    s.optimize_phase = spec.optimize_phase;
    s.optimize_selection = spec.optimize_selection;
    s.enforce_sinr = spec.enforce_sinr;
    s.reflection_enabled = spec.reflection_enabled;
    if (!spec.connected_enabled) s.connected = 0;
    if (!spec.enforce_sinr) std::fill(s.gamma_bar.begin(), s.gamma_bar.end(), 0.0);
    return s;
}

}  // namespace rdars
