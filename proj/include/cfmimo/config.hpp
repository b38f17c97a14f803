// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: link-level simulator for asynchronous cell-free mmWave MIMO-OFDM
// Copyright (C) 2026 The cfmimo Authors
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
#include <string>
#include <vector>

#include "cfmimo/types.hpp"

namespace cfmimo
{

enum class PowerNormalization
{
    Instantaneous, // per channel realization, ||w_k[m]||^2 = rho_k exactly
    Statistical    // mean of ||w_k[m]||^2 over all subcarriers of the drop
};

// All system constants of one simulation. Defaults are the wide-area
// reference values (L=30, K=20, N=50, ...), except delay_max_s which is
// capped to (T_D - 1) sample periods so that every path fits the tap model.
struct ScenarioConfig
{
    int num_aaus = 30;         // L
    int num_ues = 20;          // K
    int antennas_per_aau = 50; // N
    int rf_chains = 8;         // N_RF
    int subcarriers = 128;     // M
    int cp_length = 10;        // M_CP, samples
    int delay_spread = 3;      // T_D, samples

    double bandwidth_hz = 100e6;
    double subcarrier_spacing_hz = 120e3; // informational only
    double carrier_hz = 28e9;
    double area_side_m = 2000.0;
    double aau_height_m = 10.0;
    double pathloss_exponent = 2.0;
    double shadow_std_db = 4.0;
    double dl_power_per_aau_w = 4.0; // rho_max
    double ul_power_per_ue_w = 0.1;  // p_k
    double noise_figure_db = 9.0;

    int num_paths = 3;          // P
    double delay_max_s = 20e-9; // tau_max
    int reference_subcarrier = -1; // -1 selects M/2
    std::uint64_t rng_seed = 1;

    PowerNormalization normalization = PowerNormalization::Instantaneous;
    int se_subcarrier_stride = 0; // 0: SE at the reference subcarrier only
    int ici_stride = 1;           // >1 decimates the ICI sum (profiling only)

    double sample_period() const { return 1.0 / bandwidth_hz; }
    double noise_power_w() const;
    double dl_power_per_ue_w() const { return dl_power_per_aau_w / rf_chains; }
    int ref_subcarrier() const { return reference_subcarrier < 0 ? subcarriers / 2 : reference_subcarrier; }

    // Subcarriers at which SE is evaluated (reference only, or a strided subset).
    std::vector<int> evaluation_subcarriers() const;
};

struct ConfigIssue
{
    std::string key;
    std::string message;
};

struct ValidationReport
{
    std::vector<ConfigIssue> errors;
    std::vector<ConfigIssue> warnings;

    bool ok() const { return errors.empty(); }
    std::string to_string() const;
};

// Checks every structural invariant and, from the geometry alone, whether
// the worst-case timing offset can exceed the single-previous-symbol model.
ValidationReport validate_config(const ScenarioConfig &config);

// Throws Error("InvalidConfig") listing all hard errors.
void require_valid(const ScenarioConfig &config);

// Largest integer timing offset the torus geometry can produce.
int worst_case_offset_samples(const ScenarioConfig &config);

namespace presets
{
ScenarioConfig reference_scale();
// L=10, K=8, N=16, N_RF=4, M=32, 500 m side.
ScenarioConfig desk_scale();
} // namespace presets

// JSON schema: a flat object whose keys are the field names above. Missing
// keys keep their defaults; unknown keys are rejected.
ScenarioConfig config_from_json_text(const std::string &text, const ScenarioConfig &base = {});
ScenarioConfig load_config(const std::string &path, const ScenarioConfig &base = {});
std::string config_to_json_text(const ScenarioConfig &config, int indent = 2);

// Applies "key=value" to a config. Value is parsed as JSON when possible.
void apply_override(ScenarioConfig &config, const std::string &key, const std::string &value);

} // namespace cfmimo
