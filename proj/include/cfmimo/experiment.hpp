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
#include <iosfwd>
#include <string>
#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/evaluation.hpp"

namespace cfmimo
{

// A swept parameter: one of cp_length, antennas_per_aau, rf_chains,
// dl_power_per_aau_w (any numeric config key works) or "association",
// whose values are alg1/alg2/random. Empty param means no sweep.
struct SweepSpec
{
    std::string param;
    std::vector<std::string> values;

    bool active() const { return !param.empty(); }
};

// "a:b:step" (inclusive) or "v1,v2,...".
std::vector<std::string> parse_sweep_values(const std::string &text);

struct ExperimentSpec
{
    std::string preset; // fig5..fig14 or "custom"
    ScenarioConfig config;
    int drops = 200;
    std::vector<EvalRequest> requests;
    AssociationAlgorithm association = AssociationAlgorithm::Algorithm1;
    SweepSpec sweep;
    int parallelism = 1;
    std::vector<std::string> overrides; // "key=value" as applied, for the manifest
};

// Applies one key=value override. Sweep keys (cp_lengths, antenna_counts,
// rf_chain_counts, dl_powers_w, associations) set the sweep; association,
// scenarios, precoders and directions select what is evaluated; anything
// else is a ScenarioConfig key. The pair is recorded in spec.overrides.
void apply_experiment_override(ExperimentSpec &spec, const std::string &key, const std::string &value);

// Splits "key=value"; throws InvalidConfig when '=' is missing.
std::pair<std::string, std::string> split_override(const std::string &text);

// Every scenario x precoder x direction combination.
std::vector<EvalRequest> all_requests();

// Preset descriptions, desk scale unless reference_scale is set.
ExperimentSpec preset_experiment(const std::string &name, bool reference_scale);
std::vector<std::string> preset_names();

struct Sample
{
    Scenario scenario;
    Precoder precoder;
    Direction direction;
    std::string sweep_value;
    int drop;
    int ue;
    double sinr;
    double se;
};

struct GroupSummary
{
    Scenario scenario;
    Precoder precoder;
    Direction direction;
    std::string sweep_value;
    std::size_t samples = 0;
    int drops = 0;
    double mean_se = 0.0;
    double median_se = 0.0;
    double p10_se = 0.0;
    double mean_sum_se = 0.0;
    double sum_se_stderr = 0.0;
};

struct SweepResult
{
    std::string sweep_param; // "none" without a sweep
    std::vector<Sample> samples; // ordered by sweep value, drop, request, UE
    std::vector<GroupSummary> groups;
    std::vector<std::string> warnings;
    int drops_with_validity_warnings = 0;
};

// Config for one sweep point. Throws InvalidConfig if the result is invalid.
ScenarioConfig sweep_point_config(const ExperimentSpec &spec, const std::string &value);
AssociationAlgorithm sweep_point_association(const ExperimentSpec &spec, const std::string &value);

SweepResult monte_carlo(const ExperimentSpec &spec);

std::vector<GroupSummary> summarize(const std::vector<Sample> &samples, const std::vector<EvalRequest> &requests,
                                    const std::vector<std::string> &sweep_values);

// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

// samples.csv: scenario,precoder,direction,sweep_param,sweep_value,drop,ue,sinr_db,se
void write_samples_csv(std::ostream &os, const SweepResult &result);
std::string summary_json_text(const SweepResult &result, const ExperimentSpec &spec);

// Manifest schema "cfmimo.manifest/1"; holds everything needed to rerun.
std::string manifest_json_text(const ExperimentSpec &spec);
ExperimentSpec experiment_from_manifest_text(const std::string &text);

const char *version_string();

} // namespace cfmimo
