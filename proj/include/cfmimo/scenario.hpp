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

#include <string>
#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

struct NetworkLayout
{
    RMat aau_positions; // L x 2, metres
    RMat ue_positions;  // K x 2, metres
    RMat distances;     // K x L, 3-D with the AAU height
};

struct LargeScaleMap
{
    RMat beta_db;     // K x L
    RMat beta_linear; // K x L, attenuation (larger is weaker)
};

struct TimingOffsets
{
    IMat delta_dl; // K x L, samples
    IMat delta_ul; // K x L, samples
    std::vector<std::string> warnings;
};

// Shortest separation along one axis of a torus with the given side.
double wrap_axis(double dx, double side);

double link_distance(const RMat &aau_positions, int l, const RMat &ue_positions, int k, const ScenarioConfig &config);

NetworkLayout layout_from_positions(RMat aau_positions, RMat ue_positions, const ScenarioConfig &config);
NetworkLayout generate_layout(const ScenarioConfig &config, Rng &rng);

// Free-space intercept at 1 m plus log-distance slope plus log-normal shadowing.
double pathloss_db(double distance_m, const ScenarioConfig &config);
LargeScaleMap large_scale_fading(const NetworkLayout &layout, const ScenarioConfig &config, Rng &rng);

TimingOffsets compute_timing_offsets(const NetworkLayout &layout, const ScenarioConfig &config);

} // namespace cfmimo
