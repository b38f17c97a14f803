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

#include <cmath>
#include <complex>

#include "cfmimo/config.hpp"

namespace testutil
{

// L=2, K=2, N=8, N_RF=2, M=16, M_CP=2, T_D=2 on a 100 m torus.
inline cfmimo::ScenarioConfig small_config()
{
    cfmimo::ScenarioConfig c;
    c.num_aaus = 2;
    c.num_ues = 2;
    c.antennas_per_aau = 8;
    c.rf_chains = 2;
    c.subcarriers = 16;
    c.cp_length = 2;
    c.delay_spread = 2;
    c.delay_max_s = 10e-9;
    c.area_side_m = 100.0;
    return c;
}

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double db_gap(double a, double b) { return std::abs(10.0 * std::log10(a / b)); }

} // namespace testutil
