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

#include "cfmimo/association.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

// Samples of the receive window that fall outside the cyclic part:
// max((T_D - 1) + delta - M_CP, 0).
int epsilon(int delta, int delay_spread, int cp_length);

// Leakage coefficient W^[q] = sum_{t=eps}^{M-1} exp(-j 2 pi q t / M), computed
// in closed form. eps is clamped to [0, M]; W^[0] = M - eps.
cd w_coeff(int eps, int q, int M);

// exp(-j 2 pi m delta / M)
cd chi(int delta, int m, int M);

// Factor from data on subcarrier i to the FFT output at subcarrier m:
// chi(delta, i) * W^[(m - i) mod M](eps(delta)) / M.
cd kappa(int delta_eff, int i, int m, int M, int delay_spread, int cp_length);

enum class TimingMode
{
    Synchronous, // every offset zero
    Asynchronous,
    PerBeamAdvance
};

struct BeamTimingPlan
{
    IMat advance; // L x N_RF, samples
    IMat serving; // L x N_RF, UE index or -1 for idle chains
};

// advance(l, n) = delta(k_n, l) for the UE k_n on chain n.
BeamTimingPlan pbta_plan(const AssociationPlan &plan, const IMat &delta, int rf_chains);

// Per (UE, chain) offsets, columns ordered l * N_RF + n. Idle chains keep 0.
struct EffectiveOffsets
{
    int rf_chains = 0;
    IMat delta; // K x (L * N_RF), may be negative under PBTA
    IMat eps;   // K x (L * N_RF), >= 0
};

EffectiveOffsets effective_offsets(const IMat &delta, const AssociationPlan &plan, TimingMode mode,
                                   const ScenarioConfig &config);

// Diagonal of Theta^i_{k,m}: kappa_{k,l,n,m}^i ordered by (l, n).
CVec theta_diagonal(int k, int m, int i, const EffectiveOffsets &offsets, const ScenarioConfig &config);
CMat theta_block(int k, int m, int i, const EffectiveOffsets &offsets, const ScenarioConfig &config);

} // namespace cfmimo
