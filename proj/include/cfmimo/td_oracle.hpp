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

#include <vector>

#include "cfmimo/association.hpp"
#include "cfmimo/asyncmodel.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

// Sample-level OFDM waveform simulator. It works from beam taps and integer
// delays only, with long linear convolution over a multi-symbol frame, so
// interference emerges from sample indexing.
namespace cfmimo::td
{

// x(t) = sum_m X[m] exp(j 2 pi m t / M) for t = -M_CP..M-1 (CP first).
CVec synthesize(const CVec &X, int cp_length);

// X[m] = (1/M) sum_t x(t) exp(-j 2 pi m t / M) over an M-sample window.
CVec analyze(const CVec &window);

// y(T) = sum_tau taps(tau) x(T - delay - tau), T = 0..out_len-1, with x = 0
// outside its support. Throws DelayOutOfRange if the shifted support would
// start before sample 0 of the output by more than the stream length.
CVec propagate(const CVec &stream, const CVec &taps, int delay, std::size_t out_len);

// Window samples whose taps reach outside the current symbol's CP and body.
int contaminated_samples(int delta, int delay_spread, int cp_length, int M);

struct OracleTerms
{
    double desired = 0.0;
    double inter_user = 0.0;
    double ici = 0.0;
    double isi = 0.0;
};

struct OracleSetup
{
    const ScenarioConfig *config = nullptr;
    const ChannelRealization *channels = nullptr;
    const AssociationPlan *plan = nullptr;
    IMat delta;        // K x L integer offsets
    TimingMode mode = TimingMode::Asynchronous;
};

// Downlink: W[i] holds the precoders on subcarrier i, rows l * N_RF + n.
std::vector<OracleTerms> measure_downlink(const OracleSetup &setup, const std::vector<CMat> &W, int m,
                                          int n_symbols, Rng &rng);

// Uplink: V holds the combiners of subcarrier m; every UE transmits with power p.
std::vector<OracleTerms> measure_uplink(const OracleSetup &setup, const CMat &V, double p, int m, int n_symbols,
                                        Rng &rng);

// Demodulated output of one chain for a unit pilot on subcarrier i through a
// single link, FFT bin m of the window of symbol 1 (symbol 0 is silent).
cd probe_factor(const CVec &taps, int delta, int i, int m, const ScenarioConfig &config);

} // namespace cfmimo::td
