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

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

struct PathSet
{
    std::vector<cd> gains;      // alpha_p, unit variance
    std::vector<double> delays; // tau_p, seconds
    std::vector<double> psi;    // normalized direction, |psi| <= 1/2

    int size() const { return static_cast<int>(gains.size()); }
};

// Unitary DFT beam codebook. Row n is a(psi_n)^H with psi_n = (n - (N+1)/2) / N
// for 1-based n.
struct DftCodebook
{
    int N = 0;
    CMat U;
    RVec directions;
};

DftCodebook make_codebook(int N);

// a(psi) = N^{-1/2} [exp(-j 2 pi psi i)], i = q - (N-1)/2, q = 0..N-1.
CVec array_response(double psi, int N);

// Dirichlet kernel sin(N pi x) / sin(pi x), with limit N at integer x.
double dirichlet(double x, int N);

PathSet sample_paths(Rng &rng, const ScenarioConfig &config);

CVec beam_transform(const DftCodebook &codebook, const CVec &spatial);

enum class FreqConvention
{
    FullCarrier, // f_m = f_c + (B/M)(m - (M-1)/2), 0-based m
    Baseband     // f_m = m B / M, the DFT grid of the tap model
};

// Spatial response h[m] = sqrt(N / (beta P)) sum_p alpha_p exp(-j 2 pi tau_p f_m) a(psi_p).
CVec channel_freq_response(const PathSet &paths, double beta, const ScenarioConfig &config, int m,
                           FreqConvention convention = FreqConvention::FullCarrier);

// Beam-domain taps, N x T_D. Tap t collects sqrt(N / (beta P)) alpha_p U a(psi_p)
// over paths with round(tau_p / T_s) == t; the carrier phase exp(-j 2 pi tau_p f_c)
// is folded into each path gain.
CMat beam_taps(const PathSet &paths, double beta, const ScenarioConfig &config, const DftCodebook &codebook);

// sum_t taps(:, t) exp(-j 2 pi m t / M).
CVec taps_to_freq(const CMat &taps, int m, int M);

struct ChannelRealization
{
    int num_ues = 0;
    int num_aaus = 0;
    std::vector<PathSet> paths; // index k * L + l
    std::vector<CMat> taps;     // beam domain, N x T_D, index k * L + l

    const CMat &link_taps(int k, int l) const { return taps[static_cast<std::size_t>(k) * num_aaus + l]; }
    const PathSet &link_paths(int k, int l) const { return paths[static_cast<std::size_t>(k) * num_aaus + l]; }
};

ChannelRealization generate_channels(const ScenarioConfig &config, const LargeScaleMap &lsf,
                                     const DftCodebook &codebook, Rng &rng);

// Beam-domain response of every link at subcarrier m, as an N x L matrix per UE.
std::vector<CMat> beam_responses(const ChannelRealization &channels, int m, int M);

} // namespace cfmimo
