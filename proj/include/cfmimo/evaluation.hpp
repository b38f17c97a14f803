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

#include "cfmimo/association.hpp"
#include "cfmimo/asyncmodel.hpp"
#include "cfmimo/channel.hpp"
#include "cfmimo/config.hpp"
#include "cfmimo/precoding.hpp"
#include "cfmimo/scenario.hpp"

namespace cfmimo
{

enum class Scenario
{
    Syn,
    Asyn,
    PBTA,
    Cellular
};

enum class Direction
{
    Downlink,
    Uplink
};

const char *scenario_name(Scenario s);
Scenario parse_scenario(const std::string &name);
const char *direction_name(Direction d);
Direction parse_direction(const std::string &name);
TimingMode timing_mode(Scenario s);

struct PowerTerms
{
    double desired = 0.0;
    double inter_user = 0.0;
    double ici = 0.0;
    double isi = 0.0;
    double noise = 0.0;

    double interference() const { return inter_user + ici + isi + noise; }
    double sinr() const;
};

// (M / (M + M_CP)) log2(1 + gamma)
double spectral_efficiency(double gamma, int M, int cp_length);

struct LinkReport
{
    Scenario scenario = Scenario::Syn;
    Precoder precoder = Precoder::MR;
    Direction direction = Direction::Downlink;
    std::vector<PowerTerms> terms; // per UE, at the first evaluation subcarrier
    std::vector<double> sinr;      // per UE; SINR equivalent of the mean SE
    std::vector<double> se;        // per UE, averaged over evaluation subcarriers
    std::vector<int> serving_aau;  // small cell only: AAU giving the max, -1 if none

    double sum_se() const;
};

// Everything random about one drop.
struct Drop
{
    ScenarioConfig config;
    NetworkLayout layout;
    LargeScaleMap lsf;
    TimingOffsets offsets;
    DftCodebook codebook;
    ChannelRealization channels;
};

Drop generate_drop(const ScenarioConfig &config, std::uint64_t drop_index);

// Beam gains at the reference subcarrier, beta and raw residual offsets.
AssociationInputs association_inputs(const Drop &drop);

AssociationPlan associate(const Drop &drop, AssociationAlgorithm algorithm, std::uint64_t drop_index,
                          std::uint64_t variant = 0);

// Linear map from the frequency-domain symbols of the current and older
// OFDM symbols to the erroneously processed part of the FFT output at
// subcarrier m, for one link with beam taps c (length T_D) and offset delta.
// Column r holds OFDM symbol s_min + r (s = 0 is the current symbol), row i
// the source subcarrier.
struct IsiMap
{
    int s_min = 0;
    CMat A; // M x (1 - s_min)

    bool empty() const { return A.size() == 0; }
    cd at(int i, int s) const;
};

IsiMap isi_map(const CVec &taps, int delta, int m, const ScenarioConfig &config);

class LinkEvaluator
{
public:
    LinkEvaluator(const Drop &drop, AssociationPlan plan);

    const AssociationPlan &plan() const { return plan_; }
    const ServingSets &serving() const { return sets_; }
    const Drop &drop() const { return drop_; }

    // Reduced beam channels over the selected beams, (L * N_RF) x M per UE.
    const CMat &reduced_freq(int k) const { return freq_[k]; }
    // Reduced beam taps, (L * N_RF) x T_D per UE.
    const CMat &reduced_taps(int k) const { return taps_[k]; }

    EffectiveOffsets offsets(Scenario s, Direction d) const;

    // Effective downlink channel of every UE for data on subcarrier i seen
    // at FFT output m: column k is conj(kappa^i_{k,.,m} o G_k[i]).
    CMat downlink_channels(const EffectiveOffsets &off, int i, int m) const;
    // Uplink counterpart: column j is kappa^i_{j,.,m} o G_j[i].
    CMat uplink_channels(const EffectiveOffsets &off, int i, int m) const;

    // Normalized precoders at every subcarrier (columns are UEs).
    std::vector<CMat> downlink_precoders(Scenario s, Precoder p) const;
    CMat uplink_combiners(Scenario s, Precoder p, int m) const;

    std::vector<PowerTerms> downlink_terms(Scenario s, const std::vector<CMat> &W, int m) const;
    std::vector<PowerTerms> uplink_terms(Scenario s, const CMat &V, int m) const;

    // Single-AAU service: terms(l, k) for UEs in D_l, with local processing.
    struct CellTerms
    {
        std::vector<std::vector<PowerTerms>> per_aau; // [l][k], zero terms if not served
    };
    CellTerms cellular_terms(Precoder p, Direction d, int m) const;

    LinkReport evaluate(Scenario s, Precoder p, Direction d) const;

private:
    const Drop &drop_;
    AssociationPlan plan_;
    ServingSets sets_;
    std::vector<CMat> freq_;
    std::vector<CMat> taps_;
    RVec p_ul_;
};

struct EvalRequest
{
    Scenario scenario;
    Precoder precoder;
    Direction direction;
};

// All requests on one drop, sharing layout, channels and plan.
std::vector<LinkReport> run_drop(const ScenarioConfig &config, const std::vector<EvalRequest> &requests,
                                 std::uint64_t drop_index, AssociationAlgorithm algorithm);

} // namespace cfmimo
