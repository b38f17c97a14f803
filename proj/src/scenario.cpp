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

#include "cfmimo/scenario.hpp"

#include <cmath>
#include <sstream>

namespace cfmimo
{

double wrap_axis(double dx, double side)
{
    const double a = std::fmod(std::abs(dx), side);
    return std::min(a, side - a);
}

double link_distance(const RMat &aau, int l, const RMat &ue, int k, const ScenarioConfig &c)
{
    const double dx = wrap_axis(aau(l, 0) - ue(k, 0), c.area_side_m);
    const double dy = wrap_axis(aau(l, 1) - ue(k, 1), c.area_side_m);
    return std::sqrt(dx * dx + dy * dy + c.aau_height_m * c.aau_height_m);
}

NetworkLayout layout_from_positions(RMat aau_positions, RMat ue_positions, const ScenarioConfig &c)
{
    NetworkLayout out;
    out.aau_positions = std::move(aau_positions);
    out.ue_positions = std::move(ue_positions);
    const int L = static_cast<int>(out.aau_positions.rows());
    const int K = static_cast<int>(out.ue_positions.rows());
    out.distances.resize(K, L);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
            out.distances(k, l) = link_distance(out.aau_positions, l, out.ue_positions, k, c);
    return out;
}

NetworkLayout generate_layout(const ScenarioConfig &c, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, c.area_side_m);
    RMat aau(c.num_aaus, 2), ue(c.num_ues, 2);
    for (int l = 0; l < c.num_aaus; ++l)
    {
        aau(l, 0) = u(rng);
        aau(l, 1) = u(rng);
    }
    for (int k = 0; k < c.num_ues; ++k)
    {
        ue(k, 0) = u(rng);
        ue(k, 1) = u(rng);
    }
    return layout_from_positions(std::move(aau), std::move(ue), c);
}

double pathloss_db(double d, const ScenarioConfig &c)
{
    return 20.0 * std::log10(4.0 * kPi * c.carrier_hz / kSpeedOfLight) + 10.0 * c.pathloss_exponent * std::log10(d);
}

LargeScaleMap large_scale_fading(const NetworkLayout &layout, const ScenarioConfig &c, Rng &rng)
{
    std::normal_distribution<double> shadow(0.0, 1.0);
    const auto K = layout.distances.rows(), L = layout.distances.cols();
    LargeScaleMap out;
    out.beta_db.resize(K, L);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index l = 0; l < L; ++l)
            out.beta_db(k, l) = pathloss_db(layout.distances(k, l), c) + c.shadow_std_db * shadow(rng);
    out.beta_linear = out.beta_db.unaryExpr([](double db) { return std::pow(10.0, db / 10.0); });
    return out;
}

TimingOffsets compute_timing_offsets(const NetworkLayout &layout, const ScenarioConfig &c)
{
    const auto K = layout.distances.rows(), L = layout.distances.cols();
    TimingOffsets out;
    out.delta_dl.resize(K, L);
    const double ts = c.sample_period();
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double t_min = layout.distances.row(k).minCoeff() / kSpeedOfLight;
        for (Eigen::Index l = 0; l < L; ++l)
        {
            const double t = layout.distances(k, l) / kSpeedOfLight;
            out.delta_dl(k, l) = static_cast<int>(std::lround((t - t_min) / ts));
        }
    }
    out.delta_ul = out.delta_dl;

    const int limit = c.subcarriers - (c.delay_spread - 1);
    const int worst = out.delta_dl.size() ? out.delta_dl.maxCoeff() : 0;
    if (worst >= limit)
    {
        std::ostringstream os;
        os << "ModelValidity: timing offset of " << worst << " samples reaches M - (T_D - 1) = " << limit;
        out.warnings.push_back(os.str());
    }
    return out;
}

} // namespace cfmimo
