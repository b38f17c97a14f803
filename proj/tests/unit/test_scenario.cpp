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

#include <doctest.h>

#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"

using namespace cfmimo;

TEST_CASE("torus wrap-around distance")
{
    ScenarioConfig c;
    c.area_side_m = 2000.0;
    c.aau_height_m = 0.0;
    RMat aau(1, 2), ue(1, 2);
    aau << 0.0, 0.0;
    ue << 1900.0, 0.0;
    CHECK(link_distance(aau, 0, ue, 0, c) == doctest::Approx(100.0));
    CHECK(wrap_axis(-1900.0, 2000.0) == doctest::Approx(100.0));
    CHECK(wrap_axis(1000.0, 2000.0) == doctest::Approx(1000.0));

    c.aau_height_m = 10.0;
    ue << 0.0, 0.0;
    CHECK(link_distance(aau, 0, ue, 0, c) == doctest::Approx(10.0));
}

TEST_CASE("layout generation is seeded and in range")
{
    ScenarioConfig c = presets::desk_scale();
    Rng a = make_rng(5, 0, Stream::Layout), b = make_rng(5, 0, Stream::Layout);
    const auto la = generate_layout(c, a), lb = generate_layout(c, b);
    CHECK(la.aau_positions == lb.aau_positions);
    CHECK(la.ue_positions == lb.ue_positions);
    CHECK(la.aau_positions.minCoeff() >= 0.0);
    CHECK(la.ue_positions.maxCoeff() < c.area_side_m);
    CHECK(la.distances.minCoeff() >= c.aau_height_m);
    CHECK(la.distances.rows() == c.num_ues);
    CHECK(la.distances.cols() == c.num_aaus);

    Rng other = make_rng(5, 1, Stream::Layout);
    CHECK(generate_layout(c, other).ue_positions != la.ue_positions);
}

TEST_CASE("path loss")
{
    ScenarioConfig c;
    // 20 log10(4 pi 28e9 / 3e8) + 20 log10(100)
    CHECK(pathloss_db(100.0, c) == doctest::Approx(101.38493281289306).epsilon(1e-12));
    CHECK(pathloss_db(1.0, c) == doctest::Approx(20.0 * std::log10(4.0 * kPi * 28e9 / 3e8)).epsilon(1e-14));
    c.pathloss_exponent = 3.0;
    CHECK(pathloss_db(100.0, c) - pathloss_db(10.0, c) == doctest::Approx(30.0));
}

TEST_CASE("shadowing")
{
    ScenarioConfig c = presets::desk_scale();
    Rng r = make_rng(1, 0, Stream::Layout);
    const auto layout = generate_layout(c, r);

    c.shadow_std_db = 0.0;
    Rng s0 = make_rng(1, 0, Stream::Shadowing);
    const auto flat = large_scale_fading(layout, c, s0);
    for (int k = 0; k < c.num_ues; ++k)
        for (int l = 0; l < c.num_aaus; ++l)
            CHECK(flat.beta_db(k, l) == doctest::Approx(pathloss_db(layout.distances(k, l), c)));
    CHECK(flat.beta_linear(0, 0) == doctest::Approx(std::pow(10.0, flat.beta_db(0, 0) / 10.0)));

    // Shadowing residuals have roughly the configured spread.
    c = presets::reference_scale();
    Rng r2 = make_rng(2, 0, Stream::Layout), s2 = make_rng(2, 0, Stream::Shadowing);
    const auto big = generate_layout(c, r2);
    const auto lsf = large_scale_fading(big, c, s2);
    double sum = 0.0, sum2 = 0.0;
    const double n = static_cast<double>(c.num_ues * c.num_aaus);
    for (int k = 0; k < c.num_ues; ++k)
        for (int l = 0; l < c.num_aaus; ++l)
        {
            const double x = lsf.beta_db(k, l) - pathloss_db(big.distances(k, l), c);
            sum += x;
            sum2 += x * x;
        }
    const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
    CHECK(sd == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("timing offsets")
{
    ScenarioConfig c;
    NetworkLayout layout;
    layout.distances.resize(1, 2);
    layout.distances << 50.0, 350.0;
    auto off = compute_timing_offsets(layout, c);
    CHECK(off.delta_dl(0, 0) == 0);
    CHECK(off.delta_dl(0, 1) == 100);
    CHECK(off.delta_ul == off.delta_dl);
    CHECK(off.warnings.empty());

    layout.distances << 120.0, 120.0;
    off = compute_timing_offsets(layout, c);
    CHECK(off.delta_dl.maxCoeff() == 0);

    layout.distances.resize(3, 1);
    layout.distances << 10.0, 500.0, 900.0;
    CHECK(compute_timing_offsets(layout, c).delta_dl.maxCoeff() == 0);

    // 126 samples reaches M - (T_D - 1) for M = 128.
    layout.distances.resize(1, 2);
    layout.distances << 10.0, 10.0 + 3.0 * 126;
    off = compute_timing_offsets(layout, c);
    REQUIRE(off.warnings.size() == 1);
    CHECK(off.warnings[0].find("ModelValidity") == 0);
}
