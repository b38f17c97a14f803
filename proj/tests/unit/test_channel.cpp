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

#include "cfmimo/channel.hpp"
#include "cfmimo/rng.hpp"

using namespace cfmimo;

namespace
{
PathSet one_path(cd gain, double delay, double psi)
{
    PathSet p;
    p.gains = {gain};
    p.delays = {delay};
    p.psi = {psi};
    return p;
}
} // namespace

TEST_CASE("codebook is unitary and energy preserving")
{
    Rng rng(3);
    std::normal_distribution<double> g;
    for (int N : {4, 16, 50})
    {
        const auto cb = make_codebook(N);
        CHECK((cb.U.adjoint() * cb.U - CMat::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-12);
        CVec h(N);
        for (int i = 0; i < N; ++i)
            h[i] = {g(rng), g(rng)};
        CHECK(std::abs(beam_transform(cb, h).norm() - h.norm()) < 1e-12 * h.norm());
    }
}

TEST_CASE("array response")
{
    const CVec a = array_response(0.0, 8);
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(a[i] - cd(1.0 / std::sqrt(8.0), 0.0)) < 1e-15);
    CHECK(array_response(0.37, 13).norm() == doctest::Approx(1.0));
    CHECK(dirichlet(0.0, 7) == doctest::Approx(7.0));
    CHECK(dirichlet(1.0, 4) == doctest::Approx(-4.0));
    CHECK(std::abs(dirichlet(0.25, 4)) < 1e-12);
    // |a(psi1)^H a(psi2)| = |Xi_N(psi1 - psi2)| / N
    const double d = std::abs(array_response(0.1, 6).dot(array_response(0.33, 6)));
    CHECK(d == doctest::Approx(std::abs(dirichlet(0.23, 6)) / 6.0));
}

TEST_CASE("on-grid path lands in a single beam")
{
    ScenarioConfig c;
    c.antennas_per_aau = 4;
    c.num_paths = 1;
    const auto cb = make_codebook(4);
    const CVec h = channel_freq_response(one_path(1.0, 0.0, cb.directions[2]), 1.0, c, 0);
    const CVec beam = beam_transform(cb, h);
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(beam[n]) == doctest::Approx(n == 2 ? 2.0 : 0.0));
    CHECK(beam_transform(cb, CVec::Zero(4)).norm() == 0.0);
}

TEST_CASE("frequency response")
{
    ScenarioConfig c;
    c.antennas_per_aau = 16;
    c.num_paths = 1;
    const auto flat = one_path(1.0, 0.0, 0.2);
    const CVec ref = std::sqrt(16.0) * array_response(0.2, 16);
    for (int m : {0, 5, 127})
        CHECK((channel_freq_response(flat, 1.0, c, m) - ref).norm() < 1e-12);
    const double n1 = channel_freq_response(one_path({0.3, 0.8}, 7e-9, -0.1), 1.0, c, 9).norm();
    const double n2 = channel_freq_response(one_path({0.3, 0.8}, 7e-9, -0.1), 2.0, c, 9).norm();
    CHECK(n2 == doctest::Approx(n1 / std::sqrt(2.0)));
}

TEST_CASE("path statistics")
{
    ScenarioConfig c;
    c.num_paths = 1;
    Rng rng = make_rng(1, 0, Stream::Paths);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
    {
        const auto p = sample_paths(rng, c);
        sum += std::norm(p.gains[0]);
        CHECK_LE(std::abs(p.psi[0]), 0.5);
        CHECK_GE(p.delays[0], 0.0);
        CHECK_LE(p.delays[0], c.delay_max_s);
    }
    CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.02));

    c.delay_max_s = 0.0;
    c.num_paths = 3;
    const auto z = sample_paths(rng, c);
    REQUIRE(z.size() == 3);
    for (double t : z.delays)
        CHECK(t == 0.0);
}

TEST_CASE("mean channel energy is N")
{
    ScenarioConfig c;
    c.antennas_per_aau = 8;
    Rng rng = make_rng(2, 0, Stream::Paths);
    double sum = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
        sum += channel_freq_response(sample_paths(rng, c), 1.0, c, 64).squaredNorm();
    CHECK(sum / draws == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("beam taps")
{
    ScenarioConfig c;
    c.antennas_per_aau = 8;
    const auto cb = make_codebook(8);
    PathSet p;
    p.gains = {{0.5, -0.2}, {1.1, 0.4}};
    p.delays = {0.0, 0.0};
    p.psi = {0.1, -0.3};
    CMat taps = beam_taps(p, 2.0, c, cb);
    REQUIRE(taps.rows() == 8);
    REQUIRE(taps.cols() == c.delay_spread);
    CHECK((taps.col(0) - beam_transform(cb, channel_freq_response(p, 2.0, c, 0))).norm() < 1e-12);
    CHECK(taps.rightCols(c.delay_spread - 1).norm() == 0.0);
    CHECK(beam_taps(PathSet{}, 1.0, c, cb).norm() == 0.0);

    // On-grid delays: the tap DFT equals the baseband response with the
    // carrier phase folded into the gains.
    PathSet q = one_path({0.7, 0.1}, 2 * c.sample_period(), 0.05);
    taps = beam_taps(q, 1.0, c, cb);
    CHECK(taps.col(2).norm() > 0.0);
    PathSet folded = q;
    folded.gains[0] *= expj(-2.0 * kPi * q.delays[0] * c.carrier_hz);
    for (int m : {0, 3, 77})
        CHECK((taps_to_freq(taps, m, c.subcarriers) -
               beam_transform(cb, channel_freq_response(folded, 1.0, c, m, FreqConvention::Baseband)))
                  .norm() < 1e-9);

    q.delays[0] = 3 * c.sample_period();
    CHECK_THROWS_AS(beam_taps(q, 1.0, c, cb), Error);
}

TEST_CASE("channel generation is reproducible")
{
    ScenarioConfig c;
    c.num_aaus = 2;
    c.num_ues = 3;
    c.antennas_per_aau = 8;
    c.rf_chains = 2;
    LargeScaleMap lsf;
    lsf.beta_linear = RMat::Constant(3, 2, 1e10);
    lsf.beta_db = RMat::Constant(3, 2, 100.0);
    const auto cb = make_codebook(8);
    Rng a = make_rng(1, 4, Stream::Paths), b = make_rng(1, 4, Stream::Paths);
    const auto ca = generate_channels(c, lsf, cb, a), cbr = generate_channels(c, lsf, cb, b);
    REQUIRE(ca.taps.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        CHECK(ca.taps[i] == cbr.taps[i]);
    const auto resp = beam_responses(ca, 5, c.subcarriers);
    REQUIRE(resp.size() == 3);
    CHECK((resp[1].col(1) - taps_to_freq(ca.link_taps(1, 1), 5, c.subcarriers)).norm() < 1e-15);
}
