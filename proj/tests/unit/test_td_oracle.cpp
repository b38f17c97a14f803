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

#include "cfmimo/evaluation.hpp"
#include "cfmimo/td_oracle.hpp"
#include "helpers.hpp"

using namespace cfmimo;
using testutil::small_config;

TEST_CASE("synthesis and analysis")
{
    Rng rng(1);
    std::normal_distribution<double> g;
    const int M = 16, cp = 3;
    CVec X(M);
    for (int m = 0; m < M; ++m)
        X[m] = {g(rng), g(rng)};
    const CVec x = td::synthesize(X, cp);
    REQUIRE(x.size() == M + cp);
    CHECK((x.head(cp) - x.tail(cp)).norm() < 1e-12);
    CHECK((td::analyze(x.tail(M)) - X).norm() < 1e-12);
    CHECK(x.tail(M).squaredNorm() == doctest::Approx(M * X.squaredNorm()).epsilon(1e-12));

    CVec e = CVec::Zero(M);
    e[5] = 1.0;
    const CVec tone = td::synthesize(e, 0);
    for (int t = 0; t < M; ++t)
        CHECK(std::abs(tone[t] - expj(2.0 * kPi * 5 * t / M)) < 1e-12);
}

TEST_CASE("propagation")
{
    CVec s(6);
    s << 1, 2, 3, 4, 5, 6;
    CVec unit(1);
    unit << 1.0;
    CHECK((td::propagate(s, unit, 0, 6) - s).norm() == 0.0);
    const CVec shifted = td::propagate(s, unit, 2, 6);
    CHECK(shifted[0] == cd(0.0));
    CHECK(shifted[2] == cd(1.0));
    CVec two(2);
    two << 1.0, 0.5;
    CHECK(td::propagate(s, two, 0, 6)[3] == cd(4.0 + 1.5));
    CHECK_THROWS_AS(td::propagate(s, two, 6, 6), Error);
}

TEST_CASE("contaminated window samples")
{
    CHECK(td::contaminated_samples(0, 3, 10, 128) == 0);
    CHECK(td::contaminated_samples(8, 3, 10, 128) == 0);
    CHECK(td::contaminated_samples(20, 3, 10, 128) == 12);
    CHECK(td::contaminated_samples(500, 3, 10, 128) == 128);
}

TEST_CASE("pilot probes reproduce the leakage factor")
{
    ScenarioConfig c = small_config();
    c.cp_length = 3;
    c.delay_spread = 2;
    const int M = c.subcarriers;
    // A single tap at the last delay contaminates exactly eps window samples.
    CVec last = CVec::Zero(2);
    last[1] = 1.0;
    auto G = [&](int i) { return expj(-2.0 * kPi * i / M); };
    for (int delta : {0, 1, 2, 3, 5, 9, 15})
    {
        const int eps = epsilon(delta, c.delay_spread, c.cp_length);
        const cd probe = td::probe_factor(last, delta, 6, 6, c);
        CHECK(std::abs(probe) == doctest::Approx(double(M - eps) / M).epsilon(1e-12));
        CHECK(std::abs(probe - kappa(delta, 6, 6, M, c.delay_spread, c.cp_length) * G(6)) < 1e-12);
        for (int i : {0, 5, 7, 11})
            CHECK(std::abs(td::probe_factor(last, delta, i, 6, c) -
                           kappa(delta, i, 6, M, c.delay_spread, c.cp_length) * G(i)) < 1e-12);
    }
    // Case 1 boundary: multipath taps still give the exact cyclic response.
    CVec taps(2);
    taps << cd(0.8, -0.1), cd(0.3, 0.4);
    const int edge = c.cp_length - (c.delay_spread - 1);
    for (int m : {0, 6, 13})
    {
        const cd G = taps[0] + taps[1] * expj(-2.0 * kPi * m / M);
        CHECK(std::abs(td::probe_factor(taps, edge, m, m, c) - chi(edge, m, M) * G) < 1e-9);
        CHECK(std::abs(td::probe_factor(taps, edge, (m + 3) % M, m, c)) < 1e-9);
    }
}

TEST_CASE("synchronous waveform has no ICI or ISI")
{
    const ScenarioConfig c = small_config();
    const Drop d = generate_drop(c, 3);
    AssociationPlan p = empty_plan(2, 2);
    assign(p, 0, 0, 1);
    assign(p, 1, 0, 5);
    assign(p, 0, 1, 3);
    assign(p, 1, 1, 6);
    LinkEvaluator ev(d, p);
    const int m = c.ref_subcarrier();
    td::OracleSetup setup{&c, &d.channels, &p, IMat::Zero(2, 2), TimingMode::Synchronous};
    Rng rng(9);
    const auto W = ev.downlink_precoders(Scenario::Syn, Precoder::PMMSE);
    const auto dl = td::measure_downlink(setup, W, m, 200, rng);
    const auto model = ev.downlink_terms(Scenario::Syn, W, m);
    for (int k = 0; k < 2; ++k)
    {
        CHECK(dl[k].ici + dl[k].isi < 1e-6 * dl[k].desired);
        CHECK(testutil::db_gap(dl[k].desired, model[k].desired) < 0.3);
    }
    const CMat V = ev.uplink_combiners(Scenario::Syn, Precoder::PMMSE, m);
    const auto ul = td::measure_uplink(setup, V, c.ul_power_per_ue_w, m, 200, rng);
    for (int k = 0; k < 2; ++k)
        CHECK(ul[k].ici + ul[k].isi < 1e-6 * ul[k].desired);
}
