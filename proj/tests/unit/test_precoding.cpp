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

#include <random>

#include "cfmimo/precoding.hpp"

using namespace cfmimo;

namespace
{
CMat random_cmat(int rows, int cols, std::mt19937_64 &rng)
{
    std::normal_distribution<double> g;
    CMat A(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            A(i, j) = {g(rng), g(rng)};
    return A;
}

double angle(const CVec &a, const CVec &b) { return std::acos(std::min(1.0, std::abs(a.dot(b)) / (a.norm() * b.norm()))); }

// L=2 AAUs with R=2 chains each; UE0 on both, UE1 on AAU 0, UE2 on AAU 1.
ServingSets two_aau_sets()
{
    ServingSets s;
    s.rf_chains = 2;
    s.D = {RVec::Ones(4), RVec::Zero(4), RVec::Zero(4)};
    s.D[1].head(2).setOnes();
    s.D[2].tail(2).setOnes();
    s.D_l = {{0, 1}, {0, 2}};
    return s;
}
} // namespace

TEST_CASE("precoder names")
{
    for (Precoder p : {Precoder::MR, Precoder::PMMSE, Precoder::LMR, Precoder::LPMMSE})
        CHECK(parse_precoder(precoder_name(p)) == p);
    CHECK_THROWS_AS(parse_precoder("ZF"), Error);
    CHECK(is_distributed(Precoder::LMR));
    CHECK_FALSE(is_distributed(Precoder::PMMSE));
    CHECK(local_counterpart(Precoder::PMMSE) == Precoder::LPMMSE);
    CHECK(local_counterpart(Precoder::MR) == Precoder::LMR);
}

TEST_CASE("MR")
{
    std::mt19937_64 rng(1);
    const CVec h = random_cmat(4, 1, rng);
    CHECK((mr_direction(h, RVec::Ones(4)) - h).norm() == 0.0);
    CHECK(mr_direction(h, RVec::Zero(4)).norm() == 0.0);
    RVec D = RVec::Zero(4);
    D(1) = 1.0;
    const CVec w = mr_direction(h, D);
    CHECK(w(1) == h(1));
    CHECK(std::abs(w(0)) == 0.0);
}

TEST_CASE("P-MMSE closed form and limits")
{
    std::mt19937_64 rng(2);
    const CMat H = random_cmat(4, 3, rng);
    const auto sets = two_aau_sets();
    RVec p(3);
    p << 0.1, 0.2, 0.05;
    const double s2 = 0.3;

    // Dense oracle on the support of D_0 (full here).
    CMat A = s2 * CMat::Identity(4, 4);
    for (int i = 0; i < 3; ++i)
        A += p(i) * H.col(i) * H.col(i).adjoint();
    const CVec ref = p(0) * A.inverse() * H.col(0);
    CHECK((pmmse_direction(0, H, sets.D[0], p, s2) - ref).norm() < 1e-12 * ref.norm());

    // Restricted support: the unserved block stays zero.
    const CVec w1 = pmmse_direction(1, H, sets.D[1], p, s2);
    CHECK(w1.tail(2).norm() == 0.0);
    CMat A1 = s2 * CMat::Identity(2, 2);
    for (int i = 0; i < 3; ++i)
        A1 += p(i) * H.col(i).head(2) * H.col(i).head(2).adjoint();
    CHECK((w1.head(2) - p(1) * A1.inverse() * H.col(1).head(2)).norm() < 1e-12);

    const CMat all = pmmse_directions(H, sets.D, p, s2);
    for (int k = 0; k < 3; ++k)
        CHECK((all.col(k) - pmmse_direction(k, H, sets.D[k], p, s2)).norm() < 1e-12);

    // Noise-limited regime tends to scaled MR.
    const CVec big = pmmse_direction(0, H, sets.D[0], p, 1e9);
    CHECK(angle(big, H.col(0)) < 1e-6);
    CHECK((big - (p(0) / 1e9) * H.col(0)).norm() < 1e-6 * big.norm());

    const RVec zero_p = RVec::Zero(1);
    CHECK(pmmse_direction(0, H.leftCols(1), RVec::Ones(4), zero_p, s2).norm() == 0.0);
}

TEST_CASE("local precoders")
{
    std::mt19937_64 rng(3);
    const CMat H_l = random_cmat(3, 4, rng);
    RVec p = RVec::Constant(4, 0.1);

    const CVec lp = lpmmse_direction(2, H_l, {2}, p, 0.5);
    CHECK(angle(lp, lmr_direction(H_l.col(2))) < 1e-7);
    CHECK(lpmmse_direction(1, CMat::Zero(3, 4), {0, 1}, p, 0.5).norm() == 0.0);

    // One AAU serving everyone: LP-MMSE coincides with P-MMSE.
    ServingSets one;
    one.rf_chains = 3;
    one.D.assign(4, RVec::Ones(3));
    one.D_l = {{0, 1, 2, 3}};
    const CMat Wp = directions(Precoder::PMMSE, H_l, one, p, 0.5);
    const CMat Wl = directions(Precoder::LPMMSE, H_l, one, p, 0.5);
    CHECK((Wp - Wl).norm() < 1e-12 * Wp.norm());

    const auto sets = two_aau_sets();
    const CMat H = random_cmat(4, 3, rng);
    const CMat Wlocal = directions(Precoder::LMR, H, sets, p.head(3), 0.5);
    CHECK(Wlocal.col(1).tail(2).norm() == 0.0);
    CHECK((Wlocal.col(0) - H.col(0)).norm() == 0.0);
    const CMat Wlp = directions(Precoder::LPMMSE, H, sets, p.head(3), 0.5);
    CHECK((Wlp.col(0).head(2) - lpmmse_direction(0, H.topRows(2), {0, 1}, p.head(3), 0.5)).norm() < 1e-14);
    CHECK(Wlp.col(2).head(2).norm() == 0.0);
}

TEST_CASE("power normalization")
{
    ScenarioConfig c;
    CHECK(c.dl_power_per_ue_w() == doctest::Approx(0.5));

    std::mt19937_64 rng(4);
    const CVec raw = random_cmat(6, 1, rng);
    CHECK(normalize_downlink(raw, 0.5).squaredNorm() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK((normalize_downlink(7.0 * raw, 0.5) - normalize_downlink(raw, 0.5)).norm() < 1e-14);

    const auto sets = two_aau_sets();
    CMat W = random_cmat(4, 3, rng);
    W.col(1).tail(2).setZero();
    W.col(2).head(2).setZero();
    CMat Wc = W;
    normalize_columns(Wc, Precoder::PMMSE, sets, 0.5, direction_norms2(Wc, Precoder::PMMSE, sets));
    for (int k = 0; k < 3; ++k)
        CHECK(Wc.col(k).squaredNorm() == doctest::Approx(0.5).epsilon(1e-12));

    CMat Wd = W;
    const RMat n2 = direction_norms2(Wd, Precoder::LPMMSE, sets);
    CHECK(n2.rows() == 2);
    normalize_columns(Wd, Precoder::LPMMSE, sets, 0.5, n2);
    CHECK(Wd.col(0).head(2).squaredNorm() == doctest::Approx(0.5));
    CHECK(Wd.col(0).tail(2).squaredNorm() == doctest::Approx(0.5));
    CHECK(Wd.col(2).tail(2).squaredNorm() == doctest::Approx(0.5));
    CHECK(Wd.col(2).head(2).norm() == 0.0);

    CMat Wz = W;
    Wz.col(1).setZero();
    CHECK_THROWS_AS(normalize_columns(Wz, Precoder::MR, sets, 0.5, direction_norms2(Wz, Precoder::MR, sets)), Error);
    normalize_columns(Wz, Precoder::MR, sets, 0.5, direction_norms2(Wz, Precoder::MR, sets), true);
    CHECK(Wz.col(1).norm() == 0.0);
    CHECK(Wz.col(0).squaredNorm() == doctest::Approx(0.5));
}
