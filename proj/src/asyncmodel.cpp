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

#include "cfmimo/asyncmodel.hpp"

#include <algorithm>
#include <cmath>

namespace cfmimo
{

int epsilon(int delta, int delay_spread, int cp_length) { return std::max(delay_spread - 1 + delta - cp_length, 0); }

cd w_coeff(int eps, int q, int M)
{
    eps = std::clamp(eps, 0, M);
    q = ((q % M) + M) % M;
    if (q == 0)
        return {static_cast<double>(M - eps), 0.0};
    const double step = -2.0 * kPi * q / M;
    const long qe = (static_cast<long>(q) * eps) % M;
    return (expj(-2.0 * kPi * qe / M) - 1.0) / (1.0 - expj(step));
}

cd chi(int delta, int m, int M)
{
    const long r = ((static_cast<long>(m) * delta) % M + M) % M;
    return expj(-2.0 * kPi * r / M);
}

cd kappa(int delta_eff, int i, int m, int M, int delay_spread, int cp_length)
{
    const int e = epsilon(delta_eff, delay_spread, cp_length);
    return chi(delta_eff, i, M) * w_coeff(e, m - i, M) / static_cast<double>(M);
}

BeamTimingPlan pbta_plan(const AssociationPlan &plan, const IMat &delta, int rf_chains)
{
    const int L = plan.num_aaus();
    BeamTimingPlan out;
    out.advance = IMat::Zero(L, rf_chains);
    out.serving = IMat::Constant(L, rf_chains, -1);
    for (int l = 0; l < L; ++l)
        for (int n = 0; n < rf_chains; ++n)
        {
            const int k = plan.chain_ue(l, n);
            if (k < 0)
                continue;
            if (plan.chain_beam(l, n) < 0)
                throw Error("UnservedBeam", "chain " + std::to_string(n + 1) + " of AAU " + std::to_string(l + 1) +
                                                " has a UE but no beam");
            out.serving(l, n) = k;
            out.advance(l, n) = delta(k, l);
        }
    return out;
}

EffectiveOffsets effective_offsets(const IMat &delta, const AssociationPlan &plan, TimingMode mode,
                                   const ScenarioConfig &c)
{
    const int K = static_cast<int>(delta.rows());
    const int L = static_cast<int>(delta.cols());
    const int R = c.rf_chains;
    EffectiveOffsets out;
    out.rf_chains = R;
    out.delta = IMat::Zero(K, L * R);
    out.eps = IMat::Zero(K, L * R);
    if (mode == TimingMode::Synchronous)
        return out;
    BeamTimingPlan timing;
    if (mode == TimingMode::PerBeamAdvance)
        timing = pbta_plan(plan, delta, R);
    for (int l = 0; l < L; ++l)
        for (int n = 0; n < R; ++n)
        {
            if (plan.chain_ue(l, n) < 0)
                continue;
            const int adv = mode == TimingMode::PerBeamAdvance ? timing.advance(l, n) : 0;
            for (int k = 0; k < K; ++k)
            {
                const int d = delta(k, l) - adv;
                out.delta(k, l * R + n) = d;
                out.eps(k, l * R + n) = epsilon(d, c.delay_spread, c.cp_length);
            }
        }
    return out;
}

CVec theta_diagonal(int k, int m, int i, const EffectiveOffsets &off, const ScenarioConfig &c)
{
    const auto n = off.delta.cols();
    CVec d(n);
    for (Eigen::Index j = 0; j < n; ++j)
        d(j) = kappa(off.delta(k, j), i, m, c.subcarriers, c.delay_spread, c.cp_length);
    return d;
}

CMat theta_block(int k, int m, int i, const EffectiveOffsets &off, const ScenarioConfig &c)
{
    return theta_diagonal(k, m, i, off, c).asDiagonal();
}

} // namespace cfmimo
