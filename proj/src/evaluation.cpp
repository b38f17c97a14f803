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

#include "cfmimo/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cfmimo/kernels.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo
{

const char *scenario_name(Scenario s)
{
    switch (s)
    {
    case Scenario::Syn:
        return "Syn";
    case Scenario::Asyn:
        return "Asyn";
    case Scenario::PBTA:
        return "PBTA";
    case Scenario::Cellular:
        return "Cellular";
    }
    return "unknown";
}

Scenario parse_scenario(const std::string &name)
{
    for (Scenario s : {Scenario::Syn, Scenario::Asyn, Scenario::PBTA, Scenario::Cellular})
        if (name == scenario_name(s))
            return s;
    throw Error("InvalidConfig", "unknown scenario '" + name + "' (Syn, Asyn, PBTA, Cellular)");
}

const char *direction_name(Direction d) { return d == Direction::Downlink ? "dl" : "ul"; }

Direction parse_direction(const std::string &name)
{
    if (name == "dl")
        return Direction::Downlink;
    if (name == "ul")
        return Direction::Uplink;
    throw Error("InvalidConfig", "unknown direction '" + name + "' (dl, ul)");
}

TimingMode timing_mode(Scenario s)
{
    switch (s)
    {
    case Scenario::Asyn:
        return TimingMode::Asynchronous;
    case Scenario::PBTA:
        return TimingMode::PerBeamAdvance;
    default:
        return TimingMode::Synchronous;
    }
}

double PowerTerms::sinr() const
{
    if (desired <= 0.0)
        return 0.0;
    return desired / interference();
}

double spectral_efficiency(double gamma, int M, int cp_length)
{
    return static_cast<double>(M) / (M + cp_length) * std::log2(1.0 + gamma);
}

double LinkReport::sum_se() const
{
    double s = 0.0;
    for (double v : se)
        s += v;
    return s;
}

Drop generate_drop(const ScenarioConfig &config, std::uint64_t drop_index)
{
    require_valid(config);
    Drop d;
    d.config = config;
    Rng layout_rng = make_rng(config.rng_seed, drop_index, Stream::Layout);
    d.layout = generate_layout(config, layout_rng);
    Rng shadow_rng = make_rng(config.rng_seed, drop_index, Stream::Shadowing);
    d.lsf = large_scale_fading(d.layout, config, shadow_rng);
    d.offsets = compute_timing_offsets(d.layout, config);
    d.codebook = make_codebook(config.antennas_per_aau);
    Rng path_rng = make_rng(config.rng_seed, drop_index, Stream::Paths);
    d.channels = generate_channels(config, d.lsf, d.codebook, path_rng);
    return d;
}

AssociationInputs association_inputs(const Drop &d)
{
    const auto &c = d.config;
    AssociationInputs in;
    in.beta = d.lsf.beta_linear;
    const auto G = beam_responses(d.channels, c.ref_subcarrier(), c.subcarriers);
    in.gain.resize(G.size());
    for (std::size_t k = 0; k < G.size(); ++k)
        in.gain[k] = G[k].cwiseAbs2();
    in.eps.resize(c.num_ues, c.num_aaus);
    for (int k = 0; k < c.num_ues; ++k)
        for (int l = 0; l < c.num_aaus; ++l)
            in.eps(k, l) = std::min(epsilon(d.offsets.delta_dl(k, l), c.delay_spread, c.cp_length), c.subcarriers);
    return in;
}

AssociationPlan associate(const Drop &d, AssociationAlgorithm a, std::uint64_t drop_index, std::uint64_t variant)
{
    if (a == AssociationAlgorithm::Random)
    {
        Rng rng = make_rng(d.config.rng_seed, drop_index, Stream::Association, variant);
        return random_association(rng, d.config);
    }
    const auto in = association_inputs(d);
    return a == AssociationAlgorithm::Algorithm1 ? algorithm1(in, d.config) : algorithm2(in, d.config);
}

namespace
{

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// exp(j 2 pi n / M) for n = 0..M-1.
const std::vector<cd> &unit_roots(int M)
{
    thread_local std::map<int, std::vector<cd>> cache;
    auto it = cache.find(M);
    if (it != cache.end())
        return it->second;
    std::vector<cd> r(M);
    for (int n = 0; n < M; ++n)
        r[n] = expj(2.0 * kPi * n / M);
    return cache.emplace(M, std::move(r)).first->second;
}

// Column q (0..M-1) holds exp(j 2 pi i q / M) over i.
const CMat &twiddles(int M)
{
    thread_local std::map<int, CMat> cache;
    auto it = cache.find(M);
    if (it != cache.end())
        return it->second;
    const auto &root = unit_roots(M);
    CMat T(M, M);
    for (int q = 0; q < M; ++q)
        for (int i = 0; i < M; ++i)
            T(i, q) = root[(static_cast<long>(i) * q) % M];
    return cache.emplace(M, std::move(T)).first->second;
}

cd kappa_fast(int delta, int eps, int i, int m, int M)
{
    return chi(delta, i, M) * w_coeff(eps, m - i, M) / static_cast<double>(M);
}

bool any_offset(const EffectiveOffsets &off) { return off.eps.size() > 0 && off.eps.maxCoeff() > 0; }

// Subcarriers i != m in the ICI sum, with the decimation weight.
std::vector<int> ici_sources(int m, const ScenarioConfig &c)
{
    std::vector<int> out;
    for (int i = 0; i < c.subcarriers; ++i)
        if (i != m && ((i - m) % c.ici_stride) == 0)
            out.push_back(i);
    return out;
}

} // namespace

cd IsiMap::at(int i, int s) const
{
    const int r = s - s_min;
    if (A.size() == 0 || r < 0 || r >= A.cols())
        return {0.0, 0.0};
    return A(i, r);
}

IsiMap isi_map(const CVec &taps, int delta, int m, const ScenarioConfig &c)
{
    const int M = c.subcarriers, Mcp = c.cp_length, TD = static_cast<int>(taps.size());
    const int eps = std::min(epsilon(delta, c.delay_spread, Mcp), M);
    IsiMap out;
    if (eps == 0)
        return out;
    const int P = M + Mcp;
    out.s_min = floor_div(Mcp - (TD - 1) - delta, P);
    out.A = CMat::Zero(M, 1 - out.s_min);
    const auto &root = unit_roots(M);
    const CMat &T = twiddles(M);
    for (int t = 0; t < eps; ++t)
    {
        // FFT weight of window sample t at output m, exp(-j 2 pi m t / M) / M.
        const cd wt = std::conj(root[(static_cast<long>(m) * t) % M]) / static_cast<double>(M);
        for (int tau = 0; tau < TD; ++tau)
        {
            if (taps(tau) == 0.0)
                continue;
            const int u = Mcp + t - tau - delta; // stream position relative to the current symbol
            const int s = floor_div(u, P);
            const int loc = u - s * P;
            const int q = ((loc - Mcp) % M + M) % M;
            kernels::caxpy(wt * taps(tau), T.col(q).data(), out.A.col(s - out.s_min).data(), M);
        }
    }
    return out;
}

LinkEvaluator::LinkEvaluator(const Drop &drop, AssociationPlan plan) : drop_(drop), plan_(std::move(plan))
{
    const auto &c = drop_.config;
    const int K = c.num_ues, L = c.num_aaus, R = c.rf_chains, M = c.subcarriers, TD = c.delay_spread;
    sets_.rf_chains = R;
    sets_.D.resize(K);
    sets_.D_l.assign(L, {});
    for (int k = 0; k < K; ++k)
        sets_.D[k] = block_association(plan_, k, R);
    for (int l = 0; l < L; ++l)
        for (int k = 0; k < K; ++k)
            if (plan_.u(k, l))
                sets_.D_l[l].push_back(k);

    freq_.assign(K, CMat::Zero(L * R, M));
    taps_.assign(K, CMat::Zero(L * R, TD));
    const auto &root = unit_roots(M);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
        {
            const CMat &link = drop_.channels.link_taps(k, l);
            for (int n = 0; n < R; ++n)
            {
                const int beam = plan_.chain_beam(l, n);
                if (beam < 0)
                    continue;
                const int row = l * R + n;
                taps_[k].row(row) = link.row(beam);
                for (int m = 0; m < M; ++m)
                {
                    cd g = 0.0;
                    for (int t = 0; t < TD; ++t)
                        g += link(beam, t) * std::conj(root[(static_cast<long>(m) * t) % M]);
                    freq_[k](row, m) = g;
                }
            }
        }
    p_ul_ = RVec::Constant(K, c.ul_power_per_ue_w);
}

EffectiveOffsets LinkEvaluator::offsets(Scenario s, Direction d) const
{
    const IMat &delta = d == Direction::Downlink ? drop_.offsets.delta_dl : drop_.offsets.delta_ul;
    return effective_offsets(delta, plan_, timing_mode(s), drop_.config);
}

CMat LinkEvaluator::downlink_channels(const EffectiveOffsets &off, int i, int m) const
{
    return uplink_channels(off, i, m).conjugate();
}

CMat LinkEvaluator::uplink_channels(const EffectiveOffsets &off, int i, int m) const
{
    const int K = drop_.config.num_ues, M = drop_.config.subcarriers;
    const auto n = off.delta.cols();
    CMat H(n, K);
    for (int k = 0; k < K; ++k)
        for (Eigen::Index j = 0; j < n; ++j)
        {
            const cd g = freq_[k](j, i);
            H(j, k) = g == 0.0 ? cd{} : kappa_fast(off.delta(k, j), off.eps(k, j), i, m, M) * g;
        }
    return H;
}

std::vector<CMat> LinkEvaluator::downlink_precoders(Scenario s, Precoder p) const
{
    const auto &c = drop_.config;
    const int M = c.subcarriers;
    const auto off = offsets(s, Direction::Downlink);
    const bool all = c.normalization == PowerNormalization::Statistical || (s != Scenario::Syn && any_offset(off));
    std::vector<int> which;
    if (all)
        for (int i = 0; i < M; ++i)
            which.push_back(i);
    else
        which = c.evaluation_subcarriers();

    const double sigma2 = c.noise_power_w();
    std::vector<CMat> W(M);
    RMat norm_sum;
    for (int i : which)
    {
        W[i] = directions(p, downlink_channels(off, i, i), sets_, p_ul_, sigma2);
        const RMat n2 = direction_norms2(W[i], p, sets_);
        if (c.normalization == PowerNormalization::Instantaneous)
            normalize_columns(W[i], p, sets_, c.dl_power_per_ue_w(), n2, s != Scenario::Syn);
        else
            norm_sum = norm_sum.size() ? RMat(norm_sum + n2) : n2;
    }
    if (c.normalization == PowerNormalization::Statistical)
    {
        const RMat mean = norm_sum / static_cast<double>(which.size());
        for (int i : which)
            normalize_columns(W[i], p, sets_, c.dl_power_per_ue_w(), mean, s != Scenario::Syn);
    }
    return W;
}

CMat LinkEvaluator::uplink_combiners(Scenario s, Precoder p, int m) const
{
    const auto off = offsets(s, Direction::Uplink);
    return directions(p, uplink_channels(off, m, m), sets_, p_ul_, drop_.config.noise_power_w());
}

std::vector<PowerTerms> LinkEvaluator::downlink_terms(Scenario s, const std::vector<CMat> &W, int m) const
{
    const auto &c = drop_.config;
    const int K = c.num_ues, L = c.num_aaus, R = c.rf_chains, M = c.subcarriers;
    const auto off = offsets(s, Direction::Downlink);
    std::vector<PowerTerms> out(K);

    const CMat Hm = downlink_channels(off, m, m);
    for (int k = 0; k < K; ++k)
    {
        for (int j = 0; j < K; ++j)
        {
            const double a2 = std::norm(kernels::cdotc(Hm.col(k).data(), W[m].col(j).data(), Hm.rows()));
            (j == k ? out[k].desired : out[k].inter_user) += a2;
        }
        out[k].noise = c.noise_power_w();
    }
    if (s == Scenario::Syn || !any_offset(off))
        return out;

    for (int i : ici_sources(m, c))
    {
        const CMat P = downlink_channels(off, i, m).adjoint() * W[i];
        for (int k = 0; k < K; ++k)
            out[k].ici += c.ici_stride * P.row(k).squaredNorm();
    }

    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
        {
            std::vector<IsiMap> maps(R);
            int s_min = 0;
            bool any = false;
            for (int n = 0; n < R; ++n)
            {
                const int j = l * R + n;
                if (off.eps(k, j) == 0 || plan_.chain_ue(l, n) < 0)
                    continue;
                maps[n] = isi_map(taps_[k].row(j).transpose(), off.delta(k, j), m, c);
                if (!maps[n].empty())
                {
                    s_min = std::min(s_min, maps[n].s_min);
                    any = true;
                }
            }
            if (!any)
                continue;
            // E|zeta_{k,l}|^2 = sum_{j,s,i} |sum_n A_n(s, i) w_{j,l,n}[i]|^2
            double acc = 0.0;
            CVec a(R);
            for (int s_idx = s_min; s_idx <= 0; ++s_idx)
                for (int i = 0; i < M; ++i)
                {
                    for (int n = 0; n < R; ++n)
                        a(n) = maps[n].at(i, s_idx);
                    if (a.squaredNorm() == 0.0)
                        continue;
                    acc += (a.transpose() * W[i].middleRows(l * R, R)).squaredNorm();
                }
            out[k].isi += acc;
        }
    return out;
}

std::vector<PowerTerms> LinkEvaluator::uplink_terms(Scenario s, const CMat &V, int m) const
{
    const auto &c = drop_.config;
    const int K = c.num_ues, L = c.num_aaus, R = c.rf_chains, M = c.subcarriers;
    const auto off = offsets(s, Direction::Uplink);
    std::vector<PowerTerms> out(K);

    const CMat Gm = uplink_channels(off, m, m);
    for (int k = 0; k < K; ++k)
    {
        for (int j = 0; j < K; ++j)
        {
            const double a2 = p_ul_(j) * std::norm(kernels::cdotc(V.col(k).data(), Gm.col(j).data(), V.rows()));
            (j == k ? out[k].desired : out[k].inter_user) += a2;
        }
        out[k].noise = c.noise_power_w() * kernels::sum_abs2(V.col(k).data(), V.rows());
    }
    if (s == Scenario::Syn || !any_offset(off))
        return out;

    for (int i : ici_sources(m, c))
    {
        const CMat P = V.adjoint() * uplink_channels(off, i, m);
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < K; ++j)
                out[k].ici += c.ici_stride * p_ul_(j) * std::norm(P(k, j));
    }

    // sum_j p_j sum_{s,i} |sum_{l,n} conj(v_{k,l,n}) A_{j,l,n}(s, i)|^2
    for (int j = 0; j < K; ++j)
    {
        std::vector<std::pair<int, IsiMap>> maps;
        int s_min = 0;
        for (int l = 0; l < L; ++l)
            for (int n = 0; n < R; ++n)
            {
                const int row = l * R + n;
                if (off.eps(j, row) == 0 || plan_.chain_ue(l, n) < 0)
                    continue;
                IsiMap mp = isi_map(taps_[j].row(row).transpose(), off.delta(j, row), m, c);
                if (mp.empty())
                    continue;
                s_min = std::min(s_min, mp.s_min);
                maps.emplace_back(row, std::move(mp));
            }
        if (maps.empty())
            continue;
        const int S = 1 - s_min;
        CMat B(M, S);
        for (int k = 0; k < K; ++k)
        {
            B.setZero();
            for (const auto &[row, mp] : maps)
            {
                const cd w = std::conj(V(row, k));
                if (w == 0.0)
                    continue;
                for (int r = 0; r < mp.A.cols(); ++r)
                    kernels::caxpy(w, mp.A.col(r).data(), B.col(mp.s_min + r - s_min).data(), M);
            }
            out[k].isi += p_ul_(j) * kernels::sum_abs2(B.data(), static_cast<std::size_t>(B.size()));
        }
    }
    return out;
}

LinkEvaluator::CellTerms LinkEvaluator::cellular_terms(Precoder p, Direction d, int m) const
{
    const auto &c = drop_.config;
    const int K = c.num_ues, L = c.num_aaus, R = c.rf_chains, M = c.subcarriers;
    const Precoder local = local_counterpart(p);
    const double sigma2 = c.noise_power_w();
    CellTerms out;
    out.per_aau.assign(L, std::vector<PowerTerms>(K));

    // Local beam channels of AAU l at subcarrier i, R x K.
    auto local_channels = [&](int l, int i) {
        CMat H(R, K);
        for (int k = 0; k < K; ++k)
            H.col(k) = freq_[k].block(l * R, i, R, 1);
        return H;
    };
    auto local_directions = [&](int l, const CMat &H) {
        ServingSets one;
        one.rf_chains = R;
        one.D_l = {sets_.D_l[l]};
        one.D.assign(K, RVec::Ones(R));
        return directions(local, H, one, p_ul_, sigma2);
    };

    for (int l = 0; l < L; ++l)
    {
        const auto &served = sets_.D_l[l];
        if (served.empty())
            continue;
        if (d == Direction::Downlink)
        {
            const CMat H = local_channels(l, m).conjugate();
            CMat W = local_directions(l, H);
            RMat n2(1, K);
            for (int k = 0; k < K; ++k)
                n2(0, k) = W.col(k).squaredNorm();
            if (c.normalization == PowerNormalization::Statistical)
            {
                n2.setZero();
                for (int i = 0; i < M; ++i)
                {
                    const CMat Wi = local_directions(l, local_channels(l, i).conjugate());
                    for (int k = 0; k < K; ++k)
                        n2(0, k) += Wi.col(k).squaredNorm() / M;
                }
            }
            for (int k : served)
            {
                if (!(n2(0, k) > 0.0))
                    throw Error("ZeroDirection", "served UE " + std::to_string(k + 1) + " has a zero precoder");
                W.col(k) *= std::sqrt(c.dl_power_per_ue_w() / n2(0, k));
            }
            for (int k : served)
            {
                PowerTerms &t = out.per_aau[l][k];
                for (int j : served)
                {
                    const double a2 = std::norm(kernels::cdotc(H.col(k).data(), W.col(j).data(), R));
                    (j == k ? t.desired : t.inter_user) += a2;
                }
                t.noise = sigma2;
            }
        }
        else
        {
            const CMat G = local_channels(l, m);
            const CMat V = local_directions(l, G);
            for (int k : served)
            {
                PowerTerms &t = out.per_aau[l][k];
                for (int j = 0; j < K; ++j)
                {
                    const double a2 = p_ul_(j) * std::norm(kernels::cdotc(V.col(k).data(), G.col(j).data(), R));
                    (j == k ? t.desired : t.inter_user) += a2;
                }
                t.noise = sigma2 * kernels::sum_abs2(V.col(k).data(), R);
            }
        }
    }
    return out;
}

LinkReport LinkEvaluator::evaluate(Scenario s, Precoder p, Direction d) const
{
    const auto &c = drop_.config;
    const int K = c.num_ues, L = c.num_aaus, M = c.subcarriers, Mcp = c.cp_length;
    const auto subs = c.evaluation_subcarriers();
    LinkReport rep;
    rep.scenario = s;
    rep.precoder = p;
    rep.direction = d;
    rep.terms.assign(K, {});
    rep.se.assign(K, 0.0);
    rep.sinr.assign(K, 0.0);
    const double prelog = static_cast<double>(M) / (M + Mcp);

    if (s == Scenario::Cellular)
    {
        RMat se = RMat::Zero(L, K);
        std::vector<std::vector<PowerTerms>> first;
        for (std::size_t idx = 0; idx < subs.size(); ++idx)
        {
            const auto t = cellular_terms(p, d, subs[idx]);
            if (idx == 0)
                first = t.per_aau;
            for (int l = 0; l < L; ++l)
                for (int k = 0; k < K; ++k)
                    se(l, k) += spectral_efficiency(t.per_aau[l][k].sinr(), M, Mcp) / subs.size();
        }
        rep.serving_aau.assign(K, -1);
        for (int k = 0; k < K; ++k)
        {
            for (int l = 0; l < L; ++l)
                if (plan_.u(k, l) && (rep.serving_aau[k] < 0 || se(l, k) > se(rep.serving_aau[k], k)))
                    rep.serving_aau[k] = l;
            if (rep.serving_aau[k] >= 0)
            {
                rep.se[k] = se(rep.serving_aau[k], k);
                rep.terms[k] = first[rep.serving_aau[k]][k];
                rep.sinr[k] = std::exp2(rep.se[k] / prelog) - 1.0;
            }
            else
            {
                rep.sinr[k] = 0.0;
            }
        }
        return rep;
    }

    std::vector<CMat> W;
    if (d == Direction::Downlink)
        W = downlink_precoders(s, p);
    for (std::size_t idx = 0; idx < subs.size(); ++idx)
    {
        const int m = subs[idx];
        const auto terms = d == Direction::Downlink ? downlink_terms(s, W, m) : uplink_terms(s, uplink_combiners(s, p, m), m);
        if (idx == 0)
            rep.terms = terms;
        for (int k = 0; k < K; ++k)
            rep.se[k] += spectral_efficiency(terms[k].sinr(), M, Mcp) / subs.size();
    }
    for (int k = 0; k < K; ++k)
        rep.sinr[k] = std::exp2(rep.se[k] / prelog) - 1.0;
    return rep;
}

std::vector<LinkReport> run_drop(const ScenarioConfig &config, const std::vector<EvalRequest> &requests,
                                 std::uint64_t drop_index, AssociationAlgorithm algorithm)
{
    const Drop drop = generate_drop(config, drop_index);
    LinkEvaluator eval(drop, associate(drop, algorithm, drop_index));
    std::vector<LinkReport> out;
    out.reserve(requests.size());
    for (const auto &r : requests)
        out.push_back(eval.evaluate(r.scenario, r.precoder, r.direction));
    return out;
}

} // namespace cfmimo
