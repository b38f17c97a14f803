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

#include "cfmimo/td_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cfmimo/kernels.hpp"

namespace cfmimo::td
{

CVec synthesize(const CVec &X, int cp_length)
{
    const int M = static_cast<int>(X.size());
    CVec x(M + cp_length);
    for (int t = -cp_length; t < M; ++t)
    {
        cd acc = 0.0;
        for (int m = 0; m < M; ++m)
            acc += X(m) * expj(2.0 * kPi * static_cast<double>((static_cast<long>(m) * (t + M)) % M) / M);
        x(t + cp_length) = acc;
    }
    return x;
}

CVec analyze(const CVec &window)
{
    const int M = static_cast<int>(window.size());
    CVec X(M);
    for (int m = 0; m < M; ++m)
    {
        cd acc = 0.0;
        for (int t = 0; t < M; ++t)
            acc += window(t) * expj(-2.0 * kPi * static_cast<double>((static_cast<long>(m) * t) % M) / M);
        X(m) = acc / static_cast<double>(M);
    }
    return X;
}

CVec propagate(const CVec &stream, const CVec &taps, int delay, std::size_t out_len)
{
    const long n = static_cast<long>(stream.size());
    if (std::abs(static_cast<long>(delay)) + static_cast<long>(taps.size()) - 1 >= n)
        throw Error("DelayOutOfRange", "delay plus delay spread exceeds the stream length");
    CVec y = CVec::Zero(static_cast<Eigen::Index>(out_len));
    for (long T = 0; T < static_cast<long>(out_len); ++T)
        for (long tau = 0; tau < taps.size(); ++tau)
        {
            const long u = T - delay - tau;
            if (u >= 0 && u < n)
                y(T) += taps(tau) * stream(u);
        }
    return y;
}

int contaminated_samples(int delta, int delay_spread, int cp_length, int M)
{
    // Sample t of the window reads stream position cp + t - tau - delta of the
    // current symbol; it is clean only if that is >= 0 for every tap.
    int count = 0;
    for (int t = 0; t < M; ++t)
    {
        bool clean = true;
        for (int tau = 0; tau < delay_spread; ++tau)
            if (cp_length + t - tau - delta < 0)
                clean = false;
        if (!clean)
            count = t + 1;
    }
    return count;
}

namespace
{

cd qpsk(Rng &rng)
{
    const double a = 1.0 / std::sqrt(2.0);
    const auto bits = rng();
    return {(bits & 1) ? a : -a, (bits & 2) ? a : -a};
}

struct FrameGeometry
{
    int M, Mcp, P, history, symbols, total;
};

FrameGeometry frame_geometry(const ScenarioConfig &c, int max_delay, int n_symbols)
{
    FrameGeometry g;
    g.M = c.subcarriers;
    g.Mcp = c.cp_length;
    g.P = g.M + g.Mcp;
    g.history = (std::max(max_delay, 0) + c.delay_spread + g.Mcp + g.P - 1) / g.P + 1;
    g.symbols = n_symbols;
    g.total = g.history + n_symbols + 2;
    return g;
}

// Frequency symbols for every source (UE) and OFDM symbol; mask(j, i) keeps
// source j on subcarrier i.
using Mask = std::function<bool(int, int)>;

std::vector<CMat> draw_symbols(int sources, const FrameGeometry &g, const Mask &mask, Rng &rng)
{
    std::vector<CMat> s(sources, CMat::Zero(g.M, g.total));
    for (int a = 0; a < g.total; ++a)
        for (int j = 0; j < sources; ++j)
            for (int i = 0; i < g.M; ++i)
                if (mask(j, i))
                    s[j](i, a) = qpsk(rng);
    return s;
}

CVec stream_from(const CMat &X, const FrameGeometry &g)
{
    CVec out(static_cast<Eigen::Index>(g.total) * g.P);
    for (int a = 0; a < g.total; ++a)
        out.segment(static_cast<Eigen::Index>(a) * g.P, g.P) = synthesize(X.col(a), g.Mcp);
    return out;
}

// Bin m of the window of symbol a for one link, split at eps into the cyclic
// part (t >= eps) and the erroneous part (t < eps).
std::pair<cd, cd> window_bin(const CVec &stream, const CVec &taps, int delta, int a, int m, int eps,
                             const FrameGeometry &g)
{
    const long T0 = static_cast<long>(a) * g.P + g.Mcp;
    cd cyc = 0.0, err = 0.0;
    for (int t = 0; t < g.M; ++t)
    {
        cd r = 0.0;
        for (long tau = 0; tau < taps.size(); ++tau)
        {
            const long u = T0 + t - delta - tau;
            if (u >= 0 && u < stream.size())
                r += taps(tau) * stream(u);
        }
        const cd v = r * expj(-2.0 * kPi * static_cast<double>((static_cast<long>(m) * t) % g.M) / g.M);
        (t >= eps ? cyc : err) += v;
    }
    return {cyc / static_cast<double>(g.M), err / static_cast<double>(g.M)};
}

IMat chain_advance(const OracleSetup &s)
{
    const int L = s.plan->num_aaus(), R = s.config->rf_chains;
    IMat adv = IMat::Zero(L, R);
    if (s.mode != TimingMode::PerBeamAdvance)
        return adv;
    for (int l = 0; l < L; ++l)
        for (int n = 0; n < R; ++n)
        {
            const int k = s.plan->chain_ue(l, n);
            if (k >= 0)
                adv(l, n) = s.delta(k, l);
        }
    return adv;
}

int link_delay(const OracleSetup &s, const IMat &adv, int k, int l, int n)
{
    if (s.mode == TimingMode::Synchronous)
        return 0;
    return s.delta(k, l) - adv(l, n);
}

CVec chain_taps(const OracleSetup &s, int k, int l, int n)
{
    const int beam = s.plan->chain_beam(l, n);
    return s.channels->link_taps(k, l).row(beam).transpose();
}

int max_link_delay(const OracleSetup &s, const IMat &adv)
{
    int d = 0;
    const int K = s.plan->num_ues(), L = s.plan->num_aaus(), R = s.config->rf_chains;
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
            for (int n = 0; n < R; ++n)
                d = std::max(d, std::abs(link_delay(s, adv, k, l, n)));
    return d;
}

} // namespace

std::vector<OracleTerms> measure_downlink(const OracleSetup &s, const std::vector<CMat> &W, int m, int n_symbols,
                                          Rng &rng)
{
    const auto &c = *s.config;
    const int K = c.num_ues, L = c.num_aaus, R = c.rf_chains;
    const IMat adv = chain_advance(s);
    const FrameGeometry g = frame_geometry(c, max_link_delay(s, adv), n_symbols);

    struct Link
    {
        int l, n, delta, eps;
        CVec taps;
    };
    std::vector<std::vector<Link>> links(K);
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
            for (int n = 0; n < R; ++n)
                if (s.plan->chain_ue(l, n) >= 0)
                {
                    const int d = link_delay(s, adv, k, l, n);
                    links[k].push_back({l, n, d, contaminated_samples(d, c.delay_spread, c.cp_length, g.M),
                                        chain_taps(s, k, l, n)});
                }

    // Per-chain transmit streams for a masked frame.
    auto chain_streams = [&](const Mask &mask) {
        const auto sym = draw_symbols(K, g, mask, rng);
        std::vector<CVec> out(static_cast<std::size_t>(L) * R);
        for (int l = 0; l < L; ++l)
            for (int n = 0; n < R; ++n)
            {
                CMat X = CMat::Zero(g.M, g.total);
                if (s.plan->chain_ue(l, n) >= 0)
                    for (int j = 0; j < K; ++j)
                        for (int i = 0; i < g.M; ++i)
                            if (W[i].size() && W[i](l * R + n, j) != 0.0)
                                X.row(i) += W[i](l * R + n, j) * sym[j].row(i);
                out[l * R + n] = stream_from(X, g);
            }
        return out;
    };

    // Mean of |sum cyclic|^2 and of sum_l |sum_n erroneous|^2 for UE k.
    auto measure = [&](const std::vector<CVec> &streams, int k, double &cyc_pow, double &isi_pow) {
        cyc_pow = isi_pow = 0.0;
        for (int a = g.history; a < g.history + g.symbols; ++a)
        {
            cd cyc = 0.0;
            std::vector<cd> err(L, 0.0);
            for (const auto &lk : links[k])
            {
                const auto [yc, ye] = window_bin(streams[lk.l * R + lk.n], lk.taps, lk.delta, a, m, lk.eps, g);
                cyc += yc;
                err[lk.l] += ye;
            }
            cyc_pow += std::norm(cyc);
            for (const cd &e : err)
                isi_pow += std::norm(e);
        }
        cyc_pow /= g.symbols;
        isi_pow /= g.symbols;
    };

    std::vector<OracleTerms> out(K);
    double unused = 0.0;
    for (int k = 0; k < K; ++k)
    {
        measure(chain_streams([&](int j, int i) { return j == k && i == m; }), k, out[k].desired, unused);
        measure(chain_streams([&](int j, int i) { return j != k && i == m; }), k, out[k].inter_user, unused);
    }
    const auto ici_streams = chain_streams([&](int, int i) { return i != m; });
    const auto all_streams = chain_streams([](int, int) { return true; });
    for (int k = 0; k < K; ++k)
    {
        measure(ici_streams, k, out[k].ici, unused);
        measure(all_streams, k, unused, out[k].isi);
    }
    return out;
}

std::vector<OracleTerms> measure_uplink(const OracleSetup &s, const CMat &V, double p, int m, int n_symbols,
                                        Rng &rng)
{
    const auto &c = *s.config;
    const int K = c.num_ues, L = c.num_aaus, R = c.rf_chains;
    const IMat adv = chain_advance(s);
    const FrameGeometry g = frame_geometry(c, max_link_delay(s, adv), n_symbols);

    struct Link
    {
        int j, row, delta, eps;
        CVec taps;
    };
    std::vector<Link> links;
    for (int j = 0; j < K; ++j)
        for (int l = 0; l < L; ++l)
            for (int n = 0; n < R; ++n)
                if (s.plan->chain_ue(l, n) >= 0)
                {
                    const int d = link_delay(s, adv, j, l, n);
                    links.push_back({j, l * R + n, d, contaminated_samples(d, c.delay_spread, c.cp_length, g.M),
                                     chain_taps(s, j, l, n)});
                }

    auto ue_streams = [&](const Mask &mask) {
        const auto sym = draw_symbols(K, g, mask, rng);
        std::vector<CVec> out(K);
        for (int j = 0; j < K; ++j)
            out[j] = stream_from(std::sqrt(p) * sym[j], g);
        return out;
    };

    // Mean |v_k^H y_cyc|^2 and |v_k^H y_err|^2 over the measured symbols.
    auto measure = [&](const std::vector<CVec> &streams, int k, double &cyc_pow, double &err_pow) {
        cyc_pow = err_pow = 0.0;
        for (int a = g.history; a < g.history + g.symbols; ++a)
        {
            cd cyc = 0.0, err = 0.0;
            for (const auto &lk : links)
            {
                const cd w = std::conj(V(lk.row, k));
                if (w == 0.0)
                    continue;
                const auto [yc, ye] = window_bin(streams[lk.j], lk.taps, lk.delta, a, m, lk.eps, g);
                cyc += w * yc;
                err += w * ye;
            }
            cyc_pow += std::norm(cyc);
            err_pow += std::norm(err);
        }
        cyc_pow /= g.symbols;
        err_pow /= g.symbols;
    };

    std::vector<OracleTerms> out(K);
    double unused = 0.0;
    for (int k = 0; k < K; ++k)
    {
        measure(ue_streams([&](int j, int i) { return j == k && i == m; }), k, out[k].desired, unused);
        measure(ue_streams([&](int j, int i) { return j != k && i == m; }), k, out[k].inter_user, unused);
    }
    const auto ici_streams = ue_streams([&](int, int i) { return i != m; });
    const auto all_streams = ue_streams([](int, int) { return true; });
    for (int k = 0; k < K; ++k)
    {
        measure(ici_streams, k, out[k].ici, unused);
        measure(all_streams, k, unused, out[k].isi);
    }
    return out;
}

cd probe_factor(const CVec &taps, int delta, int i, int m, const ScenarioConfig &c)
{
    const int M = c.subcarriers, Mcp = c.cp_length, P = M + Mcp;
    const int symbols = std::max(3, (std::abs(delta) + static_cast<int>(taps.size()) + Mcp) / P + 3);
    const int pilot_symbol = symbols / 2;
    CVec stream = CVec::Zero(static_cast<Eigen::Index>(symbols) * P);
    CVec X = CVec::Zero(M);
    X(i) = 1.0;
    stream.segment(static_cast<Eigen::Index>(pilot_symbol) * P, P) = synthesize(X, Mcp);
    const CVec rx = propagate(stream, taps, delta, static_cast<std::size_t>(stream.size()));
    const CVec window = rx.segment(static_cast<Eigen::Index>(pilot_symbol) * P + Mcp, M);
    return analyze(window)(m);
}

} // namespace cfmimo::td
