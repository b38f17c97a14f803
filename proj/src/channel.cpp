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

#include "cfmimo/channel.hpp"

#include <cmath>
#include <sstream>

namespace cfmimo
{

CVec array_response(double psi, int N)
{
    CVec a(N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (int q = 0; q < N; ++q)
    {
        const double i = q - (N - 1) / 2.0;
        a(q) = scale * expj(-2.0 * kPi * psi * i);
    }
    return a;
}

DftCodebook make_codebook(int N)
{
    DftCodebook cb;
    cb.N = N;
    cb.U.resize(N, N);
    cb.directions.resize(N);
    for (int n = 0; n < N; ++n)
    {
        const double dir = ((n + 1) - (N + 1) / 2.0) / N;
        cb.directions(n) = dir;
        cb.U.row(n) = array_response(dir, N).adjoint();
    }
    return cb;
}

double dirichlet(double x, int N)
{
    const double s = std::sin(kPi * x);
    if (std::abs(s) < 1e-12)
    {
        // Limit at integer x: N * (-1)^{x (N - 1)}.
        const long xi = std::lround(x);
        return ((xi * (N - 1)) % 2 == 0) ? N : -N;
    }
    return std::sin(N * kPi * x) / s;
}

PathSet sample_paths(Rng &rng, const ScenarioConfig &c)
{
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PathSet p;
    p.gains.resize(c.num_paths);
    p.delays.resize(c.num_paths);
    p.psi.resize(c.num_paths);
    for (int i = 0; i < c.num_paths; ++i)
    {
        const double re = gauss(rng);
        const double im = gauss(rng);
        p.gains[i] = {re, im};
        p.delays[i] = c.delay_max_s * unit(rng);
        const double theta = kPi * (unit(rng) - 0.5);
        p.psi[i] = 0.5 * std::sin(theta);
    }
    return p;
}

CVec beam_transform(const DftCodebook &codebook, const CVec &spatial) { return codebook.U * spatial; }

CVec channel_freq_response(const PathSet &paths, double beta, const ScenarioConfig &c, int m, FreqConvention conv)
{
    const int N = c.antennas_per_aau;
    CVec h = CVec::Zero(N);
    if (paths.size() == 0)
        return h;
    const double M = c.subcarriers;
    const double f = conv == FreqConvention::FullCarrier
                         ? c.carrier_hz + (c.bandwidth_hz / M) * (m - (M - 1.0) / 2.0)
                         : m * c.bandwidth_hz / M;
    const double scale = std::sqrt(N / (beta * paths.size()));
    for (int p = 0; p < paths.size(); ++p)
        h += (scale * paths.gains[p] * expj(-2.0 * kPi * paths.delays[p] * f)) * array_response(paths.psi[p], N);
    return h;
}

CMat beam_taps(const PathSet &paths, double beta, const ScenarioConfig &c, const DftCodebook &codebook)
{
    const int N = c.antennas_per_aau;
    CMat taps = CMat::Zero(N, c.delay_spread);
    if (paths.size() == 0)
        return taps;
    const double scale = std::sqrt(N / (beta * paths.size()));
    for (int p = 0; p < paths.size(); ++p)
    {
        const long t = std::lround(paths.delays[p] / c.sample_period());
        if (t < 0 || t >= c.delay_spread)
        {
            std::ostringstream os;
            os << "path delay " << paths.delays[p] << " s quantizes to tap " << t << ", delay_spread is "
               << c.delay_spread;
            throw Error("DelaySpreadExceeded", os.str());
        }
        const cd gain = scale * paths.gains[p] * expj(-2.0 * kPi * paths.delays[p] * c.carrier_hz);
        taps.col(t) += gain * (codebook.U * array_response(paths.psi[p], N));
    }
    return taps;
}

CVec taps_to_freq(const CMat &taps, int m, int M)
{
    CVec g = CVec::Zero(taps.rows());
    for (Eigen::Index t = 0; t < taps.cols(); ++t)
        g += expj(-2.0 * kPi * static_cast<double>((static_cast<long>(m) * t) % M) / M) * taps.col(t);
    return g;
}

ChannelRealization generate_channels(const ScenarioConfig &c, const LargeScaleMap &lsf, const DftCodebook &codebook,
                                     Rng &rng)
{
    ChannelRealization ch;
    ch.num_ues = c.num_ues;
    ch.num_aaus = c.num_aaus;
    const std::size_t n = static_cast<std::size_t>(c.num_ues) * c.num_aaus;
    ch.paths.reserve(n);
    ch.taps.reserve(n);
    for (int k = 0; k < c.num_ues; ++k)
        for (int l = 0; l < c.num_aaus; ++l)
        {
            ch.paths.push_back(sample_paths(rng, c));
            ch.taps.push_back(beam_taps(ch.paths.back(), lsf.beta_linear(k, l), c, codebook));
        }
    return ch;
}

std::vector<CMat> beam_responses(const ChannelRealization &ch, int m, int M)
{
    std::vector<CMat> out(ch.num_ues);
    for (int k = 0; k < ch.num_ues; ++k)
    {
        const auto N = ch.link_taps(k, 0).rows();
        out[k].resize(N, ch.num_aaus);
        for (int l = 0; l < ch.num_aaus; ++l)
            out[k].col(l) = taps_to_freq(ch.link_taps(k, l), m, M);
    }
    return out;
}

} // namespace cfmimo
