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

#include "cfmimo/precoding.hpp"

#include <cmath>

namespace cfmimo
{

const char *precoder_name(Precoder p)
{
    switch (p)
    {
    case Precoder::MR:
        return "MR";
    case Precoder::PMMSE:
        return "P-MMSE";
    case Precoder::LMR:
        return "L-MR";
    case Precoder::LPMMSE:
        return "LP-MMSE";
    }
    return "unknown";
}

Precoder parse_precoder(const std::string &name)
{
    for (Precoder p : {Precoder::MR, Precoder::PMMSE, Precoder::LMR, Precoder::LPMMSE})
        if (name == precoder_name(p))
            return p;
    throw Error("InvalidConfig", "unknown precoder '" + name + "' (MR, P-MMSE, L-MR, LP-MMSE)");
}

bool is_distributed(Precoder p) { return p == Precoder::LMR || p == Precoder::LPMMSE; }

Precoder local_counterpart(Precoder p)
{
    return (p == Precoder::MR || p == Precoder::LMR) ? Precoder::LMR : Precoder::LPMMSE;
}

CVec mr_direction(const CVec &h_k, const RVec &D_k) { return D_k.cast<cd>().cwiseProduct(h_k); }

namespace
{

std::vector<Eigen::Index> support(const RVec &D)
{
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < D.size(); ++i)
        if (D(i) != 0.0)
            idx.push_back(i);
    return idx;
}

// Solves the Hermitian system restricted to idx and embeds the solution.
CVec restricted_solve(const CMat &gram, double sigma2, const CVec &h, const std::vector<Eigen::Index> &idx,
                      double scale)
{
    const auto n = static_cast<Eigen::Index>(idx.size());
    CVec out = CVec::Zero(h.size());
    if (n == 0)
        return out;
    CMat A(n, n);
    CVec rhs(n);
    for (Eigen::Index r = 0; r < n; ++r)
    {
        for (Eigen::Index c = 0; c < n; ++c)
            A(r, c) = gram(idx[r], idx[c]);
        A(r, r) += sigma2;
        rhs(r) = h(idx[r]);
    }
    Eigen::LDLT<CMat> ldlt(A);
    const RVec piv = ldlt.vectorD().cwiseAbs();
    const double top = A.diagonal().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(piv.minCoeff() > 1e-14 * std::max(top, 1e-300)))
        throw Error("SingularSystem", "regularized MMSE system is numerically singular");
    const CVec x = ldlt.solve(rhs);
    for (Eigen::Index r = 0; r < n; ++r)
        out(idx[r]) = scale * x(r);
    return out;
}

CMat weighted_gram(const CMat &H, const RVec &p)
{
    CMat Hp = H;
    for (Eigen::Index j = 0; j < H.cols(); ++j)
        Hp.col(j) *= std::sqrt(p(j));
    CMat G = CMat::Zero(H.rows(), H.rows());
    G.selfadjointView<Eigen::Lower>().rankUpdate(Hp);
    return G.selfadjointView<Eigen::Lower>();
}

} // namespace

CVec pmmse_direction(int k, const CMat &H, const RVec &D_k, const RVec &p, double sigma2)
{
    if (p(k) == 0.0)
        return CVec::Zero(H.rows());
    return restricted_solve(weighted_gram(H, p), sigma2, H.col(k), support(D_k), p(k));
}

CMat pmmse_directions(const CMat &H, const std::vector<RVec> &D, const RVec &p, double sigma2)
{
    const CMat gram = weighted_gram(H, p);
    CMat W = CMat::Zero(H.rows(), H.cols());
    for (Eigen::Index k = 0; k < H.cols(); ++k)
        if (p(k) != 0.0)
            W.col(k) = restricted_solve(gram, sigma2, H.col(k), support(D[k]), p(k));
    return W;
}

CVec lmr_direction(const CVec &h_kl) { return h_kl; }

CVec lpmmse_direction(int k, const CMat &H_l, const std::vector<int> &served, const RVec &p, double sigma2)
{
    const auto R = H_l.rows();
    CMat A = sigma2 * CMat::Identity(R, R);
    for (int i : served)
        A.noalias() += p(i) * H_l.col(i) * H_l.col(i).adjoint();
    // sigma2 > 0 keeps A positive definite.
    return p(k) * A.ldlt().solve(H_l.col(k));
}

CMat directions(Precoder kind, const CMat &H, const ServingSets &sets, const RVec &p, double sigma2)
{
    const auto K = H.cols();
    const int R = sets.rf_chains;
    const int L = static_cast<int>(sets.D_l.size());
    CMat W = CMat::Zero(H.rows(), K);
    switch (kind)
    {
    case Precoder::MR:
        for (Eigen::Index k = 0; k < K; ++k)
            W.col(k) = mr_direction(H.col(k), sets.D[k]);
        break;
    case Precoder::PMMSE:
        W = pmmse_directions(H, sets.D, p, sigma2);
        break;
    case Precoder::LMR:
        for (int l = 0; l < L; ++l)
            for (int k : sets.D_l[l])
                W.col(k).segment(l * R, R) = lmr_direction(H.col(k).segment(l * R, R));
        break;
    case Precoder::LPMMSE:
        for (int l = 0; l < L; ++l)
        {
            if (sets.D_l[l].empty())
                continue;
            const CMat H_l = H.middleRows(l * R, R);
            const auto lhs_rows = R;
            CMat A = sigma2 * CMat::Identity(lhs_rows, lhs_rows);
            for (int i : sets.D_l[l])
                A.noalias() += p(i) * H_l.col(i) * H_l.col(i).adjoint();
            const Eigen::LDLT<CMat> ldlt(A);
            for (int k : sets.D_l[l])
                W.col(k).segment(l * R, R) = p(k) * ldlt.solve(H_l.col(k));
        }
        break;
    }
    return W;
}

RMat direction_norms2(const CMat &W, Precoder kind, const ServingSets &sets)
{
    const auto K = W.cols();
    if (!is_distributed(kind))
    {
        RMat n(1, K);
        for (Eigen::Index k = 0; k < K; ++k)
            n(0, k) = W.col(k).squaredNorm();
        return n;
    }
    const int R = sets.rf_chains;
    const int L = static_cast<int>(sets.D_l.size());
    RMat n(L, K);
    for (int l = 0; l < L; ++l)
        for (Eigen::Index k = 0; k < K; ++k)
            n(l, k) = W.col(k).segment(l * R, R).squaredNorm();
    return n;
}

void normalize_columns(CMat &W, Precoder kind, const ServingSets &sets, double rho, const RMat &norms2,
                       bool allow_zero)
{
    const auto K = W.cols();
    auto zero = [allow_zero](Eigen::Index k) {
        if (allow_zero)
            return;
        throw Error("ZeroDirection", "served UE " + std::to_string(k + 1) + " has a zero precoding direction");
    };
    if (!is_distributed(kind))
    {
        for (Eigen::Index k = 0; k < K; ++k)
        {
            if (sets.D[k].sum() == 0.0)
                continue;
            if (!(norms2(0, k) > 0.0))
            {
                zero(k);
                W.col(k).setZero();
                continue;
            }
            W.col(k) *= std::sqrt(rho / norms2(0, k));
        }
        return;
    }
    const int R = sets.rf_chains;
    const int L = static_cast<int>(sets.D_l.size());
    for (int l = 0; l < L; ++l)
        for (int k : sets.D_l[l])
        {
            if (!(norms2(l, k) > 0.0))
            {
                zero(k);
                W.col(k).segment(l * R, R).setZero();
                continue;
            }
            W.col(k).segment(l * R, R) *= std::sqrt(rho / norms2(l, k));
        }
}

CVec normalize_downlink(const CVec &raw, double rho)
{
    const double n2 = raw.squaredNorm();
    if (!(n2 > 0.0))
        throw Error("ZeroDirection", "precoding direction is zero");
    return raw * std::sqrt(rho / n2);
}

} // namespace cfmimo
