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

#pragma once

#include <string>
#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

enum class Precoder
{
    MR,
    PMMSE,
    LMR,
    LPMMSE
};

const char *precoder_name(Precoder p);
Precoder parse_precoder(const std::string &name);
bool is_distributed(Precoder p);
// Local counterpart used when each UE is served by one AAU on its own.
Precoder local_counterpart(Precoder p);

// Directions are computed from effective channels: column j of H (length
// L * N_RF) is the phase-rotated reduced beam channel of UE j, i.e. the
// vector whose inner product h^H w gives the received amplitude. D holds the
// 0/1 diagonal of D_j per UE.

// D_k * h_k
CVec mr_direction(const CVec &h_k, const RVec &D_k);

// p_k (sum_i p_i D_k h_i h_i^H D_k + sigma2 D_k)^{-1} D_k h_k, solved on the
// support of D_k and embedded. Throws SingularSystem if that restricted
// system is numerically singular.
CVec pmmse_direction(int k, const CMat &H, const RVec &D_k, const RVec &p, double sigma2);

// Same for every UE, sharing one Gram matrix. Column k of the result is UE k.
CMat pmmse_directions(const CMat &H, const std::vector<RVec> &D, const RVec &p, double sigma2);

// Local forms on one AAU block of N_RF entries. served lists D_l.
CVec lmr_direction(const CVec &h_kl);
CVec lpmmse_direction(int k, const CMat &H_l, const std::vector<int> &served, const RVec &p, double sigma2);

// All directions for one subcarrier. For distributed precoders the block of
// AAU l is filled only for the UEs it serves.
struct ServingSets
{
    int rf_chains = 0;
    std::vector<RVec> D;                // per UE, length L * N_RF
    std::vector<std::vector<int>> D_l;  // per AAU, served UEs ascending
};

CMat directions(Precoder kind, const CMat &H, const ServingSets &sets, const RVec &p, double sigma2);

// Scales each UE column (centralized) or each served AAU block (distributed)
// to norm^2 = rho. norms2 holds the reference squared norms used for the
// division; pass the instantaneous norms or an average. Throws ZeroDirection
// for a served UE whose reference norm is zero, unless allow_zero is set, in
// which case such a UE keeps a zero precoder.
void normalize_columns(CMat &W, Precoder kind, const ServingSets &sets, double rho, const RMat &norms2,
                       bool allow_zero = false);

// Squared norms per UE (row 0) or per (AAU block, UE) for distributed precoders:
// result is (L x K) for distributed, (1 x K) for centralized.
RMat direction_norms2(const CMat &W, Precoder kind, const ServingSets &sets);

// Convenience: per-realization normalization of a single vector.
CVec normalize_downlink(const CVec &raw, double rho);

} // namespace cfmimo
