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

#include <functional>
#include <string>
#include <vector>

#include "cfmimo/config.hpp"
#include "cfmimo/rng.hpp"
#include "cfmimo/types.hpp"

namespace cfmimo
{

// Joint beam selection and UE association. Indices are 0-based except the
// beam entries of b, which are 1-based with 0 meaning unserved.
struct AssociationPlan
{
    IMat u; // K x L, 1 if AAU l serves UE k
    IMat b; // K x L, beam index in 1..N, 0 if unserved
    // Per AAU, the served UEs in RF-chain order. Chain n of AAU l serves
    // chains[l][n] through beam b(chains[l][n], l).
    std::vector<std::vector<int>> chains;

    int num_ues() const { return static_cast<int>(u.rows()); }
    int num_aaus() const { return static_cast<int>(u.cols()); }

    // UE on chain n of AAU l, or -1 if the chain is idle.
    int chain_ue(int l, int n) const;
    // 0-based beam on chain n of AAU l, or -1 if the chain is idle.
    int chain_beam(int l, int n) const;
    // Gamma_l in chain order, 1-based.
    std::vector<int> selected_beams(int l) const;
};

AssociationPlan empty_plan(int num_ues, int num_aaus);
// Records that AAU l serves UE k on beam (0-based) on the next free chain.
void assign(AssociationPlan &plan, int k, int l, int beam);

// S_l: N x N_RF, one 1 per used column selecting the chain's beam.
RMat selection_matrix(const AssociationPlan &plan, int l, int N, int rf_chains);
// D_k = diag(u_k1..u_kL) kron I_{N_RF}, as the diagonal.
RVec block_association(const AssociationPlan &plan, int k, int rf_chains);

struct PlanViolation
{
    std::string kind; // BCC, RfChains, BeamRange, Inconsistent
    int aau = -1;     // 1-based for display
    int beam = 0;     // 1-based
    int ue = -1;      // 1-based
    std::string message;
};

std::vector<PlanViolation> validate_plan(const AssociationPlan &plan, const ScenarioConfig &config);

// Inputs to the association heuristics, evaluated at the reference
// subcarrier: gain[k](n, l) = |h~_{k,l}(n)|^2, beta(k, l) linear, and the
// raw per-link residual offsets eps(k, l) in samples.
struct AssociationInputs
{
    RMat beta;
    std::vector<RMat> gain;
    IMat eps;
};

// Stage-1 ordering / Algorithm 2 association metric (M / (M - eps)) * beta.
double weighted_beta(double beta, int eps, int M);
// Stage-2 metric ((M - eps) / M)^2 * gain.
double discounted_gain(double gain, int eps, int M);

AssociationPlan algorithm1(const AssociationInputs &in, const ScenarioConfig &config);
AssociationPlan algorithm2(const AssociationInputs &in, const ScenarioConfig &config);
AssociationPlan random_association(Rng &rng, const ScenarioConfig &config);

enum class AssociationAlgorithm
{
    Algorithm1,
    Algorithm2,
    Random
};

const char *association_name(AssociationAlgorithm a);
AssociationAlgorithm parse_association(const std::string &name);

// Every AAU runs the inner heuristic on its own; rates are combined per UE
// as a max over the AAUs that selected it.
AssociationPlan small_cell_association(const AssociationInputs &in, const ScenarioConfig &config,
                                       AssociationAlgorithm inner);

using PlanEvaluator = std::function<double(const AssociationPlan &)>;

// Number of feasible plans with exactly min(N_RF, K) UEs per AAU.
double brute_force_plan_count(const ScenarioConfig &config);

// Exhaustive search over all such plans; the first plan in enumeration
// order wins ties. Throws SearchSpaceTooLarge above max_plans.
AssociationPlan brute_force_best(const ScenarioConfig &config, const PlanEvaluator &evaluator,
                                 double max_plans = 1e6);

// Schema "cfmimo.plan/1".
std::string plan_to_json_text(const AssociationPlan &plan, int indent = 2);
AssociationPlan plan_from_json_text(const std::string &text);

} // namespace cfmimo
