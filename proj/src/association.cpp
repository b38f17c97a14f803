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

#include "cfmimo/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cfmimo
{

int AssociationPlan::chain_ue(int l, int n) const
{
    if (l < 0 || l >= static_cast<int>(chains.size()) || n < 0 || n >= static_cast<int>(chains[l].size()))
        return -1;
    return chains[l][n];
}

int AssociationPlan::chain_beam(int l, int n) const
{
    const int k = chain_ue(l, n);
    if (k < 0 || k >= b.rows())
        return -1;
    return b(k, l) - 1;
}

std::vector<int> AssociationPlan::selected_beams(int l) const
{
    std::vector<int> out;
    for (std::size_t n = 0; n < chains[l].size(); ++n)
        out.push_back(chain_beam(l, static_cast<int>(n)) + 1);
    return out;
}

AssociationPlan empty_plan(int K, int L)
{
    AssociationPlan p;
    p.u = IMat::Zero(K, L);
    p.b = IMat::Zero(K, L);
    p.chains.assign(L, {});
    return p;
}

void assign(AssociationPlan &p, int k, int l, int beam)
{
    p.u(k, l) = 1;
    p.b(k, l) = beam + 1;
    p.chains[l].push_back(k);
}

RMat selection_matrix(const AssociationPlan &p, int l, int N, int R)
{
    RMat S = RMat::Zero(N, R);
    for (int n = 0; n < R; ++n)
    {
        const int beam = p.chain_beam(l, n);
        if (beam >= 0 && beam < N)
            S(beam, n) = 1.0;
    }
    return S;
}

RVec block_association(const AssociationPlan &p, int k, int R)
{
    const int L = p.num_aaus();
    RVec d(L * R);
    for (int l = 0; l < L; ++l)
        d.segment(l * R, R).setConstant(p.u(k, l) ? 1.0 : 0.0);
    return d;
}

std::vector<PlanViolation> validate_plan(const AssociationPlan &p, const ScenarioConfig &c)
{
    std::vector<PlanViolation> out;
    const int K = p.num_ues(), L = p.num_aaus(), N = c.antennas_per_aau, R = c.rf_chains;
    auto add = [&](std::string kind, int l, int beam, int k, std::string msg) {
        out.push_back({std::move(kind), l + 1, beam, k + 1, std::move(msg)});
    };
    if (p.b.rows() != K || p.b.cols() != L || static_cast<int>(p.chains.size()) != L)
    {
        out.push_back({"Inconsistent", -1, 0, -1, "u, b and chains have mismatched shapes"});
        return out;
    }
    for (int l = 0; l < L; ++l)
    {
        std::set<int> beams;
        int served = 0;
        for (int k = 0; k < K; ++k)
        {
            const int bk = p.b(k, l);
            if (bk < 0 || bk > N)
                add("BeamRange", l, bk, k, "beam index outside 0..N");
            if ((p.u(k, l) != 0) != (bk != 0))
                add("Inconsistent", l, bk, k, "u = 1 must hold exactly when b != 0");
            if (p.u(k, l) != 0)
                ++served;
            if (bk != 0)
                beams.insert(bk);
        }
        for (int beam : beams)
        {
            int users = 0;
            for (int k = 0; k < K; ++k)
                users += p.b(k, l) == beam;
            if (users > 1)
                add("BCC", l, beam, -1, std::to_string(users) + " UEs share one beam");
        }
        if (served > R)
            add("RfChains", l, 0, -1, "more associated UEs than RF chains");

        std::vector<int> listed = p.chains[l];
        std::sort(listed.begin(), listed.end());
        std::vector<int> expected;
        for (int k = 0; k < K; ++k)
            if (p.u(k, l))
                expected.push_back(k);
        if (listed != expected)
            add("Inconsistent", l, 0, -1, "chain list does not match the association indicators");
    }
    return out;
}

double weighted_beta(double beta, int eps, int M)
{
    if (eps >= M)
        return std::numeric_limits<double>::infinity();
    return static_cast<double>(M) / (M - std::max(eps, 0)) * beta;
}

double discounted_gain(double gain, int eps, int M)
{
    const double f = static_cast<double>(M - std::clamp(eps, 0, M)) / M;
    return f * f * gain;
}

namespace
{

void check_feasible(const ScenarioConfig &c)
{
    if (c.num_ues < 1 || c.antennas_per_aau < c.num_ues)
        throw Error("InfeasibleConfig", "beam assignment needs 1 <= K <= N");
}

// UE indices sorted by key, ascending, lowest index first on ties.
std::vector<int> order_by(const std::vector<double> &key)
{
    std::vector<int> idx(key.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key[a] < key[b]; });
    return idx;
}

// Maximum-magnitude beam among the available ones, lowest index on ties.
int mms_beam(const RMat &gain, int l, const std::vector<bool> &taken)
{
    int best = -1;
    for (int n = 0; n < static_cast<int>(gain.rows()); ++n)
        if (!taken[n] && (best < 0 || gain(n, l) > gain(best, l)))
            best = n;
    return best;
}

std::vector<double> stage_metric(const AssociationInputs &in, int l, int M)
{
    std::vector<double> key(in.beta.rows());
    for (std::size_t k = 0; k < key.size(); ++k)
        key[k] = weighted_beta(in.beta(k, l), in.eps(k, l), M);
    return key;
}

} // namespace

AssociationPlan algorithm1(const AssociationInputs &in, const ScenarioConfig &c)
{
    check_feasible(c);
    const int K = c.num_ues, L = c.num_aaus, N = c.antennas_per_aau, M = c.subcarriers;
    const int R = std::min(c.rf_chains, K);
    AssociationPlan plan = empty_plan(K, L);
    for (int l = 0; l < L; ++l)
    {
        std::vector<bool> taken(N, false);
        std::vector<int> beam(K, -1);
        for (int k : order_by(stage_metric(in, l, M)))
        {
            beam[k] = mms_beam(in.gain[k], l, taken);
            taken[beam[k]] = true;
        }
        std::vector<double> score(K);
        for (int k = 0; k < K; ++k)
            score[k] = -discounted_gain(in.gain[k](beam[k], l), in.eps(k, l), M);
        const auto ranked = order_by(score);
        for (int r = 0; r < R; ++r)
            assign(plan, ranked[r], l, beam[ranked[r]]);
    }
    return plan;
}

AssociationPlan algorithm2(const AssociationInputs &in, const ScenarioConfig &c)
{
    check_feasible(c);
    const int K = c.num_ues, L = c.num_aaus, N = c.antennas_per_aau, M = c.subcarriers;
    const int R = std::min(c.rf_chains, K);
    AssociationPlan plan = empty_plan(K, L);
    for (int l = 0; l < L; ++l)
    {
        const auto ranked = order_by(stage_metric(in, l, M));
        std::vector<bool> taken(N, false);
        for (int r = 0; r < R; ++r)
        {
            const int k = ranked[r];
            const int n = mms_beam(in.gain[k], l, taken);
            taken[n] = true;
            assign(plan, k, l, n);
        }
    }
    return plan;
}

AssociationPlan random_association(Rng &rng, const ScenarioConfig &c)
{
    check_feasible(c);
    const int K = c.num_ues, L = c.num_aaus, N = c.antennas_per_aau;
    const int R = std::min(c.rf_chains, K);
    AssociationPlan plan = empty_plan(K, L);
    std::vector<int> ues(K), beams(N);
    for (int l = 0; l < L; ++l)
    {
        std::iota(ues.begin(), ues.end(), 0);
        std::iota(beams.begin(), beams.end(), 0);
        std::shuffle(ues.begin(), ues.end(), rng);
        std::shuffle(beams.begin(), beams.end(), rng);
        for (int r = 0; r < R; ++r)
            assign(plan, ues[r], l, beams[r]);
    }
    return plan;
}

const char *association_name(AssociationAlgorithm a)
{
    switch (a)
    {
    case AssociationAlgorithm::Algorithm1:
        return "alg1";
    case AssociationAlgorithm::Algorithm2:
        return "alg2";
    case AssociationAlgorithm::Random:
        return "random";
    }
    return "unknown";
}

AssociationAlgorithm parse_association(const std::string &name)
{
    if (name == "alg1")
        return AssociationAlgorithm::Algorithm1;
    if (name == "alg2")
        return AssociationAlgorithm::Algorithm2;
    if (name == "random")
        return AssociationAlgorithm::Random;
    throw Error("InvalidConfig", "unknown association algorithm '" + name + "' (alg1, alg2, random)");
}

AssociationPlan small_cell_association(const AssociationInputs &in, const ScenarioConfig &c,
                                       AssociationAlgorithm inner)
{
    switch (inner)
    {
    case AssociationAlgorithm::Algorithm1:
        return algorithm1(in, c);
    case AssociationAlgorithm::Algorithm2:
        return algorithm2(in, c);
    default:
        throw Error("InvalidConfig", "small-cell association needs a deterministic inner algorithm");
    }
}

namespace
{

struct AauOption
{
    std::vector<int> ues;
    std::vector<int> beams;
};

double binomial(int n, int r)
{
    double v = 1.0;
    for (int i = 1; i <= r; ++i)
        v = v * (n - r + i) / i;
    return v;
}

// All (UE subset, ordered distinct beams) pairs for one AAU, lexicographic.
std::vector<AauOption> aau_options(int K, int N, int R)
{
    std::vector<AauOption> out;
    std::vector<int> comb(R);
    std::iota(comb.begin(), comb.end(), 0);
    while (true)
    {
        std::vector<int> beams(R);
        std::vector<bool> used(N, false);
        // Depth-first over injective beam sequences in lexicographic order.
        std::function<void(int)> rec = [&](int depth) {
            if (depth == R)
            {
                out.push_back({comb, beams});
                return;
            }
            for (int n = 0; n < N; ++n)
                if (!used[n])
                {
                    used[n] = true;
                    beams[depth] = n;
                    rec(depth + 1);
                    used[n] = false;
                }
        };
        rec(0);
        int i = R - 1;
        while (i >= 0 && comb[i] == K - R + i)
            --i;
        if (i < 0)
            break;
        ++comb[i];
        for (int j = i + 1; j < R; ++j)
            comb[j] = comb[j - 1] + 1;
    }
    return out;
}

} // namespace

double brute_force_plan_count(const ScenarioConfig &c)
{
    const int K = c.num_ues, N = c.antennas_per_aau;
    const int R = std::min(c.rf_chains, K);
    double per = binomial(K, R);
    for (int i = 0; i < R; ++i)
        per *= N - i;
    return std::pow(per, c.num_aaus);
}

AssociationPlan brute_force_best(const ScenarioConfig &c, const PlanEvaluator &evaluator, double max_plans)
{
    check_feasible(c);
    const double count = brute_force_plan_count(c);
    if (count > max_plans)
    {
        std::ostringstream os;
        os << count << " plans exceed the limit of " << max_plans;
        throw Error("SearchSpaceTooLarge", os.str());
    }
    const int K = c.num_ues, L = c.num_aaus, N = c.antennas_per_aau;
    const int R = std::min(c.rf_chains, K);
    const auto options = aau_options(K, N, R);
    std::vector<std::size_t> digit(L, 0);
    AssociationPlan best;
    double best_value = -std::numeric_limits<double>::infinity();
    bool have = false;
    while (true)
    {
        AssociationPlan plan = empty_plan(K, L);
        for (int l = 0; l < L; ++l)
            for (int r = 0; r < R; ++r)
                assign(plan, options[digit[l]].ues[r], l, options[digit[l]].beams[r]);
        const double v = evaluator(plan);
        if (!have || v > best_value)
        {
            best = std::move(plan);
            best_value = v;
            have = true;
        }
        int l = L - 1;
        while (l >= 0 && ++digit[l] == options.size())
            digit[l--] = 0;
        if (l < 0)
            break;
    }
    return best;
}

std::string plan_to_json_text(const AssociationPlan &p, int indent)
{
    using nlohmann::json;
    json doc;
    doc["schema"] = "cfmimo.plan/1";
    doc["num_ues"] = p.num_ues();
    doc["num_aaus"] = p.num_aaus();
    json aaus = json::array();
    for (int l = 0; l < p.num_aaus(); ++l)
    {
        json chains = json::array();
        for (std::size_t n = 0; n < p.chains[l].size(); ++n)
        {
            const int k = p.chains[l][n];
            chains.push_back({{"ue", k + 1}, {"beam", p.b(k, l)}});
        }
        aaus.push_back(chains);
    }
    doc["chains"] = aaus;
    return doc.dump(indent);
}

AssociationPlan plan_from_json_text(const std::string &text)
{
    using nlohmann::json;
    try
    {
        const json doc = json::parse(text);
        if (doc.at("schema").get<std::string>() != "cfmimo.plan/1")
            throw Error("SchemaMismatch", "expected schema cfmimo.plan/1");
        const int K = doc.at("num_ues").get<int>();
        const int L = doc.at("num_aaus").get<int>();
        const auto &aaus = doc.at("chains");
        if (!aaus.is_array() || static_cast<int>(aaus.size()) != L)
            throw Error("SchemaMismatch", "chains must list every AAU");
        AssociationPlan p = empty_plan(K, L);
        for (int l = 0; l < L; ++l)
            for (const auto &ch : aaus[l])
            {
                const int k = ch.at("ue").get<int>() - 1;
                const int beam = ch.at("beam").get<int>();
                if (k < 0 || k >= K || beam < 1)
                    throw Error("SchemaMismatch", "chain entry out of range");
                assign(p, k, l, beam - 1);
            }
        return p;
    }
    catch (const json::exception &e)
    {
        throw Error("SchemaMismatch", e.what());
    }
}

} // namespace cfmimo
