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

#include "cfmimo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cfmimo/kernels.hpp"

namespace cfmimo
{

using nlohmann::json;

const char *version_string() { return "0.1.0"; }

std::vector<std::string> parse_sweep_values(const std::string &text)
{
    std::vector<std::string> out;
    if (text.find(':') != std::string::npos)
    {
        double a = 0, b = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(text);
        if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || b < a)
            throw Error("InvalidConfig", "sweep range must be a:b:step with step > 0 and b >= a, got '" + text + "'");
        const long n = static_cast<long>(std::floor((b - a) / step + 1e-9));
        for (long i = 0; i <= n; ++i)
        {
            std::ostringstream os;
            os << (a + i * step);
            out.push_back(os.str());
        }
        return out;
    }
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ','))
        if (!item.empty())
            out.push_back(item);
    if (out.empty())
        throw Error("InvalidConfig", "empty sweep value list");
    return out;
}

namespace
{

std::vector<EvalRequest> grid(std::vector<Scenario> scenarios, std::vector<Precoder> precoders, Direction d)
{
    std::vector<EvalRequest> out;
    for (Precoder p : precoders)
        for (Scenario s : scenarios)
            out.push_back({s, p, d});
    return out;
}

const std::vector<Scenario> kAllScenarios = {Scenario::Syn, Scenario::Asyn, Scenario::PBTA, Scenario::Cellular};

} // namespace

std::vector<std::string> preset_names()
{
    return {"fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14"};
}

ExperimentSpec preset_experiment(const std::string &name, bool reference_scale)
{
    ExperimentSpec e;
    e.preset = name;
    e.config = reference_scale ? presets::reference_scale() : presets::desk_scale();
    const std::vector<Precoder> mmse = {Precoder::PMMSE, Precoder::LPMMSE};
    const std::vector<Precoder> mr = {Precoder::MR, Precoder::LMR};
    if (name == "fig5")
        e.requests = grid(kAllScenarios, mmse, Direction::Downlink);
    else if (name == "fig6")
        e.requests = grid(kAllScenarios, mr, Direction::Downlink);
    else if (name == "fig7")
        e.requests = grid(kAllScenarios, mmse, Direction::Uplink);
    else if (name == "fig8")
        e.requests = grid(kAllScenarios, mr, Direction::Uplink);
    else if (name == "fig9")
    {
        e.requests = grid(kAllScenarios, mmse, Direction::Downlink);
        e.sweep = {"cp_length", parse_sweep_values(reference_scale ? "10:70:10" : "2:20:2")};
    }
    else if (name == "fig10")
    {
        e.requests = grid(kAllScenarios, mmse, Direction::Downlink);
        e.sweep = {"antennas_per_aau", parse_sweep_values(reference_scale ? "30,40,50,60,70" : "8,12,16,24,32")};
    }
    else if (name == "fig11")
    {
        e.requests = grid(kAllScenarios, mmse, Direction::Downlink);
        e.sweep = {"rf_chains", parse_sweep_values(reference_scale ? "4,6,8,10,12" : "2,3,4,6,8")};
    }
    else if (name == "fig12")
    {
        e.requests = grid(kAllScenarios, mmse, Direction::Downlink);
        e.sweep = {"dl_power_per_aau_w", parse_sweep_values("0.5,1,2,4,8")};
    }
    else if (name == "fig13")
    {
        e.requests = grid(kAllScenarios, {Precoder::PMMSE}, Direction::Downlink);
        e.sweep = {"association", {"alg1", "alg2", "random"}};
    }
    else if (name == "fig14")
    {
        e.requests = grid(kAllScenarios, {Precoder::LPMMSE}, Direction::Downlink);
        e.sweep = {"association", {"alg1", "alg2", "random"}};
    }
    else
        throw Error("InvalidConfig", "unknown preset '" + name + "' (fig5..fig14)");
    return e;
}

std::vector<EvalRequest> all_requests()
{
    std::vector<EvalRequest> out;
    for (Direction d : {Direction::Downlink, Direction::Uplink})
    {
        auto g = grid(kAllScenarios, {Precoder::MR, Precoder::PMMSE, Precoder::LMR, Precoder::LPMMSE}, d);
        out.insert(out.end(), g.begin(), g.end());
    }
    return out;
}

std::pair<std::string, std::string> split_override(const std::string &text)
{
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw Error("InvalidConfig", "override must be key=value, got '" + text + "'");
    return {text.substr(0, eq), text.substr(eq + 1)};
}

void apply_experiment_override(ExperimentSpec &spec, const std::string &key, const std::string &value)
{
    static const std::vector<std::pair<std::string, std::string>> sweeps = {{"cp_lengths", "cp_length"},
                                                                            {"antenna_counts", "antennas_per_aau"},
                                                                            {"rf_chain_counts", "rf_chains"},
                                                                            {"dl_powers_w", "dl_power_per_aau_w"}};
    const auto sweep = std::find_if(sweeps.begin(), sweeps.end(), [&](const auto &s) { return s.first == key; });
    if (sweep != sweeps.end())
        spec.sweep = {sweep->second, parse_sweep_values(value)};
    else if (key == "associations")
    {
        spec.sweep = {"association", parse_sweep_values(value)};
        for (const auto &v : spec.sweep.values)
            parse_association(v);
    }
    else if (key == "association")
        spec.association = parse_association(value);
    else if (key == "scenarios" || key == "precoders" || key == "directions")
    {
        const auto items = parse_sweep_values(value);
        std::vector<EvalRequest> kept;
        for (const auto &r : spec.requests.empty() ? all_requests() : spec.requests)
        {
            bool match = false;
            for (const auto &it : items)
            {
                if (key == "scenarios")
                    match |= parse_scenario(it) == r.scenario;
                else if (key == "precoders")
                    match |= parse_precoder(it) == r.precoder;
                else
                    match |= parse_direction(it) == r.direction;
            }
            if (match)
                kept.push_back(r);
        }
        if (kept.empty())
            throw Error("InvalidConfig", "override '" + key + "=" + value + "' leaves nothing to evaluate");
        spec.requests = kept;
    }
    else
        apply_override(spec.config, key, value);
    spec.overrides.push_back(key + "=" + value);
}

ScenarioConfig sweep_point_config(const ExperimentSpec &spec, const std::string &value)
{
    ScenarioConfig c = spec.config;
    if (spec.sweep.active() && spec.sweep.param != "association")
        apply_override(c, spec.sweep.param, value);
    require_valid(c);
    return c;
}

AssociationAlgorithm sweep_point_association(const ExperimentSpec &spec, const std::string &value)
{
    if (spec.sweep.active() && spec.sweep.param == "association")
        return parse_association(value);
    return spec.association;
}

double quantile(std::vector<double> v, double q)
{
    if (v.empty())
        return std::nan("");
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

std::vector<GroupSummary> summarize(const std::vector<Sample> &samples, const std::vector<EvalRequest> &requests,
                                    const std::vector<std::string> &sweep_values)
{
    std::vector<GroupSummary> out;
    for (const auto &value : sweep_values)
        for (const auto &r : requests)
        {
            GroupSummary g{r.scenario, r.precoder, r.direction, value};
            std::vector<double> se;
            std::vector<double> sums;
            int last_drop = -1;
            for (const auto &s : samples)
            {
                if (s.scenario != r.scenario || s.precoder != r.precoder || s.direction != r.direction ||
                    s.sweep_value != value)
                    continue;
                se.push_back(s.se);
                if (s.drop != last_drop)
                {
                    sums.push_back(0.0);
                    last_drop = s.drop;
                }
                sums.back() += s.se;
            }
            g.samples = se.size();
            g.drops = static_cast<int>(sums.size());
            if (!se.empty())
            {
                double total = 0.0;
                for (double v : se)
                    total += v;
                g.mean_se = total / se.size();
                g.median_se = quantile(se, 0.5);
                g.p10_se = quantile(se, 0.1);
                double ms = 0.0;
                for (double v : sums)
                    ms += v;
                ms /= sums.size();
                g.mean_sum_se = ms;
                if (sums.size() > 1)
                {
                    double var = 0.0;
                    for (double v : sums)
                        var += (v - ms) * (v - ms);
                    var /= (sums.size() - 1);
                    g.sum_se_stderr = std::sqrt(var / sums.size());
                }
            }
            out.push_back(g);
        }
    return out;
}

SweepResult monte_carlo(const ExperimentSpec &spec)
{
    if (spec.drops < 1)
        throw Error("InvalidConfig", "drops must be >= 1");
    if (spec.requests.empty())
        throw Error("InvalidConfig", "no scenario/precoder/direction requested");
    const std::vector<std::string> values = spec.sweep.active() ? spec.sweep.values : std::vector<std::string>{"none"};

    std::vector<ScenarioConfig> configs;
    std::vector<AssociationAlgorithm> algs;
    for (const auto &v : values)
    {
        configs.push_back(sweep_point_config(spec, v));
        algs.push_back(sweep_point_association(spec, v));
    }

    const std::size_t jobs = values.size() * static_cast<std::size_t>(spec.drops);
    std::vector<std::vector<LinkReport>> reports(jobs);
    std::vector<char> invalid(jobs, 0);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (true)
        {
            const std::size_t job = next.fetch_add(1);
            if (job >= jobs)
                return;
            const std::size_t v = job / spec.drops;
            const int drop = static_cast<int>(job % spec.drops);
            try
            {
                const Drop d = generate_drop(configs[v], static_cast<std::uint64_t>(drop));
                invalid[job] = d.offsets.warnings.empty() ? 0 : 1;
                LinkEvaluator eval(d, associate(d, algs[v], static_cast<std::uint64_t>(drop)));
                for (const auto &r : spec.requests)
                    reports[job].push_back(eval.evaluate(r.scenario, r.precoder, r.direction));
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(jobs);
            }
        }
    };
    const int threads = std::max(1, std::min<int>(spec.parallelism, static_cast<int>(jobs)));
    if (threads == 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    SweepResult res;
    res.sweep_param = spec.sweep.active() ? spec.sweep.param : "none";
    for (std::size_t job = 0; job < jobs; ++job)
    {
        const std::size_t v = job / spec.drops;
        const int drop = static_cast<int>(job % spec.drops);
        res.drops_with_validity_warnings += invalid[job];
        for (const auto &rep : reports[job])
            for (std::size_t k = 0; k < rep.se.size(); ++k)
                res.samples.push_back(
                    {rep.scenario, rep.precoder, rep.direction, values[v], drop, static_cast<int>(k), rep.sinr[k], rep.se[k]});
    }
    for (const auto &c : configs)
        for (const auto &w : validate_config(c).warnings)
            res.warnings.push_back(w.key + ": " + w.message);
    if (res.drops_with_validity_warnings > 0)
        res.warnings.push_back("ModelValidity: " + std::to_string(res.drops_with_validity_warnings) +
                               " drop(s) have timing offsets >= M - (T_D - 1)");
    res.groups = summarize(res.samples, spec.requests, values);
    return res;
}

namespace
{

std::string num(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json requests_json(const std::vector<EvalRequest> &requests)
{
    json arr = json::array();
    for (const auto &r : requests)
        arr.push_back(
            {{"scenario", scenario_name(r.scenario)}, {"precoder", precoder_name(r.precoder)}, {"direction", direction_name(r.direction)}});
    return arr;
}

} // namespace

void write_samples_csv(std::ostream &os, const SweepResult &r)
{
    os << "scenario,precoder,direction,sweep_param,sweep_value,drop,ue,sinr_db,se\n";
    for (const auto &s : r.samples)
        os << scenario_name(s.scenario) << ',' << precoder_name(s.precoder) << ',' << direction_name(s.direction)
           << ',' << r.sweep_param << ',' << s.sweep_value << ',' << s.drop << ',' << s.ue + 1 << ','
           << num(10.0 * std::log10(s.sinr)) << ',' << num(s.se) << '\n';
}

std::string summary_json_text(const SweepResult &r, const ExperimentSpec &spec)
{
    json doc;
    doc["schema"] = "cfmimo.summary/1";
    doc["preset"] = spec.preset;
    doc["drops"] = spec.drops;
    doc["seed"] = spec.config.rng_seed;
    doc["sweep_param"] = r.sweep_param;
    json groups = json::array();
    for (const auto &g : r.groups)
        groups.push_back({{"scenario", scenario_name(g.scenario)},
                          {"precoder", precoder_name(g.precoder)},
                          {"direction", direction_name(g.direction)},
                          {"sweep_value", g.sweep_value},
                          {"samples", g.samples},
                          {"drops", g.drops},
                          {"mean_se", g.mean_se},
                          {"median_se", g.median_se},
                          {"p10_se", g.p10_se},
                          {"mean_sum_se", g.mean_sum_se},
                          {"sum_se_stderr", g.sum_se_stderr}});
    doc["groups"] = groups;
    doc["warnings"] = r.warnings;
    return doc.dump(2) + "\n";
}

std::string manifest_json_text(const ExperimentSpec &spec)
{
    json doc;
    doc["schema"] = "cfmimo.manifest/1";
    doc["version"] = version_string();
    doc["preset"] = spec.preset;
    doc["drops"] = spec.drops;
    doc["seed"] = spec.config.rng_seed;
    doc["association"] = association_name(spec.association);
    doc["sweep"] = {{"param", spec.sweep.param}, {"values", spec.sweep.values}};
    doc["requests"] = requests_json(spec.requests);
    doc["overrides"] = spec.overrides;
    doc["config"] = json::parse(config_to_json_text(spec.config));
    doc["kernels"] = kernels::isa_name(kernels::active_isa());
    return doc.dump(2) + "\n";
}

ExperimentSpec experiment_from_manifest_text(const std::string &text)
{
    try
    {
        const json doc = json::parse(text);
        if (doc.at("schema").get<std::string>() != "cfmimo.manifest/1")
            throw Error("SchemaMismatch", "expected schema cfmimo.manifest/1");
        ExperimentSpec e;
        e.preset = doc.at("preset").get<std::string>();
        e.drops = doc.at("drops").get<int>();
        e.association = parse_association(doc.at("association").get<std::string>());
        e.sweep.param = doc.at("sweep").at("param").get<std::string>();
        e.sweep.values = doc.at("sweep").at("values").get<std::vector<std::string>>();
        for (const auto &r : doc.at("requests"))
            e.requests.push_back({parse_scenario(r.at("scenario").get<std::string>()),
                                  parse_precoder(r.at("precoder").get<std::string>()),
                                  parse_direction(r.at("direction").get<std::string>())});
        e.overrides = doc.at("overrides").get<std::vector<std::string>>();
        e.config = config_from_json_text(doc.at("config").dump());
        return e;
    }
    catch (const json::exception &ex)
    {
        throw Error("SchemaMismatch", ex.what());
    }
}

} // namespace cfmimo
