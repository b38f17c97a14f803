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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cfmimo/experiment.hpp"
#include "cfmimo/kernels.hpp"

namespace fs = std::filesystem;
using namespace cfmimo;

namespace
{

std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("InvalidConfig", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("IoError", "cannot write '" + path.string() + "'");
    out << text;
    if (!out)
        throw Error("IoError", "write failed for '" + path.string() + "'");
}

struct RunArgs
{
    std::string preset;
    std::string config;
    std::string manifest;
    std::vector<std::string> overrides;
    int drops = -1;
    long long seed = -1;
    std::string out = "out";
    bool reference_scale = false;
    int parallelism = 1;
};

ExperimentSpec build_spec(const RunArgs &a)
{
    ExperimentSpec spec;
    if (!a.manifest.empty())
    {
        spec = experiment_from_manifest_text(read_file(a.manifest));
        if (!a.overrides.empty() || !a.preset.empty() || !a.config.empty())
            throw Error("InvalidConfig", "--manifest cannot be combined with --preset, --config or --override");
    }
    else if (!a.preset.empty())
        spec = preset_experiment(a.preset, a.reference_scale);
    else
    {
        spec.preset = "custom";
        spec.config = a.reference_scale ? presets::reference_scale() : presets::desk_scale();
        if (!a.config.empty())
            spec.config = load_config(a.config, spec.config);
        spec.requests = all_requests();
    }
    if (a.manifest.empty())
        for (const auto &o : a.overrides)
        {
            const auto [k, v] = split_override(o);
            apply_experiment_override(spec, k, v);
        }
    if (a.drops > 0)
        spec.drops = a.drops;
    if (a.seed >= 0)
        spec.config.rng_seed = static_cast<std::uint64_t>(a.seed);
    spec.parallelism = a.parallelism;
    return spec;
}

int cmd_run(const RunArgs &a)
{
    const ExperimentSpec spec = build_spec(a);
    const SweepResult res = monte_carlo(spec);
    for (const auto &w : res.warnings)
        std::cerr << "WARNING: " << w << "\n";

    fs::create_directories(a.out);
    std::ostringstream csv;
    write_samples_csv(csv, res);
    write_file(fs::path(a.out) / "samples.csv", csv.str());
    write_file(fs::path(a.out) / "summary.json", summary_json_text(res, spec));
    write_file(fs::path(a.out) / "manifest.json", manifest_json_text(spec));

    std::printf("%-9s %-8s %-3s %-10s %10s %10s %12s\n", "scenario", "precoder", "dir", "sweep", "median_se",
                "mean_se", "mean_sum_se");
    for (const auto &g : res.groups)
        std::printf("%-9s %-8s %-3s %-10s %10.4f %10.4f %12.4f\n", scenario_name(g.scenario),
                    precoder_name(g.precoder), direction_name(g.direction), g.sweep_value.c_str(),
                    g.median_se, g.mean_se, g.mean_sum_se);
    std::printf("wrote %s/{samples.csv,summary.json,manifest.json} (kernels: %s)\n", a.out.c_str(),
                kernels::isa_name(kernels::active_isa()));
    return 0;
}

int cmd_validate(const std::string &config, const std::vector<std::string> &overrides, bool reference_scale)
{
    ScenarioConfig c = reference_scale ? presets::reference_scale() : presets::desk_scale();
    if (!config.empty())
        c = load_config(config, c);
    for (const auto &o : overrides)
    {
        const auto [k, v] = split_override(o);
        apply_override(c, k, v);
    }
    const auto report = validate_config(c);
    std::cout << report.to_string();
    std::cout << (report.ok() ? "config OK" : "config INVALID") << " (" << report.errors.size() << " error(s), "
              << report.warnings.size() << " warning(s))\n";
    return report.ok() ? 0 : 2;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Cell-free mmWave MIMO-OFDM timing-offset simulator"};
    app.require_subcommand(1);

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment");
    auto *preset_opt = run_cmd->add_option("--preset", run.preset, "Experiment preset (fig5..fig14)");
    auto *config_opt = run_cmd->add_option("--config", run.config, "JSON scenario config for a custom run");
    preset_opt->excludes(config_opt);
    run_cmd->add_option("--manifest", run.manifest, "Rerun from a manifest.json")->excludes(preset_opt, config_opt);
    run_cmd->add_option("--override", run.overrides, "key=value, applied last (repeatable)");
    run_cmd->add_option("--drops", run.drops, "Number of drops (presets default to 200)")->check(CLI::PositiveNumber);
    run_cmd->add_option("--seed", run.seed, "RNG seed")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--out", run.out, "Output directory");
    run_cmd->add_flag("--paper-scale", run.reference_scale, "Use the wide-area reference scale");
    run_cmd->add_option("--parallelism", run.parallelism, "Worker threads")->check(CLI::PositiveNumber);

    std::string vconfig;
    std::vector<std::string> voverrides;
    bool vreference = false;
    auto *val_cmd = app.add_subcommand("validate", "Check a scenario config");
    val_cmd->add_option("--config", vconfig, "JSON scenario config");
    val_cmd->add_option("--override", voverrides, "key=value (repeatable)");
    val_cmd->add_flag("--paper-scale", vreference, "Start from the wide-area reference scale");

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (*run_cmd)
            return cmd_run(run);
        return cmd_validate(vconfig, voverrides, vreference);
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == "InvalidConfig" || e.kind() == "SchemaMismatch" ? 2 : 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
