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

#include "cfmimo/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace cfmimo
{

using nlohmann::json;

double ScenarioConfig::noise_power_w() const
{
    // -174 dBm/Hz thermal floor over the full band plus the noise figure.
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

std::vector<int> ScenarioConfig::evaluation_subcarriers() const
{
    if (se_subcarrier_stride <= 0)
        return {ref_subcarrier()};
    std::vector<int> out;
    for (int m = ref_subcarrier() % se_subcarrier_stride; m < subcarriers; m += se_subcarrier_stride)
        out.push_back(m);
    return out;
}

std::string ValidationReport::to_string() const
{
    std::ostringstream os;
    for (const auto &e : errors)
        os << "error: " << e.key << ": " << e.message << "\n";
    for (const auto &w : warnings)
        os << "warning: " << w.key << ": " << w.message << "\n";
    return os.str();
}

int worst_case_offset_samples(const ScenarioConfig &c)
{
    // On the torus the largest planar separation is half the diagonal.
    const double planar = c.area_side_m / std::sqrt(2.0);
    const double far = std::sqrt(planar * planar + c.aau_height_m * c.aau_height_m);
    const double metres_per_sample = kSpeedOfLight * c.sample_period();
    return static_cast<int>(std::lround((far - c.aau_height_m) / metres_per_sample));
}

ValidationReport validate_config(const ScenarioConfig &c)
{
    ValidationReport r;
    auto err = [&](const char *key, std::string msg) { r.errors.push_back({key, std::move(msg)}); };
    auto warn = [&](const char *key, std::string msg) { r.warnings.push_back({key, std::move(msg)}); };

    if (c.num_aaus < 1)
        err("num_aaus", "must be >= 1");
    if (c.num_ues < 1)
        err("num_ues", "must be >= 1");
    if (c.antennas_per_aau < 1)
        err("antennas_per_aau", "must be >= 1");
    if (c.rf_chains < 1)
        err("rf_chains", "must be >= 1");
    if (c.rf_chains > c.antennas_per_aau)
        err("rf_chains", "N_RF must not exceed antennas_per_aau");
    if (c.rf_chains > c.num_ues)
        err("rf_chains", "N_RF must not exceed num_ues");
    if (c.num_ues > c.num_aaus * c.rf_chains)
        err("num_ues", "K must not exceed L * N_RF");
    if (c.num_ues > c.antennas_per_aau)
        err("num_ues", "K must not exceed antennas_per_aau (beam assignment needs distinct beams)");
    if (c.subcarriers < 2)
        err("subcarriers", "must be >= 2");
    if (c.cp_length < 0 || c.cp_length >= c.subcarriers)
        err("cp_length", "must satisfy 0 <= M_CP < M");
    if (c.delay_spread < 1)
        err("delay_spread", "must be >= 1");
    if (c.num_paths < 1)
        err("num_paths", "must be >= 1");

    auto positive = [&](const char *key, double v) {
        if (!(v > 0.0) || !std::isfinite(v))
            err(key, "must be strictly positive");
    };
    positive("bandwidth_hz", c.bandwidth_hz);
    positive("subcarrier_spacing_hz", c.subcarrier_spacing_hz);
    positive("carrier_hz", c.carrier_hz);
    positive("area_side_m", c.area_side_m);
    positive("aau_height_m", c.aau_height_m);
    positive("pathloss_exponent", c.pathloss_exponent);
    positive("dl_power_per_aau_w", c.dl_power_per_aau_w);
    positive("ul_power_per_ue_w", c.ul_power_per_ue_w);
    if (c.shadow_std_db < 0.0)
        err("shadow_std_db", "must be >= 0");
    if (c.delay_max_s < 0.0)
        err("delay_max_s", "must be >= 0");
    if (c.bandwidth_hz > 0 && c.delay_spread >= 1 && c.delay_max_s >= (c.delay_spread - 0.5) * c.sample_period())
        err("delay_max_s", "quantized path delays would exceed delay_spread taps; use <= (T_D - 1) / B");
    if (c.reference_subcarrier >= c.subcarriers)
        err("reference_subcarrier", "must be < subcarriers (or -1 for the center)");
    if (c.se_subcarrier_stride < 0)
        err("se_subcarrier_stride", "must be >= 0");
    if (c.ici_stride < 1)
        err("ici_stride", "must be >= 1");
    if (c.ici_stride > 1)
        warn("ici_stride", "ICI sum is decimated; results are approximate");

    if (r.errors.empty())
    {
        const int worst = worst_case_offset_samples(c);
        const int limit = c.subcarriers - (c.delay_spread - 1);
        if (worst >= limit)
        {
            std::ostringstream os;
            os << "geometry allows timing offsets up to " << worst << " samples, beyond M - (T_D - 1) = " << limit
               << "; leakage then spans more than one previous OFDM symbol";
            warn("area_side_m", os.str());
        }
    }
    return r;
}

void require_valid(const ScenarioConfig &c)
{
    const auto r = validate_config(c);
    if (!r.ok())
        throw Error("InvalidConfig", r.to_string());
}

namespace presets
{
ScenarioConfig reference_scale() { return ScenarioConfig{}; }

ScenarioConfig desk_scale()
{
    ScenarioConfig c;
    c.num_aaus = 10;
    c.num_ues = 8;
    c.antennas_per_aau = 16;
    c.rf_chains = 4;
    c.subcarriers = 32;
    c.area_side_m = 500.0;
    return c;
}
} // namespace presets

namespace
{

struct Field
{
    std::function<json(const ScenarioConfig &)> get;
    std::function<void(ScenarioConfig &, const json &)> set;
};

template <typename T>
Field member(T ScenarioConfig::*ptr)
{
    return {[ptr](const ScenarioConfig &c) { return json(c.*ptr); },
            [ptr](ScenarioConfig &c, const json &j) {
                if constexpr (std::is_integral_v<T>)
                {
                    if (!j.is_number_integer() && !(j.is_number_float() && std::floor(j.get<double>()) == j.get<double>()))
                        throw std::invalid_argument("expected an integer");
                    c.*ptr = static_cast<T>(j.get<double>());
                }
                else
                {
                    if (!j.is_number())
                        throw std::invalid_argument("expected a number");
                    c.*ptr = j.get<T>();
                }
            }};
}

const std::vector<std::pair<std::string, Field>> &fields()
{
    static const std::vector<std::pair<std::string, Field>> table = {
        {"num_aaus", member(&ScenarioConfig::num_aaus)},
        {"num_ues", member(&ScenarioConfig::num_ues)},
        {"antennas_per_aau", member(&ScenarioConfig::antennas_per_aau)},
        {"rf_chains", member(&ScenarioConfig::rf_chains)},
        {"subcarriers", member(&ScenarioConfig::subcarriers)},
        {"cp_length", member(&ScenarioConfig::cp_length)},
        {"delay_spread", member(&ScenarioConfig::delay_spread)},
        {"bandwidth_hz", member(&ScenarioConfig::bandwidth_hz)},
        {"subcarrier_spacing_hz", member(&ScenarioConfig::subcarrier_spacing_hz)},
        {"carrier_hz", member(&ScenarioConfig::carrier_hz)},
        {"area_side_m", member(&ScenarioConfig::area_side_m)},
        {"aau_height_m", member(&ScenarioConfig::aau_height_m)},
        {"pathloss_exponent", member(&ScenarioConfig::pathloss_exponent)},
        {"shadow_std_db", member(&ScenarioConfig::shadow_std_db)},
        {"dl_power_per_aau_w", member(&ScenarioConfig::dl_power_per_aau_w)},
        {"ul_power_per_ue_w", member(&ScenarioConfig::ul_power_per_ue_w)},
        {"noise_figure_db", member(&ScenarioConfig::noise_figure_db)},
        {"num_paths", member(&ScenarioConfig::num_paths)},
        {"delay_max_s", member(&ScenarioConfig::delay_max_s)},
        {"reference_subcarrier", member(&ScenarioConfig::reference_subcarrier)},
        {"rng_seed", member(&ScenarioConfig::rng_seed)},
        {"se_subcarrier_stride", member(&ScenarioConfig::se_subcarrier_stride)},
        {"ici_stride", member(&ScenarioConfig::ici_stride)},
        {"normalization",
         {[](const ScenarioConfig &c) {
              return json(c.normalization == PowerNormalization::Instantaneous ? "instantaneous" : "statistical");
          },
          [](ScenarioConfig &c, const json &j) {
              if (!j.is_string())
                  throw std::invalid_argument("expected \"instantaneous\" or \"statistical\"");
              const auto s = j.get<std::string>();
              if (s == "instantaneous")
                  c.normalization = PowerNormalization::Instantaneous;
              else if (s == "statistical")
                  c.normalization = PowerNormalization::Statistical;
              else
                  throw std::invalid_argument("expected \"instantaneous\" or \"statistical\"");
          }}},
    };
    return table;
}

const Field *find_field(const std::string &key)
{
    for (const auto &[name, f] : fields())
        if (name == key)
            return &f;
    return nullptr;
}

void set_field(ScenarioConfig &c, const std::string &key, const json &value)
{
    const Field *f = find_field(key);
    if (!f)
        throw Error("InvalidConfig", "unknown key '" + key + "'");
    try
    {
        f->set(c, value);
    }
    catch (const std::exception &e)
    {
        throw Error("InvalidConfig", "key '" + key + "': " + e.what());
    }
}

} // namespace

ScenarioConfig config_from_json_text(const std::string &text, const ScenarioConfig &base)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw Error("InvalidConfig", e.what());
    }
    if (!doc.is_object())
        throw Error("InvalidConfig", "top level must be a JSON object");
    ScenarioConfig c = base;
    for (auto it = doc.begin(); it != doc.end(); ++it)
        set_field(c, it.key(), it.value());
    return c;
}

ScenarioConfig load_config(const std::string &path, const ScenarioConfig &base)
{
    std::ifstream in(path);
    if (!in)
        throw Error("InvalidConfig", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str(), base);
}

std::string config_to_json_text(const ScenarioConfig &c, int indent)
{
    json doc = json::object();
    for (const auto &[name, f] : fields())
        doc[name] = f.get(c);
    return doc.dump(indent);
}

void apply_override(ScenarioConfig &c, const std::string &key, const std::string &value)
{
    json j;
    try
    {
        j = json::parse(value);
    }
    catch (const json::parse_error &)
    {
        j = value;
    }
    set_field(c, key, j);
}

} // namespace cfmimo
