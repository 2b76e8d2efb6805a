// SPDX-License-Identifier: Apache-2.0
//
// beamtrack — radar-assisted predictive beamforming simulator for V2I links
// Copyright (C) 2026 beamtrack contributors
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

#include "beamtrack/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace beamtrack {

namespace {

using nlohmann::json;

double to_double(const std::string &key, const json &value)
{
    if (!value.is_number())
        throw ConfigError("config key '" + key + "' must be a number");
    return value.get<double>();
}

int to_int(const std::string &key, const json &value)
{
    if (value.is_number_integer())
        return static_cast<int>(value.get<std::int64_t>());
    if (value.is_number_float())
    {
        double d = value.get<double>();
        if (d == std::floor(d))
            return static_cast<int>(d);
    }
    throw ConfigError("config key '" + key + "' must be an integer");
}

std::uint64_t to_seed(const std::string &key, const json &value)
{
    if (value.is_number_unsigned())
        return value.get<std::uint64_t>();
    if (value.is_number_integer())
    {
        std::int64_t v = value.get<std::int64_t>();
        if (v >= 0)
            return static_cast<std::uint64_t>(v);
    }
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
}

bool to_bool(const std::string &key, const json &value)
{
    if (!value.is_boolean())
        throw ConfigError("config key '" + key + "' must be a boolean");
    return value.get<bool>();
}

std::string to_string_val(const std::string &key, const json &value)
{
    if (!value.is_string())
        throw ConfigError("config key '" + key + "' must be a string");
    return value.get<std::string>();
}

Scheme parse_scheme(const std::string &name)
{
    if (name == "dfrc")
        return Scheme::dfrc;
    if (name == "feedback")
        return Scheme::feedback;
    throw ConfigError("unknown scheme '" + name + "' (expected \"dfrc\" or \"feedback\")");
}

void require_positive(const char *key, double value)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError(std::string("config key '") + key + "' must be positive and finite");
}

void require_non_negative(const char *key, double value)
{
    if (!(value >= 0.0) || !std::isfinite(value))
        throw ConfigError(std::string("config key '") + key + "' must be non-negative and finite");
}

} // namespace

const char *scheme_name(Scheme scheme)
{
    return scheme == Scheme::dfrc ? "dfrc" : "feedback";
}

double ScenarioConfig::nan_marker()
{
    return std::numeric_limits<double>::quiet_NaN();
}

ScenarioConfig default_config()
{
    ScenarioConfig cfg;
    finalize_config(cfg);
    validate_config(cfg);
    return cfg;
}

ScenarioConfig parse_config_json(const std::string &text)
{
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &err)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    ScenarioConfig cfg;
    for (const auto &[key, value] : doc.items())
    {
        if (key == "fc_hz")
            cfg.fc_hz = to_double(key, value);
        else if (key == "c_mps")
            cfg.c_mps = to_double(key, value);
        else if (key == "dt_s")
            cfg.dt_s = to_double(key, value);
        else if (key == "epochs")
            cfg.epochs = to_int(key, value);
        else if (key == "n_tx")
            cfg.n_tx = to_int(key, value);
        else if (key == "n_rx")
            cfg.n_rx = to_int(key, value);
        else if (key == "m_vehicle")
            cfg.m_vehicle = to_int(key, value);
        else if (key == "tx_snr_db")
            cfg.tx_snr_db = to_double(key, value);
        else if (key == "sigma_sq")
            cfg.sigma_sq = to_double(key, value);
        else if (key == "sigma_c_sq")
            cfg.sigma_c_sq = to_double(key, value);
        else if (key == "g_mf")
            cfg.g_mf = to_double(key, value);
        else if (key == "a1")
            cfg.a1 = to_double(key, value);
        else if (key == "a2")
            cfg.a2 = to_double(key, value);
        else if (key == "a3")
            cfg.a3 = to_double(key, value);
        else if (key == "sigma_theta_deg")
            cfg.sigma_theta_deg = to_double(key, value);
        else if (key == "sigma_d_m")
            cfg.sigma_d_m = to_double(key, value);
        else if (key == "sigma_v_mps")
            cfg.sigma_v_mps = to_double(key, value);
        else if (key == "sigma_beta")
            cfg.sigma_beta = to_double(key, value);
        else if (key == "theta0_deg")
            cfg.theta0_deg = to_double(key, value);
        else if (key == "d0_m")
            cfg.d0_m = to_double(key, value);
        else if (key == "v0_mps")
            cfg.v0_mps = to_double(key, value);
        else if (key == "beta0_re")
            cfg.beta0_re = to_double(key, value);
        else if (key == "beta0_im")
            cfg.beta0_im = to_double(key, value);
        else if (key == "alpha_ref")
            cfg.alpha_ref = to_double(key, value);
        else if (key == "m0_theta_deg")
            cfg.m0_theta_deg = to_double(key, value);
        else if (key == "m0_d_m")
            cfg.m0_d_m = to_double(key, value);
        else if (key == "m0_v_mps")
            cfg.m0_v_mps = to_double(key, value);
        else if (key == "m0_beta")
            cfg.m0_beta = to_double(key, value);
        else if (key == "trials")
            cfg.trials = to_int(key, value);
        else if (key == "master_seed")
            cfg.master_seed = to_seed(key, value);
        else if (key == "schemes")
        {
            if (!value.is_array() || value.empty())
                throw ConfigError("config key 'schemes' must be a non-empty array of strings");
            cfg.schemes.clear();
            for (const auto &entry : value)
                cfg.schemes.push_back(parse_scheme(to_string_val("schemes", entry)));
        }
        else if (key == "truth_model")
            cfg.truth_model = to_string_val(key, value);
        else if (key == "noise_free_measurements")
            cfg.noise_free_measurements = to_bool(key, value);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }

    finalize_config(cfg);
    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw std::runtime_error("error reading config file: " + path);
    return parse_config_json(buffer.str());
}

void finalize_config(ScenarioConfig &cfg)
{
    const double spread = std::sqrt(10.0);
    if (std::isnan(cfg.m0_theta_deg))
        cfg.m0_theta_deg = spread * cfg.sigma_theta_deg;
    if (std::isnan(cfg.m0_d_m))
        cfg.m0_d_m = spread * cfg.sigma_d_m;
    if (std::isnan(cfg.m0_v_mps))
        cfg.m0_v_mps = spread * cfg.sigma_v_mps;
    if (std::isnan(cfg.m0_beta))
        cfg.m0_beta = spread * cfg.sigma_beta / std::sqrt(2.0);

    // Deduplicate schemes and fix their order so outputs do not depend on
    // how the list was written.
    std::vector<Scheme> normalized;
    for (Scheme s : {Scheme::dfrc, Scheme::feedback})
        if (std::find(cfg.schemes.begin(), cfg.schemes.end(), s) != cfg.schemes.end())
            normalized.push_back(s);
    cfg.schemes = normalized;
}

void validate_config(const ScenarioConfig &cfg)
{
    require_positive("fc_hz", cfg.fc_hz);
    require_positive("c_mps", cfg.c_mps);
    require_positive("dt_s", cfg.dt_s);
    if (cfg.epochs < 1)
        throw ConfigError("config key 'epochs' must be >= 1");
    if (cfg.n_tx < 1 || cfg.n_rx < 1 || cfg.m_vehicle < 1)
        throw ConfigError("array element counts must be >= 1");
    if (!std::isfinite(cfg.tx_snr_db))
        throw ConfigError("config key 'tx_snr_db' must be finite");
    require_positive("sigma_sq", cfg.sigma_sq);
    require_positive("sigma_c_sq", cfg.sigma_c_sq);
    require_positive("g_mf", cfg.g_mf);
    require_positive("a1", cfg.a1);
    require_positive("a2", cfg.a2);
    require_positive("a3", cfg.a3);
    require_non_negative("sigma_theta_deg", cfg.sigma_theta_deg);
    require_non_negative("sigma_d_m", cfg.sigma_d_m);
    require_non_negative("sigma_v_mps", cfg.sigma_v_mps);
    require_non_negative("sigma_beta", cfg.sigma_beta);
    if (!(cfg.theta0_deg > 0.0 && cfg.theta0_deg < 180.0))
        throw ConfigError("config key 'theta0_deg' must be in (0, 180)");
    require_positive("d0_m", cfg.d0_m);
    require_non_negative("v0_mps", cfg.v0_mps);
    if (!std::isfinite(cfg.beta0_re) || !std::isfinite(cfg.beta0_im))
        throw ConfigError("initial reflection coefficient must be finite");
    if (cfg.beta0_re == 0.0 && cfg.beta0_im == 0.0)
        throw ConfigError("initial reflection coefficient must be non-zero");
    require_positive("alpha_ref", cfg.alpha_ref);
    require_non_negative("m0_theta_deg", cfg.m0_theta_deg);
    require_non_negative("m0_d_m", cfg.m0_d_m);
    require_non_negative("m0_v_mps", cfg.m0_v_mps);
    require_non_negative("m0_beta", cfg.m0_beta);
    if (cfg.trials < 1)
        throw ConfigError("config key 'trials' must be >= 1");
    if (cfg.schemes.empty())
        throw ConfigError("config key 'schemes' must select at least one scheme");
    if (cfg.truth_model != "cartesian" && cfg.truth_model != "approx")
        throw ConfigError("config key 'truth_model' must be \"cartesian\" or \"approx\"");
}

} // namespace beamtrack
