// Copyright 2026 The dephmon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dephmon/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <set>
#include <sstream>

namespace dephmon {

using nlohmann::json;

void SimConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("field '" + field + "': " + why);
    };
    if (N < 1 || N > kMaxQubits) fail("N", "must lie in [1, " + std::to_string(kMaxQubits) + "]");
    if (!std::isfinite(omega)) fail("omega", "must be finite");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) fail("kappa", "must be finite and >= 0");
    if (!(eta >= 0.0 && eta <= 1.0)) fail("eta", "must lie in [0, 1]");
    if (unravelling == Unravelling::Homodyne) {
        if (theta && !std::isfinite(*theta)) fail("theta", "must be finite");
    } else if (theta) {
        fail("theta", "only valid with unravelling 'hd'");
    }
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) fail("t_max", "must be finite and >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("dt", "must be > 0");
    if (initial_state.empty()) fail("initial_state", "must not be empty");
    if (trajectories < 1) fail("trajectories", "must be >= 1");
    double prev = -1.0;
    for (double t : sample_times) {
        if (!(t >= 0.0 && t <= t_max)) fail("sample_times", "entries must lie in [0, t_max]");
        if (!(t > prev)) fail("sample_times", "entries must be strictly increasing");
        prev = t;
    }
    try {
        const auto times = effective_sample_times();
        TimeGrid::snapped(dt, times);
    } catch (const std::invalid_argument& e) {
        fail("sample_times", e.what());
    }
}

void SimConfig::fill_defaults() {
    if (unravelling == Unravelling::Homodyne && !theta) {
        theta = std::numbers::pi / 2;
    }
}

std::vector<double> SimConfig::effective_sample_times() const {
    if (!sample_times.empty()) {
        return sample_times;
    }
    constexpr int kDefaultSamples = 11;
    std::vector<double> out;
    for (int k = 0; k < kDefaultSamples; ++k) {
        out.push_back(t_max * k / (kDefaultSamples - 1));
    }
    if (t_max == 0.0) {
        out.resize(1);
    }
    return out;
}

json SimConfig::to_json() const {
    json j;
    j["N"] = N;
    j["omega"] = omega;
    j["kappa"] = kappa;
    j["eta"] = eta;
    j["unravelling"] = unravelling == Unravelling::Homodyne ? "hd" : "pd";
    if (unravelling == Unravelling::Homodyne) {
        j["theta"] = theta.value_or(0.0);
    }
    j["initial_state"] = initial_state;
    j["t_max"] = t_max;
    j["dt"] = dt;
    j["sample_times"] = effective_sample_times();
    j["trajectories"] = trajectories;
    j["seed"] = seed;
    return j;
}

namespace {

template <typename T>
T field_as(const json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("field '" + key + "': " + e.what());
    }
}

void require_number(const json& j, const std::string& key) {
    if (!j.at(key).is_number()) {
        throw ConfigError("field '" + key + "': expected a number");
    }
}

void require_unsigned(const json& j, const std::string& key) {
    if (!j.at(key).is_number_unsigned()) {
        throw ConfigError("field '" + key + "': expected a nonnegative integer");
    }
}

}  // namespace

SimConfig SimConfig::from_json(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> known = {
        "N",      "omega",  "kappa",        "eta",          "unravelling", "theta",
        "initial_state", "t_max", "dt", "sample_times", "trajectories", "seed"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("unknown field '" + key + "'");
        }
    }
    SimConfig c;
    if (j.contains("N")) {
        if (!j["N"].is_number_integer()) throw ConfigError("field 'N': expected an integer");
        c.N = field_as<int>(j, "N");
    }
    for (auto [key, target] : {std::pair{"omega", &c.omega}, std::pair{"kappa", &c.kappa},
                               std::pair{"eta", &c.eta}, std::pair{"t_max", &c.t_max},
                               std::pair{"dt", &c.dt}}) {
        if (j.contains(key)) {
            require_number(j, key);
            *target = field_as<double>(j, key);
        }
    }
    if (j.contains("unravelling")) {
        const auto u = field_as<std::string>(j, "unravelling");
        if (u == "pd") {
            c.unravelling = Unravelling::PhotoDetection;
        } else if (u == "hd") {
            c.unravelling = Unravelling::Homodyne;
        } else {
            throw ConfigError("field 'unravelling': expected \"pd\" or \"hd\", got \"" + u + "\"");
        }
    }
    if (j.contains("theta")) {
        require_number(j, "theta");
        c.theta = field_as<double>(j, "theta");
    }
    c.fill_defaults();
    if (j.contains("initial_state")) c.initial_state = field_as<std::string>(j, "initial_state");
    if (j.contains("sample_times")) {
        if (!j["sample_times"].is_array()) {
            throw ConfigError("field 'sample_times': expected an array of numbers");
        }
        for (const auto& v : j["sample_times"]) {
            if (!v.is_number()) throw ConfigError("field 'sample_times': expected numbers");
            c.sample_times.push_back(v.get<double>());
        }
    }
    if (j.contains("trajectories")) {
        require_unsigned(j, "trajectories");
        c.trajectories = field_as<std::uint64_t>(j, "trajectories");
    }
    if (j.contains("seed")) {
        require_unsigned(j, "seed");
        c.seed = field_as<std::uint64_t>(j, "seed");
    }
    return c;
}

SimConfig SimConfig::parse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
        throw ConfigError("line " + std::to_string(line) + ": " + e.what());
    }
    return from_json(j);
}

SimConfig SimConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

DensityMatrix read_amplitude_file(const std::filesystem::path& path, int n_qubits,
                                  std::ostream& warn) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("field 'initial_state': cannot open '" + path.string() + "'");
    }
    std::vector<Complex> amps;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') {
            continue;
        }
        std::istringstream fields(line);
        double re = 0.0, im = 0.0;
        if (!(fields >> re >> im)) {
            throw ConfigError(path.string() + ": line " + std::to_string(line_no) +
                              ": expected \"re im\"");
        }
        amps.emplace_back(re, im);
    }
    const auto dim = hilbert_dimension(n_qubits);
    if (amps.size() != dim) {
        throw ConfigError(path.string() + ": expected " + std::to_string(dim) +
                          " amplitudes for N = " + std::to_string(n_qubits) + ", found " +
                          std::to_string(amps.size()));
    }
    Vector v = Eigen::Map<Vector>(amps.data(), static_cast<Eigen::Index>(dim));
    const double norm = v.norm();
    if (!(norm > 0.0)) {
        throw ConfigError(path.string() + ": amplitude vector is zero");
    }
    if (std::abs(norm - 1.0) > 1e-8) {
        warn << "warning: " << path.string() << ": amplitude norm " << norm
             << " deviates from 1; normalizing\n";
    }
    v /= norm;
    return pure_state(v);
}

DensityMatrix load_initial_state(const SimConfig& config, std::ostream& warn) {
    if (config.initial_state == "ghz") {
        return ghz_state(config.N);
    }
    if (config.initial_state == "plus_product") {
        return product_plus_state(config.N);
    }
    return read_amplitude_file(config.initial_state, config.N, warn);
}

}  // namespace dephmon
