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

/**
 * @file
 * Experiment configuration: a JSON object whose fields mirror the CLI flags.
 *
 * Unknown fields are rejected. Missing fields take the defaults below.
 * `sample_times` defaults to 11 evenly spaced points on [0, t_max].
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dephmon/trajectories.hpp"

namespace dephmon {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    int N = 2;
    double omega = 1.0;
    double kappa = 1.0;
    double eta = 1.0;
    Unravelling unravelling = Unravelling::PhotoDetection;
    std::optional<double> theta;
    std::string initial_state = "ghz";  ///< "ghz", "plus_product" or a file path
    double t_max = 1.0;
    double dt = 1e-3;
    std::vector<double> sample_times;
    std::uint64_t trajectories = 1000;
    std::uint64_t seed = 1;

    /// Homodyne without an explicit angle measures at theta = pi/2.
    void fill_defaults();

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// Explicit sample times, or the default grid when none were given.
    std::vector<double> effective_sample_times() const;

    LindbladParams params() const { return {N, omega, kappa}; }
    UnravellingSpec unravelling_spec() const { return {unravelling, eta, theta}; }

    /// Every field, with sample_times made explicit; theta only for homodyne.
    nlohmann::json to_json() const;
    static SimConfig from_json(const nlohmann::json& j);

    /// Parses a file; syntax errors report the line number.
    static SimConfig load(const std::filesystem::path& path);
    static SimConfig parse(const std::string& text);
};

/// GHZ / product / amplitude-file initial state for the configured N.
/// File amplitudes are normalized; a deviation above 1e-8 is reported to `warn`.
DensityMatrix load_initial_state(const SimConfig& config, std::ostream& warn);

DensityMatrix read_amplitude_file(const std::filesystem::path& path, int n_qubits,
                                  std::ostream& warn);

}  // namespace dephmon
