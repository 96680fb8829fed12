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
 * Experiment runners behind the `unconditional` and `monitor` commands.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dephmon/config.hpp"

namespace dephmon {

struct ColumnDoc {
    std::string name;
    std::string description;
};

std::vector<ColumnDoc> unconditional_columns();
std::vector<ColumnDoc> monitor_columns();

struct RunReport {
    std::string command;
    SimConfig config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  ///< one per sample time
    double wall_seconds = 0.0;
    std::string version;
    /// Violations of the Fisher-information inequality chain, if any.
    std::vector<std::string> invariant_violations;
};

std::string library_version();

/// Unconditional and ultimate QFI at each sample time.
RunReport cmd_unconditional(const SimConfig& config, std::ostream& warn);

/// Monte Carlo Fisher estimates at each sample time from one trajectory batch.
RunReport cmd_monitor(const SimConfig& config, int workers, std::ostream& warn);

/// CSV with a leading "# dephmon <version> <command>" line and a header row;
/// values printed with 17 significant digits. Contains nothing run-dependent
/// (wall-clock goes to the progress stream).
void write_csv(const RunReport& report, std::ostream& out);

void describe_columns(const std::vector<ColumnDoc>& columns, std::ostream& out);

}  // namespace dephmon
