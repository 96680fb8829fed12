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
 * Acceptance checks shared by the `verify` command and the acceptance test
 * binary. Each check prints nothing; callers format the CheckResult list.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dephmon/trajectories.hpp"

namespace dephmon {

struct VerifyOptions {
    /// Full runs the stated sample sizes; reduced cuts seeds/trajectories ~4x.
    bool reduced = false;
    /// Mutation: closed forms use kappa instead of (1 - eta) kappa.
    bool inject_wrong_rescaling = false;
    /// Multiplies the equivalence-check step dt = 1e-4.
    double dt_scale = 1.0;
    int workers = 0;
    std::uint64_t seed = 20190611;
};

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct EquivalenceStats {
    double max_distance = 0.0;
    double mean_distance = 0.0;
    int runs = 0;
};

/// Trace distance between step-integrated and closed-form final states fed
/// with the same noise record, over `seeds` random pure initial states.
EquivalenceStats closed_form_equivalence(int n_qubits, double eta, Unravelling kind, double dt,
                                         double t, int seeds, std::uint64_t seed,
                                         bool wrong_rescaling = false);

/// Runs the checks with the given ids (all when empty), in id order.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opts, const std::vector<int>& only = {});

std::string format_check(const CheckResult& r);

}  // namespace dephmon
