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

// Acceptance gate: one pass/fail line per criterion at full scale.
// Usage: acceptance [id ...]   (no ids = all criteria)

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "dephmon/verify.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    dephmon::VerifyOptions opts;
    opts.reduced = false;
    bool ok = true;
    for (const auto& r : dephmon::run_acceptance(opts, ids)) {
        std::cout << dephmon::format_check(r) << std::endl;
        ok = ok && r.passed;
    }
    return ok ? EXIT_SUCCESS : EXIT_FAILURE;
}
