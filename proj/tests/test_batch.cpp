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

#include <doctest.h>

#include "dephmon/batch.hpp"
#include "test_util.hpp"

using namespace dephmon;
using testing::kPi;

namespace {

bool identical(const BatchResult& a, const BatchResult& b) {
    return a.score == b.score && a.conditional_qfi == b.conditional_qfi && a.states == b.states &&
           a.trajectories == b.trajectories;
}

}  // namespace

TEST_SUITE("batch") {

TEST_CASE("parallel batch matches the serial reference bit for bit") {
    RandomStream rng(1);
    const auto rho0 = testing::random_pure(2, rng);
    const double times[] = {0.1, 0.25};
    const auto grid = TimeGrid::snapped(1e-3, times);
    for (auto u : {UnravellingSpec::photo_detection(0.6), UnravellingSpec::homodyne(0.6, 0.0),
                   UnravellingSpec::homodyne(0.6, kPi / 2)}) {
        BatchOptions opts;
        opts.keep_states = true;
        opts.workers = 1;
        const auto serial = run_batch_serial(rho0, {2, 1.0, 1.0}, u, grid, 37, 5, opts);
        for (int workers : {1, 2, 3, 4}) {
            opts.workers = workers;
            CHECK(identical(run_batch(rho0, {2, 1.0, 1.0}, u, grid, 37, 5, opts), serial));
        }
        CHECK(mean_state(serial, 1) == mean_state(run_batch(rho0, {2, 1.0, 1.0}, u, grid, 37, 5, opts), 1));
    }
}

TEST_CASE("source resolution") {
    CHECK(resolve_source(UnravellingSpec::photo_detection(0.5), StateSource::Auto) == StateSource::ClosedForm);
    CHECK(resolve_source(UnravellingSpec::homodyne(0.5, kPi / 2), StateSource::Auto) ==
          StateSource::ClosedForm);
    CHECK(resolve_source(UnravellingSpec::homodyne(0.5, 0.3), StateSource::Auto) ==
          StateSource::StepIntegrated);
    CHECK_THROWS(resolve_source(UnravellingSpec::homodyne(0.5, 0.3), StateSource::ClosedForm));
}

TEST_CASE("pairwise sums") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    CHECK(pairwise_sum(v) == 499500.0);
    CHECK(pairwise_sum(std::span<const double>{}) == 0.0);
    std::vector<Matrix> m(5, Matrix::Identity(2, 2));
    CHECK(pairwise_sum(m) == 5.0 * Matrix::Identity(2, 2));
}

TEST_CASE("trajectory summaries are independent of batch composition") {
    const double times[] = {0.2};
    const auto grid = TimeGrid::snapped(1e-3, times);
    BatchOptions opts;
    opts.keep_states = true;
    const auto u = UnravellingSpec::homodyne(0.8, 0.5);
    const auto batch = run_batch(ghz_state(2), {2, 1.0, 1.0}, u, grid, 10, 3, opts);
    const auto alone = summarize_trajectory(ghz_state(2), {2, 1.0, 1.0}, u, grid, 3, 7, opts);
    CHECK(alone.conditional_qfi[0] == batch.conditional_qfi[0][7]);
    CHECK(alone.states[0] == batch.states[0][7]);
}

TEST_CASE("worker count is positive") {
    CHECK(available_workers() >= 1);
}

}  // TEST_SUITE
