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

#include <cmath>

#include "dephmon/metrology.hpp"
#include "dephmon/trajectories.hpp"
#include "test_util.hpp"

using namespace dephmon;
using testing::kPi;

namespace {

TimeGrid grid_to(double t, double dt) {
    const double times[] = {t};
    return TimeGrid::snapped(dt, times);
}

bool same_result(const TrajectoryResult& a, const TrajectoryResult& b) {
    if (!(a.noise == b.noise) || a.current != b.current || a.samples.size() != b.samples.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        if (a.samples[i].state.matrix() != b.samples[i].state.matrix() ||
            a.samples[i].state_derivative != b.samples[i].state_derivative ||
            a.samples[i].score != b.samples[i].score) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("trajectories") {

TEST_CASE("unravelling validation") {
    CHECK_THROWS(UnravellingSpec::photo_detection(1.5).validate());
    CHECK_THROWS(UnravellingSpec::photo_detection(-0.1).validate());
    CHECK_THROWS((UnravellingSpec{Unravelling::Homodyne, 0.5, std::nullopt}).validate());
    CHECK_THROWS((UnravellingSpec{Unravelling::PhotoDetection, 0.5, 0.3}).validate());
    CHECK(UnravellingSpec::photo_detection(0.3).record_is_pure_noise());
    CHECK(UnravellingSpec::homodyne(0.3, kPi / 2).record_is_pure_noise());
    CHECK_FALSE(UnravellingSpec::homodyne(0.3, 0.0).record_is_pure_noise());
}

TEST_CASE("time grid snapping") {
    const double times[] = {0.0, 0.10004, 0.5};
    const auto g = TimeGrid::snapped(1e-3, times);
    CHECK(g.sample_steps == std::vector<std::size_t>{0, 100, 500});
    CHECK(g.total_steps() == 500);
    const double clash[] = {0.1, 0.1002};
    CHECK_THROWS(TimeGrid::snapped(1e-3, clash));
    const double negative[] = {-0.1};
    CHECK_THROWS(TimeGrid::snapped(1e-3, negative));
}

TEST_CASE("PD with eta=0 never clicks and follows the unconditional map") {
    const LindbladParams p{2, 1.0, 1.0};
    const auto r = simulate_trajectory(ghz_state(2), p, UnravellingSpec::photo_detection(0.0),
                                       grid_to(1.0, 1e-3), 9);
    CHECK(r.noise.final_cumulative() == std::vector<double>{0, 0});
    CHECK(trace_distance(r.samples.back().state.matrix(),
                         dephasing_map_exact(ghz_state(2), p, 1.0).matrix()) < 1e-12);
}

TEST_CASE("single-qubit click flips the coherence sign") {
    RandomStream rng(1);
    const LindbladParams p{1, 0.0, 1.0};
    // Probability one click per step at eta=1 needs kappa dt / 2 = 1; use a huge rate.
    const LindbladParams loud{1, 0.0, 2e3};
    auto step = step_pd(product_plus_state(1), loud, 1.0, 1e-3, rng);
    CHECK(step.clicks == std::vector<int>{1});
    CHECK(step.state(0, 1).real() == doctest::Approx(-0.5));
    std::vector<long> one{1};
    CHECK(closed_form_pd(product_plus_state(1), p, 1.0, one, 0.3)(0, 1).real() ==
          doctest::Approx(-0.5));
}

TEST_CASE("HD at theta=pi/2 reports the bare noise as current") {
    const LindbladParams p{2, 1.0, 1.0};
    const auto r = simulate_trajectory(ghz_state(2), p, UnravellingSpec::homodyne(0.7, kPi / 2),
                                       grid_to(0.2, 1e-3), 4);
    REQUIRE(r.current);
    for (std::size_t s = 0; s < r.noise.steps(); ++s) {
        const auto dw = r.noise.step(s);
        const auto dy = r.current->step(s);
        CHECK(std::equal(dw.begin(), dw.end(), dy.begin()));
    }
    RandomStream rng(2);
    const auto step = step_hd(ghz_state(2), p, 0.7, kPi / 2, 1e-3, rng);
    CHECK(step.dw == step.dy);
}

TEST_CASE("HD with eta=0 matches the unconditional Euler step") {
    RandomStream rng(3);
    const LindbladParams p{2, 1.0, 1.0};
    const auto rho0 = testing::random_pure(2, rng);
    const double dt = 1e-4;
    const auto step = step_hd(rho0, p, 0.0, 0.0, dt, rng);
    const Matrix euler = rho0.matrix() + dt * lindblad_rhs(rho0.matrix(), p);
    CHECK(max_abs_difference(step.state.matrix(), euler) < 10 * dt * dt);
}

TEST_CASE("same seed gives bit-identical trajectories") {
    RandomStream rng(4);
    // Strong dephasing so that photo-detection records contain clicks.
    const LindbladParams p{3, 1.0, 20.0};
    const auto rho0 = testing::random_pure(3, rng);
    const double times[] = {0.1, 0.3};
    const auto g = TimeGrid::snapped(1e-3, times);
    for (auto u : {UnravellingSpec::photo_detection(0.6), UnravellingSpec::homodyne(0.6, 0.4)}) {
        CHECK(same_result(simulate_trajectory(rho0, p, u, g, 77), simulate_trajectory(rho0, p, u, g, 77)));
        CHECK_FALSE(same_result(simulate_trajectory(rho0, p, u, g, 77),
                                simulate_trajectory(rho0, p, u, g, 78)));
    }
}

TEST_CASE("noise record does not depend on omega") {
    const auto g = grid_to(0.5, 1e-3);
    for (auto u : {UnravellingSpec::photo_detection(0.9), UnravellingSpec::homodyne(0.9, kPi / 2),
                   UnravellingSpec::homodyne(0.9, 0.0)}) {
        const auto a = simulate_trajectory(ghz_state(2), {2, 0.3, 1.0}, u, g, 12);
        const auto b = simulate_trajectory(ghz_state(2), {2, 2.7, 1.0}, u, g, 12);
        CHECK(a.noise == b.noise);
    }
}

TEST_CASE("PD at eta=1 keeps pure states pure") {
    RandomStream rng(5);
    for (int n = 1; n <= 3; ++n) {
        const auto r = simulate_trajectory(testing::random_pure(n, rng), {n, 1.0, 1.0},
                                           UnravellingSpec::photo_detection(1.0), grid_to(1.0, 1e-4),
                                           30 + n);
        CHECK(r.samples.back().state.purity() >= 1.0 - 1e-6);
    }
}

TEST_CASE("step integration reproduces the closed form from the same record") {
    RandomStream rng(6);
    const double dt = 1e-4;
    for (int n = 1; n <= 3; ++n) {
        for (double eta : {0.3, 1.0}) {
            for (auto u : {UnravellingSpec::photo_detection(eta), UnravellingSpec::homodyne(eta, kPi / 2)}) {
                const auto rho0 = testing::random_pure(n, rng);
                const auto r = simulate_trajectory(rho0, {n, 1.0, 1.0}, u, grid_to(1.0, dt), 100 + n);
                const auto closed = closed_form_from_record(rho0, r, r.samples.back().step);
                const double d = trace_distance(closed.state.matrix(), r.samples.back().state.matrix());
                if (u.kind == Unravelling::PhotoDetection) {
                    CHECK(d < 1e-10);
                } else {
                    CHECK(d < 5e-3);
                }
            }
        }
    }
}

TEST_CASE("closed form requires a pure-noise record") {
    const auto r = simulate_trajectory(ghz_state(1), {1, 1.0, 1.0}, UnravellingSpec::homodyne(1.0, 0.0),
                                       grid_to(0.01, 1e-3), 1);
    CHECK_THROWS_AS(closed_form_from_record(ghz_state(1), r, 10), std::invalid_argument);
}

TEST_CASE("PD closed form: even counts give the rescaled unconditional state") {
    RandomStream rng(7);
    const LindbladParams p{3, 0.8, 1.2};
    const auto rho0 = testing::random_mixed(3, rng);
    const std::vector<long> even{2, 0, 4};
    const auto expected = dephasing_map_exact(rho0, p.with_kappa(0.4 * p.kappa), 0.9);
    CHECK(closed_form_pd(rho0, p, 0.6, even, 0.9).matrix() == expected.matrix());
}

TEST_CASE("PD closed form depends only on per-channel parity") {
    RandomStream rng(8);
    const LindbladParams p{3, 0.8, 1.2};
    const auto rho0 = testing::random_pure(3, rng);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<long> a(3), b(3);
        for (int j = 0; j < 3; ++j) {
            a[j] = static_cast<long>(std::floor(std::abs(rng.normal(3.0))));
            b[j] = a[j] + 2 * static_cast<long>(std::floor(std::abs(rng.normal(2.0))));
        }
        CHECK(max_abs_difference(closed_form_pd(rho0, p, 0.5, a, 0.7).matrix(),
                                 closed_form_pd(rho0, p, 0.5, b, 0.7).matrix()) <= 1e-15);
    }
}

TEST_CASE("GHZ: single clicks on different qubits give identical states") {
    const LindbladParams p{2, 1.0, 1.0};
    const std::vector<long> a{1, 0}, b{0, 1};
    CHECK(max_abs_difference(closed_form_pd(ghz_state(2), p, 0.6, a, 1.0).matrix(),
                             closed_form_pd(ghz_state(2), p, 0.6, b, 1.0).matrix()) <= 1e-15);
}

TEST_CASE("GHZ: HD closed form depends on W only through its sum") {
    RandomStream rng(9);
    for (int n = 2; n <= 4; ++n) {
        const LindbladParams p{n, 1.0, 1.0};
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<double> a(n), b(n);
            double shift = 0.0;
            for (int j = 0; j < n; ++j) {
                a[j] = rng.normal(1.0);
                const double d = rng.normal(1.0);
                b[j] = a[j] + d;
                shift += d;
            }
            b[0] -= shift;
            CHECK(max_abs_difference(closed_form_hd(ghz_state(n), p, 0.6, a, 1.0).matrix(),
                                     closed_form_hd(ghz_state(n), p, 0.6, b, 1.0).matrix()) <= 1e-12);
        }
    }
}

TEST_CASE("HD closed form examples") {
    RandomStream rng(10);
    const LindbladParams p{2, 0.5, 1.0};
    const auto rho0 = testing::random_mixed(2, rng);
    const std::vector<double> zero{0.0, 0.0}, w{0.3, -1.1};
    CHECK(closed_form_hd(rho0, p, 0.4, zero, 1.0).matrix() ==
          dephasing_map_exact(rho0, p.with_kappa(0.6), 1.0).matrix());
    CHECK(max_abs_difference(closed_form_hd(rho0, p, 0.0, w, 1.0).matrix(),
                             dephasing_map_exact(rho0, p, 1.0).matrix()) <= 1e-15);
    // W = pi / sqrt(2) at kappa = eta = 1 rotates the coherence by pi.
    const std::vector<double> half_turn{kPi / std::sqrt(2.0)};
    const auto flipped = closed_form_hd(product_plus_state(1), {1, 0.0, 1.0}, 1.0, half_turn, 1.0);
    CHECK(flipped(0, 1).real() == doctest::Approx(-0.5));
    CHECK(std::abs(flipped(0, 1)) == doctest::Approx(0.5));
}

TEST_CASE("closed-form derivatives match central differences") {
    RandomStream rng(11);
    const LindbladParams p{3, 0.7, 0.9};
    const auto rho0 = testing::random_pure(3, rng);
    const std::vector<long> counts{1, 2, 3};
    const std::vector<double> w{0.2, -0.4, 0.9};
    const double h = 1e-5, t = 0.8;
    const auto pd = closed_form_pd_with_derivative(rho0, p, 0.6, counts, t);
    const Matrix pd_fd = (closed_form_pd(rho0, p.with_omega(p.omega + h), 0.6, counts, t).matrix() -
                          closed_form_pd(rho0, p.with_omega(p.omega - h), 0.6, counts, t).matrix()) /
                         (2 * h);
    CHECK(max_abs_difference(pd.derivative, pd_fd) < 1e-8);
    const auto hd = closed_form_hd_with_derivative(rho0, p, 0.6, w, t);
    const Matrix hd_fd = (closed_form_hd(rho0, p.with_omega(p.omega + h), 0.6, w, t).matrix() -
                          closed_form_hd(rho0, p.with_omega(p.omega - h), 0.6, w, t).matrix()) /
                         (2 * h);
    CHECK(max_abs_difference(hd.derivative, hd_fd) < 1e-8);
}

TEST_CASE("co-propagated tangent matches a replay at shifted omega") {
    RandomStream rng(12);
    const LindbladParams p{2, 1.0, 1.0};
    const auto rho0 = testing::random_pure(2, rng);
    const auto g = grid_to(0.5, 1e-3);
    for (auto u : {UnravellingSpec::photo_detection(0.7), UnravellingSpec::homodyne(0.7, kPi / 2),
                   UnravellingSpec::homodyne(0.7, 0.0), UnravellingSpec::homodyne(1.0, kPi / 4)}) {
        const auto r = simulate_trajectory(rho0, p, u, g, 21);
        const double h = 1e-5;
        // Same seed at shifted omega reproduces the same noise, hence the same record.
        const auto up = simulate_trajectory(rho0, p.with_omega(p.omega + h), u, g, 21);
        const auto down = simulate_trajectory(rho0, p.with_omega(p.omega - h), u, g, 21);
        const Matrix fd = (up.samples.back().state.matrix() - down.samples.back().state.matrix()) / (2 * h);
        CHECK(max_abs_difference(r.samples.back().state_derivative, fd) < 1e-7);
    }
}

TEST_CASE("the record likelihood carries no omega information") {
    // Every operator is diagonal in the computational basis, so populations and
    // with them the record statistics never see omega, whatever the angle.
    RandomStream rng(13);
    const LindbladParams p{2, 1.0, 1.0};
    const auto rho0 = ghz_state(2);
    for (auto u : {UnravellingSpec::photo_detection(1.0), UnravellingSpec::homodyne(1.0, 0.0),
                   UnravellingSpec::homodyne(0.5, kPi / 3)}) {
        const auto r = simulate_trajectory(rho0, p, u, grid_to(1.0, 1e-3), 5);
        CHECK(r.samples.back().score == 0.0);
        const double h = 1e-4;
        const double fd = (replay_log_likelihood(rho0, r, p.omega + h) -
                           replay_log_likelihood(rho0, r, p.omega - h)) /
                          (2 * h);
        CHECK(std::abs(fd) < 1e-9);
    }
}

TEST_CASE("HD likelihood replay is exact for the generated record") {
    const LindbladParams p{2, 1.0, 1.0};
    const auto r = simulate_trajectory(ghz_state(2), p, UnravellingSpec::homodyne(0.8, 0.0),
                                       grid_to(0.3, 1e-3), 8);
    const auto again = simulate_trajectory(ghz_state(2), p, UnravellingSpec::homodyne(0.8, 0.0),
                                           grid_to(0.3, 1e-3), 8);
    CHECK(replay_log_likelihood(ghz_state(2), r, 1.0) == replay_log_likelihood(ghz_state(2), again, 1.0));
}

TEST_CASE("closed-form helpers reject bad input") {
    const LindbladParams p{2, 1.0, 1.0};
    const std::vector<long> one{1}, negative{-1, 0};
    CHECK_THROWS(closed_form_pd(ghz_state(2), p, 0.5, one, 1.0));
    CHECK_THROWS(closed_form_pd(ghz_state(2), p, 0.5, negative, 1.0));
    const std::vector<long> ok{1, 0};
    CHECK_THROWS(closed_form_pd(ghz_state(2), p, 1.5, ok, 1.0));
    CHECK_THROWS_AS(simulate_trajectory(ghz_state(3), p, UnravellingSpec::photo_detection(1.0),
                                        grid_to(0.1, 1e-3), 1),
                    DimensionError);
}

}  // TEST_SUITE
