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

#include "dephmon/dynamics.hpp"
#include "dephmon/kernels.hpp"
#include "test_util.hpp"

using namespace dephmon;

namespace {

std::vector<Complex> random_table(int n_qubits, RandomStream& rng) {
    std::vector<Complex> table(kernels::factor_table_size(n_qubits));
    for (auto& f : table) f = Complex(rng.normal(1.0), rng.normal(1.0));
    return table;
}

Matrix random_square(Eigen::Index dim, RandomStream& rng) {
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index k = 0; k < dim; ++k) a(i, k) = Complex(rng.normal(1.0), rng.normal(1.0));
    }
    return a;
}

}  // namespace

TEST_SUITE("kernels") {

// Sizes straddle kParallelMinDim so both the serial and the threaded branch run.
TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    RandomStream rng(5);
    for (int n : {1, 3, 7, 8, 9}) {
        const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
        const auto table = random_table(n, rng);
        const Matrix x0 = random_square(dim, rng);
        const Matrix t0 = random_square(dim, rng);

        Matrix a = x0, b = x0;
        kernels::dephase(a, table, n);
        kernels::reference::dephase(b, table, n);
        CHECK(a == b);

        Matrix ra = x0, ta = t0, rb = x0, tb = t0;
        kernels::dephase_with_tangent(ra, ta, table, n, 0.7);
        kernels::reference::dephase_with_tangent(rb, tb, table, n, 0.7);
        CHECK(ra == rb);
        CHECK(ta == tb);

        std::vector<Complex> d(static_cast<std::size_t>(dim));
        for (auto& z : d) z = std::polar(1.0, rng.normal(1.0));
        Matrix ca = x0, cb = x0;
        kernels::conjugate_diagonal(ca, d);
        kernels::reference::conjugate_diagonal(cb, d);
        CHECK(ca == cb);
    }
}

TEST_CASE("factor slots depend only on excitation gap and Hamming distance") {
    CHECK(kernels::factor_slot(0b01, 0b10, 2) == kernels::factor_slot(0b10, 0b01, 2));
    CHECK(kernels::factor_slot(0b00, 0b11, 2) != kernels::factor_slot(0b11, 0b00, 2));
    for (int n = 1; n <= 5; ++n) {
        const std::size_t dim = hilbert_dimension(n);
        for (std::size_t m = 0; m < dim; ++m) {
            for (std::size_t k = 0; k < dim; ++k) {
                CHECK(kernels::factor_slot(m, k, n) < kernels::factor_table_size(n));
            }
        }
    }
}

}  // TEST_SUITE

TEST_SUITE("dynamics") {

TEST_CASE("single-qubit coherence decays as exp(-kappa t)") {
    const LindbladParams p{1, 0.0, 1.0};
    const auto rho0 = product_plus_state(1);
    // Oracle: fine RK4 of the generator.
    const double oracle = std::abs(propagate_ode(rho0, p, 1.0, 1e-5).state(0, 1));
    CHECK(oracle == doctest::Approx(0.18393972058572117).epsilon(1e-9));
    const auto exact = dephasing_map_exact(rho0, p, 1.0);
    CHECK(std::abs(exact(0, 1)) == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(exact(0, 0).real() == 0.5);
}

TEST_CASE("GHZ corner coherence decays with Hamming distance 2") {
    const LindbladParams p{2, 0.0, 1.0};
    const auto rho0 = ghz_state(2);
    const double oracle = std::abs(propagate_ode(rho0, p, 0.5, 1e-5).state(0, 3));
    CHECK(oracle == doctest::Approx(0.18393972058572117).epsilon(1e-9));
    CHECK(std::abs(dephasing_map_exact(rho0, p, 0.5)(0, 3)) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("vanishing generator leaves the state unchanged") {
    RandomStream rng(1);
    const auto rho0 = testing::random_mixed(3, rng);
    const auto out = dephasing_map_exact(rho0, {3, 0.0, 0.0}, 2.5);
    CHECK(out.matrix() == rho0.matrix());
}

TEST_CASE("exact map is a channel and a semigroup") {
    RandomStream rng(2);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + trial % 4;
        const LindbladParams p{n, rng.normal(1.0), std::abs(rng.normal(1.0))};
        const auto rho0 = testing::random_mixed(n, rng);
        const double t1 = std::abs(rng.normal(1.0));
        const double t2 = std::abs(rng.normal(1.0));
        const auto once = dephasing_map_exact(rho0, p, t1 + t2);
        const auto twice = dephasing_map_exact(dephasing_map_exact(rho0, p, t1), p, t2);
        CHECK(is_density_matrix(once.matrix()));
        CHECK(max_abs_difference(once.matrix(), twice.matrix()) <= 1e-12);
    }
}

TEST_CASE("exact map agrees with RK4 on a grid of rates") {
    RandomStream rng(3);
    const double rates[] = {0.0, 0.5, 1.0, 2.0};
    int index = 0;
    for (int n = 1; n <= 3; ++n) {
        for (double kappa : rates) {
            for (double omega : rates) {
                const double t = 0.5 + 0.5 * (index++ % 3);
                const LindbladParams p{n, omega, kappa};
                const auto rho0 = testing::random_mixed(n, rng);
                const auto ode = propagate_ode(rho0, p, t, 1e-4);
                CHECK(trace_distance(ode.state.matrix(), dephasing_map_exact(rho0, p, t).matrix()) <=
                      1e-6);
            }
        }
    }
}

TEST_CASE("propagate_ode self-consistency at N=2") {
    RandomStream rng(4);
    const LindbladParams p{2, 1.0, 1.0};
    const auto rho0 = testing::random_pure(2, rng);
    const auto ode = propagate_ode(rho0, p, 1.0, 1e-4);
    CHECK(trace_distance(ode.state.matrix(), dephasing_map_exact(rho0, p, 1.0).matrix()) <= 1e-8);
    CHECK(ode.max_trace_drift < 1e-12);
}

TEST_CASE("propagate_ode edge cases") {
    const LindbladParams p{1, 1.0, 1.0};
    const auto rho0 = product_plus_state(1);
    CHECK(propagate_ode(rho0, p, 0.0, 1e-3).state.matrix() == rho0.matrix());
    CHECK_THROWS(propagate_ode(rho0, p, 1e-4, 1e-3));
    // Step count that does not divide t: a remainder step lands exactly on t.
    const auto ode = propagate_ode(rho0, p, 0.10005, 1e-3);
    CHECK(trace_distance(ode.state.matrix(), dephasing_map_exact(rho0, p, 0.10005).matrix()) < 1e-10);
}

TEST_CASE("zero dephasing is a pure rotation") {
    RandomStream rng(5);
    const int n = 3;
    const double omega = 1.3, t = 0.8;
    const auto rho0 = testing::random_pure(n, rng);
    Matrix u = Matrix::Zero(8, 8);
    for (std::size_t m = 0; m < 8; ++m) {
        u(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) =
            std::exp(Complex(0.0, -omega * t * jz_eigenvalue(m, n)));
    }
    const Matrix expected = u * rho0.matrix() * u.adjoint();
    CHECK(max_abs_difference(dephasing_map_exact(rho0, {n, omega, 0.0}, t).matrix(), expected) < 1e-14);
}

TEST_CASE("off-diagonal decay rate equals kappa times Hamming distance") {
    RandomStream rng(6);
    const int n = 3;
    const LindbladParams p{n, 0.9, 0.7};
    const auto rho0 = testing::random_mixed(n, rng, 0.2);
    for (std::size_t m = 0; m < 8; ++m) {
        for (std::size_t k = m + 1; k < 8; ++k) {
            // Least-squares slope of log|rho_mk(t)|.
            double st = 0, sy = 0, stt = 0, sty = 0;
            const int points = 9;
            for (int i = 0; i < points; ++i) {
                const double t = 0.25 * i;
                const double y = std::log(std::abs(dephasing_map_exact(rho0, p, t)(m, k)));
                st += t;
                sy += y;
                stt += t * t;
                sty += t * y;
            }
            const double slope = (points * sty - st * sy) / (points * stt - st * st);
            CHECK(-slope == doctest::Approx(p.kappa * hamming_distance(m, k)).epsilon(1e-6));
        }
    }
}

TEST_CASE("lindblad_rhs examples") {
    CHECK(lindblad_rhs(maximally_mixed_state(3).matrix(), {3, 1.0, 2.0}).norm() == 0.0);
    const Matrix d = lindblad_rhs(product_plus_state(1).matrix(), {1, 0.0, 1.0});
    CHECK(d(0, 1).real() == doctest::Approx(-0.5));
    CHECK(d(1, 0).real() == doctest::Approx(-0.5));
    CHECK(std::abs(d(0, 0)) < 1e-15);
    CHECK(std::abs(d(1, 1)) < 1e-15);
    RandomStream rng(7);
    for (int i = 0; i < 100; ++i) {
        const int n = 1 + i % 3;
        const Matrix r = lindblad_rhs(testing::random_mixed(n, rng).matrix(),
                                      {n, rng.normal(1.0), std::abs(rng.normal(1.0))});
        CHECK(std::abs(r.trace()) < 1e-13);
    }
}

TEST_CASE("analytic omega-derivative of the map matches central differences") {
    RandomStream rng(8);
    const LindbladParams p{3, 0.4, 0.6};
    const auto rho0 = testing::random_mixed(3, rng);
    const double h = 1e-5, t = 1.3;
    const Matrix fd = (dephasing_map_exact(rho0, p.with_omega(p.omega + h), t).matrix() -
                       dephasing_map_exact(rho0, p.with_omega(p.omega - h), t).matrix()) /
                      (2 * h);
    CHECK(max_abs_difference(dephasing_map_derivative(rho0, p, t), fd) < 1e-8);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(LindbladParams({2, 1.0, -0.1}).validate(), std::invalid_argument);
    CHECK_THROWS(LindbladParams({0, 1.0, 1.0}).validate());
    CHECK_NOTHROW(LindbladParams({2, -1.0, 0.0}).validate());
}

}  // TEST_SUITE
