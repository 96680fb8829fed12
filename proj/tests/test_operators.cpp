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

#include "dephmon/operators.hpp"
#include "test_util.hpp"

using namespace dephmon;

namespace {

Matrix diag(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v.asDiagonal();
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("sigma_z examples") {
    CHECK(sigma_z(QubitIndex{1}, 1) == diag({1, -1}));
    CHECK(sigma_z(QubitIndex{2}, 2) == diag({1, -1, 1, -1}));
    CHECK(sigma_z(QubitIndex{1}, 2) == diag({1, 1, -1, -1}));
}

TEST_CASE("sigma_z squares to identity and commutes") {
    for (int n = 1; n <= 6; ++n) {
        const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
        for (int j = 1; j <= n; ++j) {
            const Matrix zj = sigma_z(QubitIndex{j}, n);
            CHECK(zj * zj == Matrix::Identity(dim, dim));
            for (int k = 1; k <= n; ++k) {
                const Matrix zk = sigma_z(QubitIndex{k}, n);
                CHECK(zj * zk == zk * zj);
            }
        }
    }
}

TEST_CASE("sigma_z rejects bad indices") {
    CHECK_THROWS_AS(sigma_z(QubitIndex{0}, 2), DimensionError);
    CHECK_THROWS_AS(sigma_z(QubitIndex{3}, 2), DimensionError);
    CHECK_THROWS_AS(sigma_z(QubitIndex{1}, 0), DimensionError);
    CHECK_THROWS_AS(sigma_z(QubitIndex{1}, kMaxQubits + 1), DimensionError);
}

TEST_CASE("collective_jz examples and definition") {
    CHECK(collective_jz(1) == diag({0.5, -0.5}));
    CHECK(collective_jz(2) == diag({1, 0, 0, -1}));
    CHECK(collective_jz(3)(0b101, 0b101) == Complex(-0.5, 0.0));
    for (int n = 1; n <= 6; ++n) {
        Matrix sum = Matrix::Zero(collective_jz(n).rows(), collective_jz(n).cols());
        for (int j = 1; j <= n; ++j) sum += sigma_z(QubitIndex{j}, n);
        CHECK(collective_jz(n) == 0.5 * sum);
    }
}

TEST_CASE("ghz_state") {
    const Matrix one = ghz_state(1).matrix();
    CHECK(one == Matrix::Constant(2, 2, Complex(0.5, 0.0)));
    const Matrix two = ghz_state(2).matrix();
    for (auto [m, n] : {std::pair{0, 0}, {0, 3}, {3, 0}, {3, 3}}) {
        CHECK(two(m, n) == Complex(0.5, 0.0));
    }
    CHECK(two(1, 1) == Complex(0.0, 0.0));
    for (int n = 1; n <= 8; ++n) {
        CHECK(ghz_state(n).trace() == doctest::Approx(1.0));
        CHECK(ghz_state(n).purity() == doctest::Approx(1.0));
    }
}

TEST_CASE("product_plus_state") {
    CHECK(product_plus_state(1).matrix() == Matrix::Constant(2, 2, Complex(0.5, 0.0)));
    CHECK(product_plus_state(2).matrix() == Matrix::Constant(4, 4, Complex(0.25, 0.0)));
    for (int n = 1; n <= 8; ++n) {
        CHECK(product_plus_state(n).trace() == doctest::Approx(1.0));
        CHECK(product_plus_state(n).purity() == doctest::Approx(1.0));
    }
}

TEST_CASE("constructed states satisfy the density-matrix invariants") {
    RandomStream rng(11);
    for (int n = 1; n <= 5; ++n) {
        CHECK(is_density_matrix(ghz_state(n).matrix()));
        CHECK(is_density_matrix(product_plus_state(n).matrix()));
        CHECK(is_density_matrix(maximally_mixed_state(n).matrix()));
        CHECK(is_density_matrix(basis_state(0, n).matrix()));
        CHECK(is_density_matrix(testing::random_pure(n, rng).matrix()));
        CHECK(is_density_matrix(testing::random_mixed(n, rng).matrix()));
    }
}

TEST_CASE("DensityMatrix validation") {
    Matrix bad_trace = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, InvalidStateError);
    Matrix non_hermitian = 0.5 * Matrix::Identity(2, 2);
    non_hermitian(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{non_hermitian}, InvalidStateError);
    Matrix negative = Matrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{negative}, InvalidStateError);
    CHECK_THROWS_AS(DensityMatrix{Matrix::Identity(3, 3) / 3.0}, DimensionError);
}

TEST_CASE("jz eigenvalues and hamming distance") {
    CHECK(jz_eigenvalue(0b101, 3) == doctest::Approx(-0.5));
    CHECK(jz_eigenvalue(0, 4) == doctest::Approx(2.0));
    CHECK(hamming_distance(0b1010, 0b0110) == 2);
    CHECK(z_sign(0b10, 1, 2) == -1);
    CHECK(z_sign(0b10, 2, 2) == 1);
}

TEST_CASE("trace distance") {
    CHECK(trace_distance(basis_state(0, 1).matrix(), basis_state(1, 1).matrix()) ==
          doctest::Approx(1.0));
    RandomStream rng(3);
    const auto rho = testing::random_mixed(2, rng);
    CHECK(trace_distance(rho.matrix(), rho.matrix()) == doctest::Approx(0.0));
}

}  // TEST_SUITE
