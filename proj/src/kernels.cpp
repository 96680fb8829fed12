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

#include "dephmon/kernels.hpp"

namespace dephmon::kernels {

namespace {

inline void dephase_column(Matrix& x, Eigen::Index n, std::span<const Complex> table,
                           int n_qubits) {
    const auto un = static_cast<std::size_t>(n);
    for (Eigen::Index m = 0; m < x.rows(); ++m) {
        x(m, n) *= table[factor_slot(static_cast<std::size_t>(m), un, n_qubits)];
    }
}

inline void dephase_tangent_column(Matrix& rho, Matrix& tangent, Eigen::Index n,
                                   std::span<const Complex> table, int n_qubits, double t) {
    const auto un = static_cast<std::size_t>(n);
    const int pop_n = __builtin_popcountll(un);
    for (Eigen::Index m = 0; m < rho.rows(); ++m) {
        const auto um = static_cast<std::size_t>(m);
        const Complex f = table[factor_slot(um, un, n_qubits)];
        const Complex r = rho(m, n) * f;
        const double gap = pop_n - __builtin_popcountll(um);
        rho(m, n) = r;
        tangent(m, n) = tangent(m, n) * f + Complex(0.0, -t * gap) * r;
    }
}

inline void conjugate_column(Matrix& x, Eigen::Index n, std::span<const Complex> d) {
    const Complex dn = std::conj(d[n]);
    for (Eigen::Index m = 0; m < x.rows(); ++m) {
        x(m, n) *= d[m] * dn;
    }
}

}  // namespace

void dephase(Matrix& x, std::span<const Complex> table, int n_qubits) {
    const Eigen::Index dim = x.cols();
#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (Eigen::Index n = 0; n < dim; ++n) {
        dephase_column(x, n, table, n_qubits);
    }
}

void dephase_with_tangent(Matrix& rho, Matrix& tangent, std::span<const Complex> table,
                          int n_qubits, double t) {
    const Eigen::Index dim = rho.cols();
#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (Eigen::Index n = 0; n < dim; ++n) {
        dephase_tangent_column(rho, tangent, n, table, n_qubits, t);
    }
}

void conjugate_diagonal(Matrix& x, std::span<const Complex> d) {
    const Eigen::Index dim = x.cols();
#pragma omp parallel for schedule(static) if (dim >= kParallelMinDim)
    for (Eigen::Index n = 0; n < dim; ++n) {
        conjugate_column(x, n, d);
    }
}

namespace reference {

void dephase(Matrix& x, std::span<const Complex> table, int n_qubits) {
    for (Eigen::Index n = 0; n < x.cols(); ++n) {
        dephase_column(x, n, table, n_qubits);
    }
}

void dephase_with_tangent(Matrix& rho, Matrix& tangent, std::span<const Complex> table,
                          int n_qubits, double t) {
    for (Eigen::Index n = 0; n < rho.cols(); ++n) {
        dephase_tangent_column(rho, tangent, n, table, n_qubits, t);
    }
}

void conjugate_diagonal(Matrix& x, std::span<const Complex> d) {
    for (Eigen::Index n = 0; n < x.cols(); ++n) {
        conjugate_column(x, n, d);
    }
}

}  // namespace reference

}  // namespace dephmon::kernels
