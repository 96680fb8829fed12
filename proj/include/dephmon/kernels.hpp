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
 * Elementwise kernels on dense density matrices.
 *
 * Every operator in the dephasing model is diagonal in the computational
 * basis, so each propagation step is an entrywise product. The OpenMP
 * versions split work by column; the serial versions in `reference` perform
 * the identical arithmetic and exist for testing and benchmarking.
 */

#pragma once

#include <span>

#include "dephmon/operators.hpp"

namespace dephmon::kernels {

/// Matrices at or above this dimension fork an OpenMP team.
inline constexpr Eigen::Index kParallelMinDim = 128;

/// Entry of the dephasing factor table for a basis pair (m, n).
///
/// The propagator factor depends on m, n only through the J_z eigenvalue gap
/// h_m - h_n = popcount(n) - popcount(m), an integer in [-N, N], and the
/// Hamming distance d_H(m, n) in [0, N]. Tables hold (2N + 1)(N + 1) entries.
inline std::size_t factor_slot(std::size_t m, std::size_t n, int n_qubits) {
    const int gap = __builtin_popcountll(n) - __builtin_popcountll(m);
    return static_cast<std::size_t>(gap + n_qubits) * static_cast<std::size_t>(n_qubits + 1) +
           static_cast<std::size_t>(hamming_distance(m, n));
}

inline std::size_t factor_table_size(int n_qubits) {
    return static_cast<std::size_t>(2 * n_qubits + 1) * static_cast<std::size_t>(n_qubits + 1);
}

/// x_mn <- x_mn * table[factor_slot(m, n)]
void dephase(Matrix& x, std::span<const Complex> table, int n_qubits);

/// rho <- dephase(rho); tangent <- dephase(tangent) + (-i t (h_m - h_n)) rho_new_mn
void dephase_with_tangent(Matrix& rho, Matrix& tangent, std::span<const Complex> table,
                          int n_qubits, double t);

/// x_mn <- d_m * x_mn * conj(d_n)
void conjugate_diagonal(Matrix& x, std::span<const Complex> d);

namespace reference {

void dephase(Matrix& x, std::span<const Complex> table, int n_qubits);
void dephase_with_tangent(Matrix& rho, Matrix& tangent, std::span<const Complex> table,
                          int n_qubits, double t);
void conjugate_diagonal(Matrix& x, std::span<const Complex> d);

}  // namespace reference

}  // namespace dephmon::kernels
