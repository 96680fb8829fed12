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
 * N-qubit operator algebra and canonical probe states.
 *
 * Basis convention: qubit 1 is the most significant bit of the
 * computational-basis index, so for N = 2 the index 0b10 is |1 0>.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dephmon {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Largest supported register; a 4096 x 4096 complex matrix is 256 MiB.
inline constexpr int kMaxQubits = 12;

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;

class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class InvalidStateError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// 1-based qubit label.
struct QubitIndex {
    int value;
};

/// 2^n, throwing DimensionError outside [1, kMaxQubits].
std::size_t hilbert_dimension(int n_qubits);

/// Inverse of hilbert_dimension; throws if dim is not a supported power of two.
int qubits_for_dimension(Eigen::Index dim);

/// +1 if qubit j (1-based, MSB first) is |0> in basis state m, else -1.
inline int z_sign(std::size_t m, int j, int n_qubits) {
    return ((m >> (n_qubits - j)) & 1U) ? -1 : 1;
}

/// Eigenvalue of J_z on basis state m: (N - 2 popcount(m)) / 2.
inline double jz_eigenvalue(std::size_t m, int n_qubits) {
    return 0.5 * (n_qubits - 2 * __builtin_popcountll(m));
}

inline int hamming_distance(std::size_t m, std::size_t n) {
    return __builtin_popcountll(m ^ n);
}

Matrix sigma_z(QubitIndex j, int n_qubits);
Matrix collective_jz(int n_qubits);

/// Throws InvalidStateError describing the first violated invariant.
void check_density_matrix(const Matrix& m);
bool is_density_matrix(const Matrix& m);

/// Hermitian, unit-trace, positive semidefinite matrix on N qubits.
class DensityMatrix {
  public:
    /// Validates all invariants.
    explicit DensityMatrix(Matrix m);

    /// Wraps without eigen-validation; dimension is still checked.
    static DensityMatrix trusted(Matrix m);

    const Matrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    int qubits() const noexcept { return n_qubits_; }
    Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

    double purity() const;
    double trace() const { return m_.trace().real(); }

  private:
    struct Unchecked {};
    DensityMatrix(Matrix m, Unchecked);

    Matrix m_;
    int n_qubits_;
};

DensityMatrix ghz_state(int n_qubits);
DensityMatrix product_plus_state(int n_qubits);
DensityMatrix maximally_mixed_state(int n_qubits);
DensityMatrix basis_state(std::size_t index, int n_qubits);

/// |psi><psi| for an already normalized amplitude vector.
DensityMatrix pure_state(const Vector& amplitudes);

/// Half the trace norm of a - b; both must be Hermitian.
double trace_distance(const Matrix& a, const Matrix& b);

double max_abs_difference(const Matrix& a, const Matrix& b);

}  // namespace dephmon
