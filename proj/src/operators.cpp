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

#include "dephmon/operators.hpp"

#include <cmath>
#include <sstream>

namespace dephmon {

std::size_t hilbert_dimension(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        std::ostringstream msg;
        msg << "qubit count " << n_qubits << " outside supported range [1, " << kMaxQubits << "]";
        throw DimensionError(msg.str());
    }
    return std::size_t{1} << n_qubits;
}

int qubits_for_dimension(Eigen::Index dim) {
    for (int n = 1; n <= kMaxQubits; ++n) {
        if (static_cast<Eigen::Index>(std::size_t{1} << n) == dim) {
            return n;
        }
    }
    throw DimensionError("matrix dimension " + std::to_string(dim) +
                         " is not 2^N for a supported N");
}

Matrix sigma_z(QubitIndex j, int n_qubits) {
    const auto dim = hilbert_dimension(n_qubits);
    if (j.value < 1 || j.value > n_qubits) {
        throw DimensionError("qubit index " + std::to_string(j.value) + " outside [1, " +
                             std::to_string(n_qubits) + "]");
    }
    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t m = 0; m < dim; ++m) {
        out(m, m) = static_cast<double>(z_sign(m, j.value, n_qubits));
    }
    return out;
}

Matrix collective_jz(int n_qubits) {
    const auto dim = hilbert_dimension(n_qubits);
    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t m = 0; m < dim; ++m) {
        out(m, m) = jz_eigenvalue(m, n_qubits);
    }
    return out;
}

void check_density_matrix(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw InvalidStateError("density matrix is not square");
    }
    qubits_for_dimension(m.rows());
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTolerance) {
        throw InvalidStateError("density matrix not Hermitian (deviation " + std::to_string(herm) +
                                ")");
    }
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
        throw InvalidStateError("density matrix trace " + std::to_string(tr) + " != 1");
    }
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -kPsdTolerance) {
        throw InvalidStateError("density matrix has negative eigenvalue " + std::to_string(lo));
    }
}

bool is_density_matrix(const Matrix& m) {
    try {
        check_density_matrix(m);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

DensityMatrix::DensityMatrix(Matrix m) : m_(std::move(m)), n_qubits_(0) {
    check_density_matrix(m_);
    n_qubits_ = qubits_for_dimension(m_.rows());
}

DensityMatrix::DensityMatrix(Matrix m, Unchecked) : m_(std::move(m)), n_qubits_(0) {
    if (m_.rows() != m_.cols()) {
        throw InvalidStateError("density matrix is not square");
    }
    n_qubits_ = qubits_for_dimension(m_.rows());
}

DensityMatrix DensityMatrix::trusted(Matrix m) { return DensityMatrix(std::move(m), Unchecked{}); }

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum |rho_mn|^2 for Hermitian rho.
    return m_.cwiseAbs2().sum();
}

DensityMatrix ghz_state(int n_qubits) {
    const auto dim = hilbert_dimension(n_qubits);
    Matrix m = Matrix::Zero(dim, dim);
    m(0, 0) = m(0, dim - 1) = m(dim - 1, 0) = m(dim - 1, dim - 1) = 0.5;
    return DensityMatrix::trusted(std::move(m));
}

DensityMatrix product_plus_state(int n_qubits) {
    const auto dim = hilbert_dimension(n_qubits);
    return DensityMatrix::trusted(Matrix::Constant(dim, dim, 1.0 / static_cast<double>(dim)));
}

DensityMatrix maximally_mixed_state(int n_qubits) {
    const auto dim = hilbert_dimension(n_qubits);
    Matrix m = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    return DensityMatrix::trusted(std::move(m));
}

DensityMatrix basis_state(std::size_t index, int n_qubits) {
    const auto dim = hilbert_dimension(n_qubits);
    if (index >= dim) {
        throw DimensionError("basis index out of range");
    }
    Matrix m = Matrix::Zero(dim, dim);
    m(index, index) = 1.0;
    return DensityMatrix::trusted(std::move(m));
}

DensityMatrix pure_state(const Vector& amplitudes) {
    qubits_for_dimension(amplitudes.size());
    const double norm = amplitudes.squaredNorm();
    if (std::abs(norm - 1.0) > kTraceTolerance) {
        throw InvalidStateError("amplitude vector not normalized (norm^2 = " +
                                std::to_string(norm) + ")");
    }
    return DensityMatrix::trusted(amplitudes * amplitudes.adjoint());
}

double trace_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("trace_distance: dimension mismatch");
    }
    const Matrix diff = a - b;
    const Matrix h = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double max_abs_difference(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_difference: dimension mismatch");
    }
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace dephmon
