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

#include "dephmon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dephmon/kernels.hpp"

namespace dephmon {

void LindbladParams::validate() const {
    hilbert_dimension(n_qubits);
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw std::invalid_argument("dephasing rate kappa must be finite and >= 0");
    }
    if (!std::isfinite(omega)) {
        throw std::invalid_argument("frequency omega must be finite");
    }
}

DephasingPropagator::DephasingPropagator(const LindbladParams& p, double t)
    : n_qubits_(p.n_qubits), t_(t), table_(kernels::factor_table_size(p.n_qubits)) {
    p.validate();
    if (!(t >= 0.0)) {
        throw std::invalid_argument("propagation time must be >= 0");
    }
    const int n = n_qubits_;
    for (int gap = -n; gap <= n; ++gap) {
        const Complex phase = std::exp(Complex(0.0, -p.omega * t * gap));
        for (int dh = 0; dh <= n; ++dh) {
            const std::size_t slot =
                static_cast<std::size_t>(gap + n) * static_cast<std::size_t>(n + 1) + dh;
            table_[slot] = (gap == 0 ? Complex(1.0) : phase) * std::exp(-p.kappa * t * dh);
        }
    }
}

void DephasingPropagator::apply(Matrix& rho) const {
    if (rho.rows() != static_cast<Eigen::Index>(hilbert_dimension(n_qubits_))) {
        throw DimensionError("state dimension does not match propagator");
    }
    kernels::dephase(rho, table_, n_qubits_);
}

void DephasingPropagator::apply_with_tangent(Matrix& rho, Matrix& tangent) const {
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits_));
    if (rho.rows() != dim || tangent.rows() != dim) {
        throw DimensionError("state dimension does not match propagator");
    }
    kernels::dephase_with_tangent(rho, tangent, table_, n_qubits_, t_);
}

DensityMatrix dephasing_map_exact(const DensityMatrix& rho0, const LindbladParams& p, double t) {
    if (rho0.qubits() != p.n_qubits) {
        throw DimensionError("state qubit count does not match parameters");
    }
    Matrix rho = rho0.matrix();
    DephasingPropagator(p, t).apply(rho);
    return DensityMatrix::trusted(std::move(rho));
}

Matrix dephasing_map_derivative(const DensityMatrix& rho0, const LindbladParams& p, double t) {
    if (rho0.qubits() != p.n_qubits) {
        throw DimensionError("state qubit count does not match parameters");
    }
    Matrix rho = rho0.matrix();
    Matrix tangent = Matrix::Zero(rho.rows(), rho.cols());
    DephasingPropagator(p, t).apply_with_tangent(rho, tangent);
    return tangent;
}

Matrix lindblad_rhs(const Matrix& rho, const LindbladParams& p) {
    p.validate();
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(p.n_qubits));
    if (rho.rows() != dim || rho.cols() != dim) {
        throw DimensionError("lindblad_rhs: state dimension mismatch");
    }
    const Matrix h = p.omega * collective_jz(p.n_qubits);
    Matrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
    for (int j = 1; j <= p.n_qubits; ++j) {
        const Matrix sz = sigma_z(QubitIndex{j}, p.n_qubits);
        out += 0.5 * p.kappa * (sz * rho * sz - rho);
    }
    return out;
}

namespace {

// Dense-operator generator with the operators built once per integration.
class DenseGenerator {
  public:
    explicit DenseGenerator(const LindbladParams& p)
        : h_(p.omega * collective_jz(p.n_qubits)), half_kappa_(0.5 * p.kappa) {
        for (int j = 1; j <= p.n_qubits; ++j) {
            jumps_.push_back(sigma_z(QubitIndex{j}, p.n_qubits));
        }
    }

    Matrix operator()(const Matrix& rho) const {
        Matrix out = Complex(0.0, -1.0) * (h_ * rho - rho * h_);
        for (const auto& sz : jumps_) {
            out.noalias() += half_kappa_ * (sz * rho * sz);
            out -= half_kappa_ * rho;
        }
        return out;
    }

  private:
    Matrix h_;
    double half_kappa_;
    std::vector<Matrix> jumps_;
};

}  // namespace

OdeResult propagate_ode(const DensityMatrix& rho0, const LindbladParams& p, double t, double dt) {
    p.validate();
    if (rho0.qubits() != p.n_qubits) {
        throw DimensionError("state qubit count does not match parameters");
    }
    if (t < 0.0) {
        throw std::invalid_argument("propagation time must be >= 0");
    }
    if (t == 0.0) {
        return {rho0, 0.0, 0};
    }
    if (!(dt > 0.0) || dt > t) {
        throw std::invalid_argument("ODE step must satisfy 0 < dt <= t");
    }

    const DenseGenerator rhs(p);
    Matrix rho = rho0.matrix();
    double elapsed = 0.0;
    double max_drift = 0.0;
    int renorm = 0;
    const auto full_steps = static_cast<long>(std::floor(t / dt + 1e-9));
    const double remainder = t - static_cast<double>(full_steps) * dt;

    auto step = [&](double h) {
        const Matrix k1 = rhs(rho);
        const Matrix k2 = rhs(rho + 0.5 * h * k1);
        const Matrix k3 = rhs(rho + 0.5 * h * k2);
        const Matrix k4 = rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        elapsed += h;
        const double drift = std::abs(rho.trace().real() - 1.0);
        max_drift = std::max(max_drift, drift);
        if (drift > 1e-12) {
            rho /= rho.trace().real();
            ++renorm;
        }
    };

    for (long s = 0; s < full_steps; ++s) {
        step(dt);
    }
    if (remainder > 1e-12 * dt) {
        step(remainder);
    }
    return {DensityMatrix::trusted(std::move(rho)), max_drift, renorm};
}

}  // namespace dephmon
