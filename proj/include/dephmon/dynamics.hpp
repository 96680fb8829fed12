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
 * Unconditional dephasing dynamics.
 *
 * The generator L_{omega,kappa} rho = -i[omega J_z, rho]
 * + (kappa/2) sum_j (sz_j rho sz_j - rho) is diagonal in the basis of matrix
 * units |m><n|:
 *
 *   d rho_mn / dt = [-i omega (h_m - h_n) - kappa d_H(m, n)] rho_mn,
 *
 * because sz_j rho sz_j flips the sign of rho_mn exactly when bit j differs
 * between m and n. The exact propagator is therefore an entrywise product.
 */

#pragma once

#include <vector>

#include "dephmon/operators.hpp"

namespace dephmon {

struct LindbladParams {
    int n_qubits = 1;
    double omega = 0.0;
    double kappa = 0.0;

    /// Throws std::invalid_argument on kappa < 0 or an unsupported N.
    void validate() const;

    LindbladParams with_kappa(double k) const { return {n_qubits, omega, k}; }
    LindbladParams with_omega(double w) const { return {n_qubits, w, kappa}; }
};

/// Cached e^{L t} for fixed (params, t).
class DephasingPropagator {
  public:
    DephasingPropagator(const LindbladParams& p, double t);

    /// rho <- e^{L t} rho
    void apply(Matrix& rho) const;

    /// Co-propagates d/d omega: tangent <- e^{Lt} tangent + (d_omega e^{Lt}) rho,
    /// then rho <- e^{Lt} rho.
    void apply_with_tangent(Matrix& rho, Matrix& tangent) const;

    int qubits() const noexcept { return n_qubits_; }
    double time() const noexcept { return t_; }

  private:
    int n_qubits_;
    double t_;
    std::vector<Complex> table_;
};

DensityMatrix dephasing_map_exact(const DensityMatrix& rho0, const LindbladParams& p, double t);

/// Analytic d/d omega of dephasing_map_exact(rho0, p, t).
Matrix dephasing_map_derivative(const DensityMatrix& rho0, const LindbladParams& p, double t);

/// Generator applied through dense operator products; used as the ODE oracle.
Matrix lindblad_rhs(const Matrix& rho, const LindbladParams& p);

struct OdeResult {
    DensityMatrix state;
    double max_trace_drift = 0.0;
    int renormalizations = 0;
};

/// Fixed-step RK4 integration of lindblad_rhs. The last step is shortened when
/// t is not a multiple of dt. Trace drift above 1e-12 is renormalized and
/// counted; it is a diagnostic, not an error.
OdeResult propagate_ode(const DensityMatrix& rho0, const LindbladParams& p, double t, double dt);

}  // namespace dephmon
