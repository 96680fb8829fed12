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
 * Fidelity, quantum Fisher information and Monte Carlo Fisher estimators for
 * frequency estimation with continuously monitored dephasing.
 */

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dephmon/batch.hpp"
#include "dephmon/dynamics.hpp"
#include "dephmon/trajectories.hpp"

namespace dephmon {

/// Eigenvalue pairs with lambda_i + lambda_k at or below this are skipped in qfi_sld.
inline constexpr double kSldEigenFloor = 1e-10;

struct Estimate {
    double value = 0.0;
    double standard_error = 0.0;
};

struct FisherEstimates {
    double time = 0.0;
    Estimate fi_traj;
    Estimate mean_conditional_qfi;
    Estimate effective_qfi;  ///< fi_traj + mean_conditional_qfi
    double unconditional_qfi = 0.0;
    double ultimate_qfi = 0.0;
    std::size_t trajectories_used = 0;
};

/// Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// 2 sum_{ik} |<i|drho|k>|^2 / (lambda_i + lambda_k) over the eigenbasis of rho.
double qfi_sld(const DensityMatrix& rho, const Matrix& drho);

/// 8 (1 - F[rho(omega - eps/2), rho(omega + eps/2)]) / eps^2. Test oracle.
double qfi_fd_oracle(const std::function<DensityMatrix(double)>& state_of, double omega, double eps);

/// QFI of the unconditional state e^{L t} rho0.
double unconditional_qfi(const DensityMatrix& rho0, const LindbladParams& p, double t);

/// QFI of the noiseless evolution e^{-i omega J_z t}; equals the ultimate QFI
/// because the collapse operators commute with the Hamiltonian. rho0 must be pure.
double ultimate_qfi(const DensityMatrix& rho0, const LindbladParams& p, double t);

/// Sample mean and its standard error (sample variance / M).
Estimate mean_with_error(std::span<const double> values);

/// a <= b up to 3 standard errors plus a relative floating-point slack of 1e-9.
bool leq_within(double a, double b, double standard_error);
/// |a - b| within 3 standard errors plus a relative floating-point slack of 1e-9.
bool equal_within(double a, double b, double standard_error);

/// FisherEstimates for one sample time of a finished batch; the ultimate QFI
/// is NaN for a mixed initial state.
FisherEstimates estimates_at(const DensityMatrix& rho0, const LindbladParams& p,
                             const BatchResult& batch, std::size_t sample);

/// Monte Carlo F[p_traj]: mean squared log-likelihood score over M trajectories.
Estimate fi_trajectories(const DensityMatrix& rho0, const LindbladParams& p,
                         const UnravellingSpec& u, double t, std::size_t trajectories,
                         std::uint64_t seed, const BatchOptions& opts = {});

FisherEstimates effective_qfi(const DensityMatrix& rho0, const LindbladParams& p,
                              const UnravellingSpec& u, double t, std::size_t trajectories,
                              std::uint64_t seed, const BatchOptions& opts = {});

/// effective_qfi at every sample time of one batch of trajectories.
std::vector<FisherEstimates> effective_qfi_series(const DensityMatrix& rho0,
                                                  const LindbladParams& p,
                                                  const UnravellingSpec& u, const TimeGrid& grid,
                                                  std::size_t trajectories, std::uint64_t seed,
                                                  const BatchOptions& opts = {});

}  // namespace dephmon
