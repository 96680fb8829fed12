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
 * Trajectory-parallel Monte Carlo batches.
 *
 * Trajectory i draws from the stream keyed by (master_seed, i) and writes its
 * summary into slot i; reductions then run over slots in index order, so the
 * result is bit-identical for any worker count. `run_batch_serial` is the
 * plain loop kept as the reference for tests and benchmarks.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "dephmon/trajectories.hpp"

namespace dephmon {

enum class StateSource {
    Auto,            ///< ClosedForm when the record is pure noise, else StepIntegrated.
    ClosedForm,      ///< Closed-form propagator fed with the recorded noise.
    StepIntegrated,  ///< The step-integrated conditional state.
};

enum class DerivativeMethod {
    Analytic,           ///< Co-propagated omega-tangent / analytic closed-form derivative.
    CentralDifference,  ///< Replay of the same noise at omega +- delta.
};

struct BatchOptions {
    double dt = 1e-3;
    int workers = 0;  ///< 0 = all available threads.
    StateSource source = StateSource::Auto;
    DerivativeMethod derivative = DerivativeMethod::Analytic;
    bool keep_states = false;
};

/// delta omega used by DerivativeMethod::CentralDifference.
double omega_difference_step(double omega);

struct TrajectorySummary {
    std::vector<double> score;            ///< per sample time
    std::vector<double> conditional_qfi;  ///< per sample time
    std::vector<Matrix> states;           ///< per sample time, if kept
};

struct BatchResult {
    TimeGrid grid;
    std::size_t trajectories = 0;
    /// Indexed [sample][trajectory].
    std::vector<std::vector<double>> score;
    std::vector<std::vector<double>> conditional_qfi;
    std::vector<std::vector<Matrix>> states;
};

StateSource resolve_source(const UnravellingSpec& u, StateSource requested);

TrajectorySummary summarize_trajectory(const DensityMatrix& rho0, const LindbladParams& p,
                                       const UnravellingSpec& u, const TimeGrid& grid,
                                       std::uint64_t master_seed, std::uint64_t index,
                                       const BatchOptions& opts);

BatchResult run_batch(const DensityMatrix& rho0, const LindbladParams& p, const UnravellingSpec& u,
                      const TimeGrid& grid, std::size_t trajectories, std::uint64_t master_seed,
                      const BatchOptions& opts);

BatchResult run_batch_serial(const DensityMatrix& rho0, const LindbladParams& p,
                             const UnravellingSpec& u, const TimeGrid& grid,
                             std::size_t trajectories, std::uint64_t master_seed,
                             const BatchOptions& opts);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);
Matrix pairwise_sum(std::span<const Matrix> values);

/// Trajectory average of the kept states at one sample.
Matrix mean_state(const BatchResult& batch, std::size_t sample);

int available_workers();

}  // namespace dephmon
