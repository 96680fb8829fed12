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
 * Conditional dynamics under continuous monitoring of the N dephasing
 * channels, by step integration and by closed-form propagators.
 *
 * Photo-detection: each step applies the unconditional map with the unmonitored
 * coupling (1 - eta) kappa, then a spin flip sz_j . sz_j for every channel that
 * clicked; clicks are Bernoulli(eta kappa dt / 2) and independent of the state.
 *
 * Homodyne: the SME
 *
 *   d rho = L_{omega,kappa} rho dt
 *           + sqrt(eta kappa / 2) sum_j H[e^{i theta} sz_j] rho dw_j
 *
 * is split into the unconditional map at (1 - eta) kappa and a perfectly
 * efficient measurement of the remaining eta kappa, integrated with the
 * diagonal Kraus operator (a = sqrt(eta kappa / 2), S_m = sum_j s_j(m) dy_j)
 *
 *   M_m = 1 - (a^2/2) N dt + a e^{i theta} S_m + (a^2/2) e^{2 i theta} (S_m^2 - N dt),
 *
 * rho <- M rho M^dag / Tr(...). The last term is the second-order Ito
 * correction; with it M is e^{i a S} to O(dt) at theta = pi/2, which is the
 * closed-form propagator. Expanding to first order with dy_j dy_k = delta_jk dt
 * recovers the SME, and a = 0 recovers the unconditional step exactly.
 *
 * Current convention: dy_j = dw_j + 2 cos(theta) sqrt(eta kappa / 2) <sz_j> dt,
 * i.e. the mean of the Wiener innovation in the SME above. At theta = pi/2 the
 * stochastic term is i sqrt(eta kappa / 2) [sz_j, rho] dw_j and dy_j = dw_j.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <span>
#include <vector>

#include "dephmon/dynamics.hpp"
#include "dephmon/noise_record.hpp"
#include "dephmon/random.hpp"

namespace dephmon {

enum class Unravelling { PhotoDetection, Homodyne };

struct UnravellingSpec {
    Unravelling kind = Unravelling::PhotoDetection;
    double eta = 1.0;
    std::optional<double> theta;  ///< Homodyne only.

    static UnravellingSpec photo_detection(double eta) { return {Unravelling::PhotoDetection, eta, {}}; }
    static UnravellingSpec homodyne(double eta, double theta) { return {Unravelling::Homodyne, eta, theta}; }

    void validate() const;

    /// True when the record statistics cannot depend on the state: photo-detection,
    /// or homodyne at cos(theta) = 0.
    bool record_is_pure_noise() const;
};

/// cos/sin with values below 1e-15 in magnitude flushed to zero, so that
/// theta = pi/2 gives exactly (0, 1).
std::pair<double, double> snapped_cos_sin(double theta);

/// Sample times snapped to the step grid.
struct TimeGrid {
    double dt = 1e-3;
    std::vector<std::size_t> sample_steps;

    /// Snaps each time to the nearest multiple of dt; times must be >= 0 and
    /// strictly increasing after snapping.
    static TimeGrid snapped(double dt, std::span<const double> times);

    std::size_t total_steps() const { return sample_steps.empty() ? 0 : sample_steps.back(); }
    double time_at(std::size_t step) const { return static_cast<double>(step) * dt; }
};

struct PdStepResult {
    DensityMatrix state;
    std::vector<int> clicks;
};

struct HdStepResult {
    DensityMatrix state;
    std::vector<double> dw;
    std::vector<double> dy;
};

PdStepResult step_pd(const DensityMatrix& rho, const LindbladParams& p, double eta, double dt,
                     RandomStream& rng);

HdStepResult step_hd(const DensityMatrix& rho, const LindbladParams& p, double eta, double theta,
                     double dt, RandomStream& rng);

struct TrajectorySample {
    std::size_t step = 0;
    double time = 0.0;
    DensityMatrix state;
    /// d/d omega of the normalized conditional state at fixed measurement record.
    Matrix state_derivative;
    /// d/d omega log Tr(rho_unnormalized): the log-likelihood tangent of the record.
    double score = 0.0;
};

struct TrajectoryResult {
    LindbladParams params;
    UnravellingSpec unravelling;
    double dt = 0.0;
    std::uint64_t seed = 0;
    NoiseRecord noise;
    std::optional<HomodyneCurrent> current;
    std::vector<TrajectorySample> samples;
};

/// Integrates one trajectory; deterministic in (rho0, p, u, grid, seed).
TrajectoryResult simulate_trajectory(const DensityMatrix& rho0, const LindbladParams& p,
                                     const UnravellingSpec& u, const TimeGrid& grid,
                                     std::uint64_t seed);

/// Converts accumulated Poisson totals to integer counts.
std::vector<long> to_counts(std::span<const double> totals);

/// prod_j sz_j^{N_j} as a diagonal; only parities matter.
std::vector<Complex> spin_flip_diagonal(int n_qubits, std::span<const long> counts);

/// exp(i strength sum_j W_j sz_j) as a diagonal.
std::vector<Complex> phase_kick_diagonal(int n_qubits, double strength, std::span<const double> w);

struct StateWithDerivative {
    DensityMatrix state;
    Matrix derivative;
};

/// U [e^{L_{omega,(1-eta)kappa} t} rho0] U^dag with U = prod_j sz_j^{N_j(t)}.
DensityMatrix closed_form_pd(const DensityMatrix& rho0, const LindbladParams& p, double eta,
                             std::span<const long> counts, double t);

/// V [e^{L_{omega,(1-eta)kappa} t} rho0] V^dag with V = exp(i sqrt(eta kappa/2) sum_j W_j sz_j).
DensityMatrix closed_form_hd(const DensityMatrix& rho0, const LindbladParams& p, double eta,
                             std::span<const double> w, double t);

/// Closed forms with the analytic omega-derivative (the random unitaries are
/// omega-independent).
StateWithDerivative closed_form_pd_with_derivative(const DensityMatrix& rho0,
                                                   const LindbladParams& p, double eta,
                                                   std::span<const long> counts, double t);
StateWithDerivative closed_form_hd_with_derivative(const DensityMatrix& rho0,
                                                   const LindbladParams& p, double eta,
                                                   std::span<const double> w, double t);

/// Closed-form state of a recorded trajectory at `step`; requires
/// record_is_pure_noise() for homodyne.
StateWithDerivative closed_form_from_record(const DensityMatrix& rho0, const TrajectoryResult& r,
                                            std::size_t step);

/// log Tr of the unnormalized conditional state obtained by replaying the
/// recorded clicks / homodyne currents at frequency `omega`, up to an
/// omega-independent constant. Its omega-derivative is the record score.
double replay_log_likelihood(const DensityMatrix& rho0, const TrajectoryResult& record,
                             double omega);

}  // namespace dephmon
