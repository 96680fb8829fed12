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

#include "dephmon/batch.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#include <omp.h>

#include "dephmon/metrology.hpp"

namespace dephmon {

double omega_difference_step(double omega) { return 1e-5 * std::max(1.0, std::abs(omega)); }

int available_workers() { return omp_get_max_threads(); }

StateSource resolve_source(const UnravellingSpec& u, StateSource requested) {
    const bool closed_form_ok = u.record_is_pure_noise();
    switch (requested) {
        case StateSource::Auto:
            return closed_form_ok ? StateSource::ClosedForm : StateSource::StepIntegrated;
        case StateSource::ClosedForm:
            if (!closed_form_ok) {
                throw std::invalid_argument(
                    "closed-form conditional states need photo-detection or homodyne at "
                    "theta = pi/2");
            }
            return requested;
        case StateSource::StepIntegrated:
            return requested;
    }
    return requested;
}

namespace {

struct SampledState {
    DensityMatrix state;
    Matrix derivative;
};

std::vector<SampledState> sampled_states(const DensityMatrix& rho0, const TrajectoryResult& traj,
                                         StateSource source) {
    std::vector<SampledState> out;
    out.reserve(traj.samples.size());
    for (const auto& s : traj.samples) {
        if (source == StateSource::ClosedForm) {
            auto cf = closed_form_from_record(rho0, traj, s.step);
            out.push_back({std::move(cf.state), std::move(cf.derivative)});
        } else {
            out.push_back({s.state, s.state_derivative});
        }
    }
    return out;
}

}  // namespace

TrajectorySummary summarize_trajectory(const DensityMatrix& rho0, const LindbladParams& p,
                                       const UnravellingSpec& u, const TimeGrid& grid,
                                       std::uint64_t master_seed, std::uint64_t index,
                                       const BatchOptions& opts) {
    const StateSource source = resolve_source(u, opts.source);
    const std::uint64_t seed = trajectory_seed(master_seed, index);
    const TrajectoryResult traj = simulate_trajectory(rho0, p, u, grid, seed);
    auto states = sampled_states(rho0, traj, source);

    if (opts.derivative == DerivativeMethod::CentralDifference) {
        if (!u.record_is_pure_noise()) {
            throw std::invalid_argument(
                "finite differences over omega need an omega-independent record; use the "
                "analytic tangent for homodyne at theta != pi/2");
        }
        // Same seed => same noise record, since the record does not depend on omega.
        const double delta = omega_difference_step(p.omega);
        const auto plus_traj = simulate_trajectory(rho0, p.with_omega(p.omega + delta), u, grid, seed);
        const auto minus_traj = simulate_trajectory(rho0, p.with_omega(p.omega - delta), u, grid, seed);
        const auto plus = sampled_states(rho0, plus_traj, source);
        const auto minus = sampled_states(rho0, minus_traj, source);
        for (std::size_t k = 0; k < states.size(); ++k) {
            states[k].derivative =
                (plus[k].state.matrix() - minus[k].state.matrix()) / (2.0 * delta);
        }
    }

    TrajectorySummary summary;
    summary.score.reserve(states.size());
    summary.conditional_qfi.reserve(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        summary.score.push_back(traj.samples[k].score);
        summary.conditional_qfi.push_back(qfi_sld(states[k].state, states[k].derivative));
        if (opts.keep_states) {
            summary.states.push_back(states[k].state.matrix());
        }
    }
    return summary;
}

namespace {

BatchResult gather(const TimeGrid& grid, std::vector<TrajectorySummary>& slots, bool keep_states) {
    BatchResult out;
    out.grid = grid;
    out.trajectories = slots.size();
    const std::size_t n_samples = grid.sample_steps.size();
    out.score.assign(n_samples, std::vector<double>(slots.size()));
    out.conditional_qfi.assign(n_samples, std::vector<double>(slots.size()));
    if (keep_states) {
        out.states.assign(n_samples, std::vector<Matrix>(slots.size()));
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
        for (std::size_t k = 0; k < n_samples; ++k) {
            out.score[k][i] = slots[i].score[k];
            out.conditional_qfi[k][i] = slots[i].conditional_qfi[k];
            if (keep_states) {
                out.states[k][i] = std::move(slots[i].states[k]);
            }
        }
    }
    return out;
}

void check_batch_args(std::size_t trajectories, const TimeGrid& grid, const BatchOptions& opts) {
    if (trajectories == 0) {
        throw std::invalid_argument("batch needs at least one trajectory");
    }
    if (grid.sample_steps.empty()) {
        throw std::invalid_argument("batch needs at least one sample time");
    }
    if (grid.dt != opts.dt) {
        throw std::invalid_argument("grid step differs from batch option dt");
    }
}

}  // namespace

BatchResult run_batch(const DensityMatrix& rho0, const LindbladParams& p, const UnravellingSpec& u,
                      const TimeGrid& grid, std::size_t trajectories, std::uint64_t master_seed,
                      const BatchOptions& opts) {
    check_batch_args(trajectories, grid, opts);
    resolve_source(u, opts.source);
    std::vector<TrajectorySummary> slots(trajectories);
    std::exception_ptr failure;
    const int workers = opts.workers > 0 ? opts.workers : available_workers();
    const auto count = static_cast<long long>(trajectories);

#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
    for (long long i = 0; i < count; ++i) {
        try {
            slots[i] = summarize_trajectory(rho0, p, u, grid, master_seed,
                                            static_cast<std::uint64_t>(i), opts);
        } catch (...) {
#pragma omp critical(dephmon_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return gather(grid, slots, opts.keep_states);
}

BatchResult run_batch_serial(const DensityMatrix& rho0, const LindbladParams& p,
                             const UnravellingSpec& u, const TimeGrid& grid,
                             std::size_t trajectories, std::uint64_t master_seed,
                             const BatchOptions& opts) {
    check_batch_args(trajectories, grid, opts);
    std::vector<TrajectorySummary> slots;
    slots.reserve(trajectories);
    for (std::size_t i = 0; i < trajectories; ++i) {
        slots.push_back(summarize_trajectory(rho0, p, u, grid, master_seed, i, opts));
    }
    return gather(grid, slots, opts.keep_states);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Matrix pairwise_sum(std::span<const Matrix> values) {
    if (values.empty()) {
        throw std::invalid_argument("pairwise_sum of no matrices");
    }
    if (values.size() == 1) {
        return values.front();
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Matrix mean_state(const BatchResult& batch, std::size_t sample) {
    if (batch.states.empty()) {
        throw std::invalid_argument("batch was run without keep_states");
    }
    return pairwise_sum(std::span<const Matrix>(batch.states.at(sample))) /
           static_cast<double>(batch.trajectories);
}

}  // namespace dephmon
