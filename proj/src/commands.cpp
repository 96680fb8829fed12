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

#include "dephmon/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>

#include "dephmon/metrology.hpp"

#ifndef DEPHMON_VERSION
#define DEPHMON_VERSION "0.0.0"
#endif

namespace dephmon {

std::string library_version() { return DEPHMON_VERSION; }

std::vector<ColumnDoc> unconditional_columns() {
    return {
        {"time", "sample time, snapped to a multiple of dt"},
        {"unconditional_qfi", "QFI of the unmonitored dephased state"},
        {"ultimate_qfi", "QFI of the noiseless unitary evolution (ultimate bound)"},
    };
}

std::vector<ColumnDoc> monitor_columns() {
    return {
        {"time", "sample time, snapped to a multiple of dt"},
        {"trajectories", "number of Monte Carlo trajectories"},
        {"fi_traj", "Fisher information of the measurement record (mean squared score)"},
        {"fi_traj_se", "standard error of fi_traj"},
        {"mean_conditional_qfi", "trajectory average of the conditional-state QFI"},
        {"mean_conditional_qfi_se", "standard error of mean_conditional_qfi"},
        {"effective_qfi", "fi_traj + mean_conditional_qfi"},
        {"effective_qfi_se", "standard error of effective_qfi"},
        {"unconditional_qfi", "QFI of the unmonitored state (lower end of the chain)"},
        {"rescaled_unconditional_qfi", "unconditional QFI at coupling (1 - eta) kappa"},
        {"ultimate_qfi", "noiseless QFI (upper end of the chain)"},
        {"chain_lower_ok", "1 if unconditional_qfi <= effective_qfi within 3 standard errors"},
        {"chain_upper_ok", "1 if effective_qfi <= ultimate_qfi within 3 standard errors"},
    };
}

namespace {

std::vector<std::string> names(const std::vector<ColumnDoc>& docs) {
    std::vector<std::string> out;
    for (const auto& d : docs) out.push_back(d.name);
    return out;
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

RunReport cmd_unconditional(const SimConfig& config, std::ostream& warn) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    const DensityMatrix rho0 = load_initial_state(config, warn);
    const LindbladParams p = config.params();
    const TimeGrid grid = TimeGrid::snapped(config.dt, config.effective_sample_times());

    RunReport report{"unconditional", config, names(unconditional_columns()), {}, 0.0,
                     library_version(), {}};
    for (std::size_t step : grid.sample_steps) {
        const double t = grid.time_at(step);
        report.rows.push_back({t, unconditional_qfi(rho0, p, t), ultimate_qfi(rho0, p, t)});
    }
    report.wall_seconds = elapsed_since(start);
    return report;
}

RunReport cmd_monitor(const SimConfig& config, int workers, std::ostream& warn) {
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    if (config.trajectories < 2) {
        // Standard errors need two samples; a single trajectory still runs.
        warn << "warning: trajectories < 2; standard errors are reported as 0\n";
    }
    const DensityMatrix rho0 = load_initial_state(config, warn);
    const LindbladParams p = config.params();
    const UnravellingSpec u = config.unravelling_spec();
    const TimeGrid grid = TimeGrid::snapped(config.dt, config.effective_sample_times());

    BatchOptions opts;
    opts.dt = config.dt;
    opts.workers = workers;
    const BatchResult batch = run_batch(rho0, p, u, grid, config.trajectories, config.seed, opts);
    const LindbladParams rescaled = p.with_kappa((1.0 - u.eta) * p.kappa);

    RunReport report{"monitor", config, names(monitor_columns()), {}, 0.0, library_version(), {}};
    for (std::size_t k = 0; k < grid.sample_steps.size(); ++k) {
        const double t = grid.time_at(grid.sample_steps[k]);
        const FisherEstimates fe = estimates_at(rho0, p, batch, k);
        const Estimate& fi = fe.fi_traj;
        const Estimate& cq = fe.mean_conditional_qfi;
        const Estimate& eff = fe.effective_qfi;
        const double unc = fe.unconditional_qfi;
        const double ult = fe.ultimate_qfi;
        const bool lower = leq_within(unc, eff.value, eff.standard_error);
        const bool upper = leq_within(eff.value, ult, eff.standard_error);
        if (!lower || !upper) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "t=%.6g: unconditional %.6g <= effective %.6g +- %.3g <= ultimate %.6g violated",
                          t, unc, eff.value, eff.standard_error, ult);
            report.invariant_violations.emplace_back(buf);
        }
        report.rows.push_back({t, static_cast<double>(config.trajectories), fi.value,
                               fi.standard_error, cq.value, cq.standard_error, eff.value,
                               eff.standard_error, unc, unconditional_qfi(rho0, rescaled, t), ult,
                               lower ? 1.0 : 0.0, upper ? 1.0 : 0.0});
    }
    report.wall_seconds = elapsed_since(start);
    return report;
}

void write_csv(const RunReport& report, std::ostream& out) {
    out << "# dephmon " << report.version << ' ' << report.command << '\n';
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        out << report.columns[c] << (c + 1 < report.columns.size() ? ',' : '\n');
    }
    char buf[40];
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", row[c]);
            out << buf << (c + 1 < row.size() ? ',' : '\n');
        }
    }
}

void describe_columns(const std::vector<ColumnDoc>& columns, std::ostream& out) {
    for (const auto& c : columns) {
        out << c.name << '\t' << c.description << '\n';
    }
}

}  // namespace dephmon
