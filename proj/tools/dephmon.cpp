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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dephmon/batch.hpp"
#include "dephmon/commands.hpp"
#include "dephmon/config.hpp"
#include "dephmon/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kInvariantViolation = 2, kVerifyFailure = 3 };

struct Overrides {
    std::string config_path;
    std::optional<int> N;
    std::optional<double> omega, kappa, eta, theta, dt, t_max;
    std::optional<std::string> unravelling, initial_state, sample_times;
    std::optional<std::uint64_t> trajectories, seed;
};

void add_sim_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--N", o.N, "number of qubits");
    cmd->add_option("--omega", o.omega, "frequency");
    cmd->add_option("--kappa", o.kappa, "dephasing rate");
    cmd->add_option("--eta", o.eta, "detection efficiency in [0, 1]");
    cmd->add_option("--unravelling", o.unravelling, "pd or hd");
    cmd->add_option("--theta", o.theta, "homodyne angle (hd only, default pi/2)");
    cmd->add_option("--initial-state", o.initial_state, "ghz, plus_product or amplitude file");
    cmd->add_option("--t-max", o.t_max, "final time");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--sample-times", o.sample_times, "comma-separated times in [0, t_max]");
    cmd->add_option("--trajectories", o.trajectories, "Monte Carlo trajectories");
    cmd->add_option("--seed", o.seed, "master seed");
}

std::vector<double> parse_times(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw dephmon::ConfigError("field 'sample_times': cannot parse '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

dephmon::SimConfig build_config(const Overrides& o) {
    using dephmon::SimConfig;
    SimConfig c = o.config_path.empty() ? SimConfig{} : SimConfig::load(o.config_path);
    if (o.N) c.N = *o.N;
    if (o.omega) c.omega = *o.omega;
    if (o.kappa) c.kappa = *o.kappa;
    if (o.eta) c.eta = *o.eta;
    if (o.unravelling) {
        if (*o.unravelling == "pd") {
            c.unravelling = dephmon::Unravelling::PhotoDetection;
            // A file-level homodyne angle does not survive a switch to photo-detection.
            c.theta.reset();
        } else if (*o.unravelling == "hd") {
            c.unravelling = dephmon::Unravelling::Homodyne;
        } else {
            throw dephmon::ConfigError("field 'unravelling': expected 'pd' or 'hd', got '" +
                                       *o.unravelling + "'");
        }
    }
    if (o.theta) c.theta = *o.theta;
    if (o.initial_state) c.initial_state = *o.initial_state;
    if (o.t_max) c.t_max = *o.t_max;
    if (o.dt) c.dt = *o.dt;
    if (o.sample_times) c.sample_times = parse_times(*o.sample_times);
    if (o.trajectories) c.trajectories = *o.trajectories;
    if (o.seed) c.seed = *o.seed;
    c.fill_defaults();
    c.validate();
    c.sample_times = c.effective_sample_times();
    return c;
}

void emit(const dephmon::RunReport& report, const std::string& out_path) {
    if (out_path.empty()) {
        dephmon::write_csv(report, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        dephmon::write_csv(report, out);
        std::ofstream echo(out_path + ".config.json");
        echo << report.config.to_json().dump(2) << '\n';
    }
    std::fprintf(stderr, "%s: %zu rows in %.2f s\n", report.command.c_str(), report.rows.size(),
                 report.wall_seconds);
}

void export_record(const dephmon::SimConfig& c, const std::string& path) {
    const auto rho0 = dephmon::load_initial_state(c, std::cerr);
    const auto grid = dephmon::TimeGrid::snapped(c.dt, c.effective_sample_times());
    const auto r = dephmon::simulate_trajectory(rho0, c.params(), c.unravelling_spec(), grid,
                                                dephmon::trajectory_seed(c.seed, 0));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    r.noise.write(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency estimation under continuously monitored dephasing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", dephmon::library_version());

    Overrides unc_o, mon_o;
    std::string unc_out, mon_out, record_out;
    bool unc_describe = false, mon_describe = false;
    int workers = 0;

    auto* unc = app.add_subcommand("unconditional", "QFI of the unmonitored and noiseless states");
    add_sim_flags(unc, unc_o);
    unc->add_option("--out", unc_out, "CSV output path (default stdout)");
    unc->add_flag("--describe-columns", unc_describe, "document the output columns and exit");

    auto* mon = app.add_subcommand("monitor", "Monte Carlo Fisher estimates under monitoring");
    add_sim_flags(mon, mon_o);
    mon->add_option("--out", mon_out, "CSV output path (default stdout)");
    mon->add_option("--workers", workers, "maximum worker threads (0 = all available)")
        ->check(CLI::NonNegativeNumber);
    mon->add_option("--record-out", record_out, "also write the noise record of trajectory 0");
    mon->add_flag("--describe-columns", mon_describe, "document the output columns and exit");

    dephmon::VerifyOptions vo;
    bool full = false;
    std::vector<int> only;
    auto* ver = app.add_subcommand("verify", "run the acceptance checks (reduced scale by default)");
    ver->add_flag("--full", full, "run at full acceptance scale");
    ver->add_flag("--inject-wrong-rescaling", vo.inject_wrong_rescaling,
                  "closed form uses kappa instead of (1 - eta) kappa");
    ver->add_option("--dt-scale", vo.dt_scale, "multiply the equivalence-check time step")
        ->check(CLI::PositiveNumber);
    ver->add_option("--seed", vo.seed, "master seed");
    ver->add_option("--workers", vo.workers, "maximum worker threads (0 = all available)");
    ver->add_option("--only", only, "criterion ids to run")->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        if (*unc) {
            if (unc_describe) {
                dephmon::describe_columns(dephmon::unconditional_columns(), std::cout);
                return kOk;
            }
            const auto report = dephmon::cmd_unconditional(build_config(unc_o), std::cerr);
            emit(report, unc_out);
            return kOk;
        }
        if (*mon) {
            if (mon_describe) {
                dephmon::describe_columns(dephmon::monitor_columns(), std::cout);
                return kOk;
            }
            const auto config = build_config(mon_o);
            std::fprintf(stderr, "monitor: %llu trajectories on up to %d workers\n",
                         static_cast<unsigned long long>(config.trajectories),
                         workers > 0 ? workers : dephmon::available_workers());
            const auto report = dephmon::cmd_monitor(config, workers, std::cerr);
            emit(report, mon_out);
            if (!record_out.empty()) export_record(config, record_out);
            for (const auto& v : report.invariant_violations) {
                std::fprintf(stderr, "invariant violation: %s\n", v.c_str());
            }
            return report.invariant_violations.empty() ? kOk : kInvariantViolation;
        }
        vo.reduced = !full;
        bool all_passed = true;
        for (const auto& r : dephmon::run_acceptance(vo, only)) {
            std::cout << dephmon::format_check(r) << std::endl;
            all_passed = all_passed && r.passed;
        }
        return all_passed ? kOk : kVerifyFailure;
    } catch (const dephmon::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInvariantViolation;
    }
}
