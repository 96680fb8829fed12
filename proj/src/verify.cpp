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

#include "dephmon/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "dephmon/batch.hpp"
#include "dephmon/metrology.hpp"

namespace dephmon {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

DensityMatrix random_pure_state(int n_qubits, RandomStream& rng) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        v[i] = Complex(rng.normal(1.0), rng.normal(1.0));
    }
    v.normalize();
    return pure_state(v);
}

DensityMatrix random_mixed_state(int n_qubits, RandomStream& rng) {
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_qubits));
    Matrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            a(i, k) = Complex(rng.normal(1.0), rng.normal(1.0));
        }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(rho);
}

double relative_error(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

using Check = std::function<CheckResult(const VerifyOptions&)>;

// 1. Step integration vs closed form from the same record.
CheckResult check_equivalence(const VerifyOptions& o) {
    CheckResult r{1, "closed-form equivalence (PD, HD theta=pi/2)", true, "", 0.0};
    const auto start = std::chrono::steady_clock::now();
    const int seeds = o.reduced ? 12 : 50;
    const double dt = 1e-4 * o.dt_scale;
    double worst = 0.0;
    std::string worst_case;
    for (Unravelling kind : {Unravelling::PhotoDetection, Unravelling::Homodyne}) {
        for (int n = 1; n <= 3; ++n) {
            for (double eta : {0.3, 1.0}) {
                const auto st = closed_form_equivalence(n, eta, kind, dt, 1.0, seeds, o.seed,
                                                        o.inject_wrong_rescaling);
                if (st.max_distance > worst) {
                    worst = st.max_distance;
                    worst_case = fmt("%s N=%d eta=%.1f",
                                     kind == Unravelling::Homodyne ? "HD" : "PD", n, eta);
                }
            }
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = worst <= 5e-3 && elapsed < 120.0;
    r.detail = fmt("max trace distance %.3e (%s) <= 5e-3 over %d seeds x 12 configs, dt=%.1e, "
                   "%.1f s < 120 s",
                   worst, worst_case.c_str(), seeds, dt, elapsed);
    return r;
}

// 2. Conditional QFI equals unconditional QFI at (1 - eta) kappa.
CheckResult check_noise_rescaling(const VerifyOptions& o) {
    CheckResult r{2, "noise rescaling at eta=0.6", true, "", 0.0};
    const double eta = 0.6;
    const int records = o.reduced ? 10 : 40;
    double worst = 0.0;
    double worst_formula = 0.0;
    double worst_oracle = 0.0;
    RandomStream rng(o.seed + 2);
    for (int n = 1; n <= 3; ++n) {
        const LindbladParams p{n, 1.0, 1.0};
        const LindbladParams rescaled = p.with_kappa((1.0 - eta) * p.kappa);
        for (bool ghz : {true, false}) {
            const DensityMatrix rho0 = ghz ? ghz_state(n) : product_plus_state(n);
            for (double t : {0.5, 1.0}) {
                const double reference = unconditional_qfi(rho0, rescaled, t);
                if (ghz) {
                    const double formula =
                        n * n * t * t * std::exp(-2.0 * n * (1.0 - eta) * p.kappa * t);
                    const double oracle = qfi_fd_oracle(
                        [&](double w) {
                            return dephasing_map_exact(rho0, rescaled.with_omega(w), t);
                        },
                        p.omega, 1e-4);
                    worst_formula = std::max(worst_formula, relative_error(reference, formula));
                    worst_oracle = std::max(worst_oracle, relative_error(oracle, formula));
                }
                for (int k = 0; k < records; ++k) {
                    std::vector<long> counts(n);
                    std::vector<double> w(n);
                    for (int j = 0; j < n; ++j) {
                        counts[j] = static_cast<long>(std::floor(std::abs(rng.normal(2.0))));
                        w[j] = rng.normal(std::sqrt(t));
                    }
                    const auto pd = closed_form_pd_with_derivative(rho0, p, eta, counts, t);
                    const auto hd = closed_form_hd_with_derivative(rho0, p, eta, w, t);
                    worst = std::max(worst, relative_error(qfi_sld(pd.state, pd.derivative), reference));
                    worst = std::max(worst, relative_error(qfi_sld(hd.state, hd.derivative), reference));
                }
            }
        }
    }
    r.passed = worst <= 1e-3 && worst_formula <= 1e-3 && worst_oracle <= 1e-3;
    r.detail = fmt("conditional vs rescaled QFI rel err %.2e; GHZ formula %.2e; fidelity oracle "
                   "%.2e (all <= 1e-3)",
                   worst, worst_formula, worst_oracle);
    return r;
}

// 3. eta = 1: conditional QFI equals the noiseless value.
CheckResult check_saturation(const VerifyOptions& o) {
    CheckResult r{3, "ultimate-bound saturation at eta=1", true, "", 0.0};
    const std::size_t trajectories = o.reduced ? 50 : 200;
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
        const LindbladParams p{n, 1.0, 1.0};
        for (bool ghz : {true, false}) {
            const DensityMatrix rho0 = ghz ? ghz_state(n) : product_plus_state(n);
            for (auto u : {UnravellingSpec::photo_detection(1.0), UnravellingSpec::homodyne(1.0, kPi / 2)}) {
                const double times[] = {0.5, 1.0};
                BatchOptions opts;
                opts.dt = 1e-3;
                opts.workers = o.workers;
                opts.source = StateSource::ClosedForm;
                const auto grid = TimeGrid::snapped(opts.dt, times);
                const auto batch = run_batch(rho0, p, u, grid, trajectories, o.seed + n, opts);
                for (std::size_t k = 0; k < grid.sample_steps.size(); ++k) {
                    const double t = grid.time_at(grid.sample_steps[k]);
                    const double noiseless = ghz ? n * n * t * t : n * t * t;
                    for (double q : batch.conditional_qfi[k]) {
                        worst = std::max(worst, relative_error(q, noiseless));
                    }
                }
            }
        }
    }
    r.passed = worst <= 1e-3;
    r.detail = fmt("max relative deviation from N^2 t^2 (GHZ) / N t^2 (product) %.2e <= 1e-3 over "
                   "%zu trajectories per config",
                   worst, trajectories);
    return r;
}

// 4. Record Fisher information.
CheckResult check_record_information(const VerifyOptions& o) {
    CheckResult r{4, "trajectory Fisher information", true, "", 0.0};
    const std::size_t trajectories = o.reduced ? 500 : 2000;
    const LindbladParams p{2, 1.0, 1.0};
    const DensityMatrix rho0 = ghz_state(2);
    BatchOptions opts;
    opts.dt = 1e-3;
    opts.workers = o.workers;
    std::ostringstream detail;
    struct Case {
        const char* label;
        UnravellingSpec u;
        bool expect_zero;
    };
    const Case cases[] = {
        {"PD eta=0.5", UnravellingSpec::photo_detection(0.5), true},
        {"PD eta=1", UnravellingSpec::photo_detection(1.0), true},
        {"HD theta=pi/2 eta=1", UnravellingSpec::homodyne(1.0, kPi / 2), true},
        {"HD theta=pi/2 eta=0.5", UnravellingSpec::homodyne(0.5, kPi / 2), true},
        {"HD theta=0 eta=1", UnravellingSpec::homodyne(1.0, 0.0), false},
    };
    for (const auto& c : cases) {
        const FisherEstimates fe = effective_qfi(rho0, p, c.u, 1.0, trajectories, o.seed + 4, opts);
        const Estimate& fi = fe.fi_traj;
        const bool ok = c.expect_zero ? std::abs(fi.value) <= 3.0 * fi.standard_error
                                      : fi.value > 3.0 * fi.standard_error;
        r.passed = r.passed && ok;
        detail << c.label << ": " << fmt("%.3e +- %.3e", fi.value, fi.standard_error)
               << (c.expect_zero ? " (want |F| <= 3se)" : " (want F > 3se)") << (ok ? "" : " FAIL");
        if (!c.expect_zero) {
            detail << fmt(" [effective QFI %.4f +- %.4f vs ultimate %.4f]", fe.effective_qfi.value,
                          fe.effective_qfi.standard_error, fe.ultimate_qfi);
        }
        detail << "; ";
    }
    detail << "M=" << trajectories;
    r.detail = detail.str();
    return r;
}

// 5. Trajectory averages reproduce the unconditional state.
CheckResult check_unravelling_consistency(const VerifyOptions& o) {
    CheckResult r{5, "unravelling consistency", true, "", 0.0};
    const std::size_t chunk = o.reduced ? 500 : 2000;
    constexpr std::size_t kChunks = 4;
    const LindbladParams p{2, 1.0, 1.0};
    const DensityMatrix rho0 = ghz_state(2);
    const Matrix target = dephasing_map_exact(rho0, p, 1.0).matrix();
    std::ostringstream detail;
    struct Case {
        const char* label;
        UnravellingSpec u;
    };
    for (const auto& c : {Case{"PD eta=0.7", UnravellingSpec::photo_detection(0.7)},
                          Case{"HD theta=0 eta=0.5", UnravellingSpec::homodyne(0.5, 0.0)}}) {
        BatchOptions opts;
        opts.dt = 1e-3;
        opts.workers = o.workers;
        opts.keep_states = true;
        opts.source = StateSource::StepIntegrated;
        const double times[] = {1.0};
        const auto grid = TimeGrid::snapped(opts.dt, times);
        const auto batch = run_batch(rho0, p, c.u, grid, chunk * kChunks, o.seed + 5, opts);
        const auto& states = batch.states[0];
        double chunk_mean = 0.0;
        double chunk_max = 0.0;
        for (std::size_t k = 0; k < kChunks; ++k) {
            const Matrix avg =
                pairwise_sum(std::span<const Matrix>(states).subspan(k * chunk, chunk)) /
                static_cast<double>(chunk);
            const double d = trace_distance(avg, target);
            chunk_mean += d / kChunks;
            chunk_max = std::max(chunk_max, d);
        }
        const double pooled = trace_distance(mean_state(batch, 0), target);
        const bool ok = chunk_max <= 0.05 && pooled < chunk_mean;
        r.passed = r.passed && ok;
        detail << c.label
               << fmt(": M=%zu max %.3e (mean %.3e) <= 0.05, M=%zu %.3e decreasing%s; ", chunk,
                      chunk_max, chunk_mean, chunk * kChunks, pooled, ok ? "" : " FAIL");
    }
    r.detail = detail.str();
    return r;
}

// 6. unconditional <= effective <= ultimate.
CheckResult check_inequality_chain(const VerifyOptions& o) {
    CheckResult r{6, "QFI inequality chain", true, "", 0.0};
    const std::size_t trajectories = o.reduced ? 200 : 500;
    const LindbladParams p{2, 1.0, 1.0};
    const DensityMatrix rho0 = ghz_state(2);
    BatchOptions opts;
    opts.dt = 1e-3;
    opts.workers = o.workers;
    std::vector<std::pair<std::string, UnravellingSpec>> grid;
    for (double eta : {0.0, 0.3, 0.7, 1.0}) {
        grid.emplace_back(fmt("PD eta=%.1f", eta), UnravellingSpec::photo_detection(eta));
    }
    for (double theta : {0.0, kPi / 4, kPi / 2}) {
        for (double eta : {0.3, 1.0}) {
            grid.emplace_back(fmt("HD theta=%.3f eta=%.1f", theta, eta),
                              UnravellingSpec::homodyne(eta, theta));
        }
    }
    int violations = 0;
    std::ostringstream bad;
    for (const auto& [label, u] : grid) {
        const auto fe = effective_qfi(rho0, p, u, 1.0, trajectories, o.seed + 6, opts);
        const bool ok = leq_within(fe.unconditional_qfi, fe.effective_qfi.value,
                                   fe.effective_qfi.standard_error) &&
                        leq_within(fe.effective_qfi.value, fe.ultimate_qfi,
                                   fe.effective_qfi.standard_error);
        if (!ok) {
            ++violations;
            bad << label << fmt(" (%.4g <= %.4g +- %.2g <= %.4g) ", fe.unconditional_qfi,
                                fe.effective_qfi.value, fe.effective_qfi.standard_error,
                                fe.ultimate_qfi);
        }
    }
    r.passed = violations == 0;
    r.detail = fmt("%d of %zu configurations violate the chain (M=%zu, t=1) %s", violations,
                   grid.size(), trajectories, bad.str().c_str());
    return r;
}

// 7. Exact map vs RK4, semigroup property.
CheckResult check_dynamics_oracle(const VerifyOptions& o) {
    CheckResult r{7, "dynamics oracle (RK4) and semigroup", true, "", 0.0};
    RandomStream rng(o.seed + 7);
    double worst_ode = 0.0;
    double worst_semi = 0.0;
    int cases = 0;
    const double rates[] = {0.0, 0.5, 1.0, 2.0};
    const double times[] = {0.5, 1.0, 2.0};
    for (int n = 1; n <= 3; ++n) {
        for (double kappa : rates) {
            for (double omega : rates) {
                const double t = times[cases % 3];
                if (o.reduced && n == 3 && cases % 2 == 1) {
                    ++cases;
                    continue;
                }
                ++cases;
                const LindbladParams p{n, omega, kappa};
                const DensityMatrix rho0 = random_mixed_state(n, rng);
                const auto ode = propagate_ode(rho0, p, t, 1e-4);
                const auto exact = dephasing_map_exact(rho0, p, t);
                worst_ode = std::max(worst_ode, trace_distance(ode.state.matrix(), exact.matrix()));
                const auto twice = dephasing_map_exact(dephasing_map_exact(rho0, p, 0.3 * t), p, 0.7 * t);
                worst_semi = std::max(worst_semi, max_abs_difference(twice.matrix(), exact.matrix()));
            }
        }
    }
    r.passed = worst_ode <= 1e-6 && worst_semi <= 1e-12;
    r.detail = fmt("max trace distance exact vs RK4(dt=1e-4) %.2e <= 1e-6; semigroup %.2e <= 1e-12 "
                   "(%d cases, N<=3)",
                   worst_ode, worst_semi, cases);
    return r;
}

// 8. Click and Wiener increment statistics.
CheckResult check_noise_statistics(const VerifyOptions& o) {
    CheckResult r{8, "noise statistics", true, "", 0.0};
    const double dt = 1e-3;
    const std::size_t steps = 100000;
    const double horizon[] = {static_cast<double>(steps) * dt};
    const auto grid = TimeGrid::snapped(dt, horizon);
    std::ostringstream detail;

    const LindbladParams p{2, 1.0, 2.0};
    const auto pd = simulate_trajectory(ghz_state(2), p, UnravellingSpec::photo_detection(1.0), grid,
                                        trajectory_seed(o.seed, 8));
    const double prob = 0.5 * 1.0 * p.kappa * dt;
    const double n = static_cast<double>(pd.noise.steps());
    const auto counts = pd.noise.final_cumulative();
    for (int j = 0; j < p.n_qubits; ++j) {
        const double rate = counts[j] / n;
        const double se = std::sqrt(prob * (1.0 - prob) / n);
        const bool ok = std::abs(rate - prob) <= 3.0 * se;
        r.passed = r.passed && ok;
        detail << fmt("PD ch%d rate %.5e vs %.1e (3se %.1e)%s; ", j + 1, rate, prob, 3 * se,
                      ok ? "" : " FAIL");
    }

    const auto hd = simulate_trajectory(ghz_state(2), p, UnravellingSpec::homodyne(1.0, 0.0), grid,
                                        trajectory_seed(o.seed, 9));
    for (int j = 0; j < p.n_qubits; ++j) {
        std::vector<double> inc(hd.noise.steps());
        for (std::size_t s = 0; s < inc.size(); ++s) inc[s] = hd.noise.step(s)[j];
        const double m = pairwise_sum(inc) / n;
        for (auto& v : inc) v = (v - m) * (v - m);
        const double var = pairwise_sum(inc) / (n - 1.0);
        const bool ok = std::abs(m) <= 3.0 * std::sqrt(dt) / std::sqrt(n) &&
                        std::abs(var / dt - 1.0) <= 0.05;
        r.passed = r.passed && ok;
        detail << fmt("HD ch%d mean %.2e (bound %.1e) var/dt %.4f%s; ", j + 1, m,
                      3.0 * std::sqrt(dt / n), var / dt, ok ? "" : " FAIL");
    }
    detail << steps << " steps";
    r.detail = detail.str();
    return r;
}

// 9. GHZ states only see total parity / total Wiener displacement.
CheckResult check_ghz_reduction(const VerifyOptions& o) {
    CheckResult r{9, "GHZ total-record reduction", true, "", 0.0};
    RandomStream rng(o.seed + 9);
    double worst_pd = 0.0;
    double worst_hd = 0.0;
    const double eta = 0.6;
    const double t = 0.7;
    for (int n = 2; n <= 4; ++n) {
        const LindbladParams p{n, 1.0, 1.0};
        const DensityMatrix rho0 = ghz_state(n);
        const std::vector<long> zero(n, 0);
        std::vector<long> one(n, 0);
        one[0] = 1;
        const Matrix even_ref = closed_form_pd(rho0, p, eta, zero, t).matrix();
        const Matrix odd_ref = closed_form_pd(rho0, p, eta, one, t).matrix();
        std::vector<long> counts(n, 0);
        const long base = 4;
        long total = 1;
        for (int j = 0; j < n; ++j) total *= base;
        for (long code = 0; code < total; ++code) {
            long c = code;
            long sum = 0;
            for (int j = 0; j < n; ++j) {
                counts[j] = c % base;
                c /= base;
                sum += counts[j];
            }
            const Matrix s = closed_form_pd(rho0, p, eta, counts, t).matrix();
            worst_pd = std::max(worst_pd, max_abs_difference(s, sum % 2 == 0 ? even_ref : odd_ref));
        }
        for (int k = 0; k < (o.reduced ? 50 : 200); ++k) {
            std::vector<double> w(n), w2(n);
            double shift_sum = 0.0;
            for (int j = 0; j < n; ++j) {
                w[j] = rng.normal(std::sqrt(t));
                const double shift = rng.normal(1.0);
                w2[j] = w[j] + shift;
                shift_sum += shift;
            }
            w2[n - 1] -= shift_sum;
            const Matrix a = closed_form_hd(rho0, p, eta, w, t).matrix();
            const Matrix b = closed_form_hd(rho0, p, eta, w2, t).matrix();
            worst_hd = std::max(worst_hd, max_abs_difference(a, b));
        }
    }
    r.passed = worst_pd <= 1e-12 && worst_hd <= 1e-12;
    r.detail = fmt("PD equal-parity count vectors max |diff| %.2e; HD equal-sum W pairs %.2e "
                   "(<= 1e-12, N=2..4)",
                   worst_pd, worst_hd);
    return r;
}

}  // namespace

EquivalenceStats closed_form_equivalence(int n_qubits, double eta, Unravelling kind, double dt,
                                         double t, int seeds, std::uint64_t seed,
                                         bool wrong_rescaling) {
    const LindbladParams p{n_qubits, 1.0, 1.0};
    const UnravellingSpec u = kind == Unravelling::Homodyne
                                  ? UnravellingSpec::homodyne(eta, kPi / 2)
                                  : UnravellingSpec::photo_detection(eta);
    const double times[] = {t};
    const auto grid = TimeGrid::snapped(dt, times);
    EquivalenceStats st;
    for (int s = 0; s < seeds; ++s) {
        RandomStream init(trajectory_seed(seed ^ 0x5eedULL, static_cast<std::uint64_t>(s)));
        const DensityMatrix rho0 = random_pure_state(n_qubits, init);
        const auto traj = simulate_trajectory(rho0, p, u, grid, trajectory_seed(seed, s));
        const auto& last = traj.samples.back();
        Matrix closed;
        if (wrong_rescaling) {
            // Closed form with the full kappa in place of (1 - eta) kappa.
            closed = dephasing_map_exact(rho0, p, grid.time_at(last.step)).matrix();
            const auto totals = traj.noise.cumulative(last.step);
            const auto diag = kind == Unravelling::Homodyne
                                  ? phase_kick_diagonal(n_qubits, std::sqrt(0.5 * eta * p.kappa), totals)
                                  : spin_flip_diagonal(n_qubits, to_counts(totals));
            for (Eigen::Index c = 0; c < closed.cols(); ++c) {
                for (Eigen::Index m = 0; m < closed.rows(); ++m) {
                    closed(m, c) *= diag[m] * std::conj(diag[c]);
                }
            }
        } else {
            closed = closed_form_from_record(rho0, traj, last.step).state.matrix();
        }
        const double d = trace_distance(closed, last.state.matrix());
        st.max_distance = std::max(st.max_distance, d);
        st.mean_distance += d;
        ++st.runs;
    }
    st.mean_distance /= std::max(st.runs, 1);
    return st;
}

std::vector<CheckResult> run_acceptance(const VerifyOptions& opts, const std::vector<int>& only) {
    const std::vector<Check> checks = {
        check_equivalence,        check_noise_rescaling,         check_saturation,
        check_record_information, check_unravelling_consistency, check_inequality_chain,
        check_dynamics_oracle,    check_noise_statistics,        check_ghz_reduction,
    };
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = checks[i](opts);
        } catch (const std::exception& e) {
            r = {id, "check " + std::to_string(id), false, std::string("exception: ") + e.what(), 0.0};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_check(const CheckResult& r) {
    return fmt("[%s] C%d %s: %s (%.1f s)", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
               r.detail.c_str(), r.seconds);
}

}  // namespace dephmon
