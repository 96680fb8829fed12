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

#include "dephmon/trajectories.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>

#include "dephmon/kernels.hpp"

namespace dephmon {

void UnravellingSpec::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("detection efficiency eta must lie in [0, 1]");
    }
    if (kind == Unravelling::Homodyne) {
        if (!theta || !std::isfinite(*theta)) {
            throw std::invalid_argument("homodyne unravelling requires a finite angle theta");
        }
    } else if (theta) {
        throw std::invalid_argument("photo-detection takes no homodyne angle");
    }
}

bool UnravellingSpec::record_is_pure_noise() const {
    if (kind == Unravelling::PhotoDetection) {
        return true;
    }
    return snapped_cos_sin(theta.value_or(0.0)).first == 0.0;
}

std::pair<double, double> snapped_cos_sin(double theta) {
    double c = std::cos(theta);
    double s = std::sin(theta);
    if (std::abs(c) < 1e-15) c = 0.0;
    if (std::abs(s) < 1e-15) s = 0.0;
    return {c, s};
}

TimeGrid TimeGrid::snapped(double dt, std::span<const double> times) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("time step must be > 0");
    }
    TimeGrid grid{dt, {}};
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw std::invalid_argument("sample times must be finite and >= 0");
        }
        const auto step = static_cast<std::size_t>(std::llround(t / dt));
        if (!grid.sample_steps.empty() && step <= grid.sample_steps.back()) {
            throw std::invalid_argument("sample times must be strictly increasing on the dt grid");
        }
        grid.sample_steps.push_back(step);
    }
    return grid;
}

namespace {

void warn_large_click_probability(double p) {
    static std::atomic<bool> warned{false};
    if (p >= 0.1 && !warned.exchange(true)) {
        std::cerr << "warning: click probability per step " << p
                  << " >= 0.1; reduce dt for a faithful Poisson limit\n";
    }
}

// Sign table s_j(m), basis-major: signs[m * N + (j - 1)].
std::vector<signed char> sign_table(int n_qubits) {
    const auto dim = hilbert_dimension(n_qubits);
    std::vector<signed char> signs(dim * n_qubits);
    for (std::size_t m = 0; m < dim; ++m) {
        for (int j = 1; j <= n_qubits; ++j) {
            signs[m * n_qubits + (j - 1)] = static_cast<signed char>(z_sign(m, j, n_qubits));
        }
    }
    return signs;
}

// One step of the linear filter, co-propagating rho and its omega-tangent.
// `tangent` holds d rho_unnormalized / d omega divided by Tr(rho_unnormalized),
// so its trace is the running log-likelihood score.
class ConditionalFilter {
  public:
    ConditionalFilter(const LindbladParams& p, const UnravellingSpec& u, double dt)
        : n_(p.n_qubits),
          dim_(hilbert_dimension(p.n_qubits)),
          kind_(u.kind),
          dt_(dt),
          unmonitored_(p.with_kappa((1.0 - u.eta) * p.kappa), dt),
          click_probability_(0.5 * u.eta * p.kappa * dt),
          amplitude_(std::sqrt(0.5 * u.eta * p.kappa)),
          signs_(sign_table(p.n_qubits)),
          kraus_(dim_) {
        if (!(dt > 0.0)) {
            throw std::invalid_argument("time step must be > 0");
        }
        u.validate();
        if (kind_ == Unravelling::Homodyne) {
            const auto [c, s] = snapped_cos_sin(*u.theta);
            cos_theta_ = c;
            phase_ = Complex(c, s);
            phase_sq_ = phase_ * phase_;
        } else {
            warn_large_click_probability(click_probability_);
        }
    }

    NoiseKind noise_kind() const {
        return kind_ == Unravelling::PhotoDetection ? NoiseKind::Poisson : NoiseKind::Wiener;
    }

    void step(Matrix& rho, Matrix& tangent, RandomStream& rng, std::span<double> noise,
              std::span<double> current) {
        if (kind_ == Unravelling::PhotoDetection) {
            step_pd(rho, tangent, rng, noise);
        } else {
            step_hd(rho, tangent, rng, noise, current);
        }
    }

  private:
    void step_pd(Matrix& rho, Matrix& tangent, RandomStream& rng, std::span<double> clicks) {
        for (int j = 0; j < n_; ++j) {
            clicks[j] = rng.bernoulli(click_probability_) ? 1.0 : 0.0;
        }
        apply_pd(rho, tangent, clicks);
    }

    void step_hd(Matrix& rho, Matrix& tangent, RandomStream& rng, std::span<double> dw,
                 std::span<double> dy) {
        const double sd = std::sqrt(dt_);
        for (int j = 0; j < n_; ++j) {
            dw[j] = rng.normal(sd);
        }
        for (int j = 0; j < n_; ++j) {
            double expect = 0.0;
            for (std::size_t m = 0; m < dim_; ++m) {
                expect += signs_[m * n_ + j] * rho(m, m).real();
            }
            dy[j] = dw[j] + 2.0 * cos_theta_ * amplitude_ * expect * dt_;
        }
        apply_hd(rho, tangent, dy);
    }

  public:
    /// Linear-filter update for given clicks; trace-preserving.
    void apply_pd(Matrix& rho, Matrix& tangent, std::span<const double> clicks) {
        unmonitored_.apply_with_tangent(rho, tangent);
        bool any = false;
        for (std::size_t m = 0; m < dim_; ++m) {
            int sign = 1;
            for (int j = 0; j < n_; ++j) {
                if (clicks[j] != 0.0) {
                    sign *= signs_[m * n_ + j];
                    any = true;
                }
            }
            kraus_[m] = static_cast<double>(sign);
        }
        if (any) {
            kernels::conjugate_diagonal(rho, kraus_);
            kernels::conjugate_diagonal(tangent, kraus_);
        }
    }

    /// Linear-filter update for given currents; renormalizes and returns the
    /// trace before renormalization.
    double apply_hd(Matrix& rho, Matrix& tangent, std::span<const double> dy) {
        unmonitored_.apply_with_tangent(rho, tangent);
        const double a = amplitude_;
        const double ndt = n_ * dt_;
        for (std::size_t m = 0; m < dim_; ++m) {
            double s = 0.0;
            for (int j = 0; j < n_; ++j) {
                s += signs_[m * n_ + j] * dy[j];
            }
            kraus_[m] = 1.0 - 0.5 * a * a * ndt + a * phase_ * s +
                        0.5 * a * a * phase_sq_ * (s * s - ndt);
        }
        kernels::conjugate_diagonal(rho, kraus_);
        kernels::conjugate_diagonal(tangent, kraus_);
        const double norm = rho.trace().real();
        if (!(norm > 0.0)) {
            throw std::runtime_error("homodyne step annihilated the state; reduce dt");
        }
        rho /= norm;
        tangent /= norm;
        return norm;
    }

  private:
    int n_;
    std::size_t dim_;
    Unravelling kind_;
    double dt_;
    DephasingPropagator unmonitored_;
    double click_probability_;
    double amplitude_;
    double cos_theta_ = 0.0;
    Complex phase_{1.0, 0.0};
    Complex phase_sq_{1.0, 0.0};
    std::vector<signed char> signs_;
    std::vector<Complex> kraus_;
};

void check_qubits(const DensityMatrix& rho, const LindbladParams& p) {
    p.validate();
    if (rho.qubits() != p.n_qubits) {
        throw DimensionError("state qubit count does not match parameters");
    }
}

TrajectorySample make_sample(std::size_t step, double dt, const Matrix& rho, const Matrix& tangent) {
    const double score = tangent.trace().real();
    Matrix derivative = tangent - score * rho;
    return {step, static_cast<double>(step) * dt, DensityMatrix::trusted(rho),
            std::move(derivative), score};
}

}  // namespace

PdStepResult step_pd(const DensityMatrix& rho, const LindbladParams& p, double eta, double dt,
                     RandomStream& rng) {
    check_qubits(rho, p);
    ConditionalFilter filter(p, UnravellingSpec::photo_detection(eta), dt);
    Matrix state = rho.matrix();
    Matrix tangent = Matrix::Zero(state.rows(), state.cols());
    std::vector<double> clicks(p.n_qubits);
    filter.step(state, tangent, rng, clicks, {});
    PdStepResult out{DensityMatrix::trusted(std::move(state)), {}};
    for (double c : clicks) out.clicks.push_back(static_cast<int>(c));
    return out;
}

HdStepResult step_hd(const DensityMatrix& rho, const LindbladParams& p, double eta, double theta,
                     double dt, RandomStream& rng) {
    check_qubits(rho, p);
    ConditionalFilter filter(p, UnravellingSpec::homodyne(eta, theta), dt);
    Matrix state = rho.matrix();
    Matrix tangent = Matrix::Zero(state.rows(), state.cols());
    std::vector<double> dw(p.n_qubits), dy(p.n_qubits);
    filter.step(state, tangent, rng, dw, dy);
    return {DensityMatrix::trusted(std::move(state)), std::move(dw), std::move(dy)};
}

TrajectoryResult simulate_trajectory(const DensityMatrix& rho0, const LindbladParams& p,
                                     const UnravellingSpec& u, const TimeGrid& grid,
                                     std::uint64_t seed) {
    check_qubits(rho0, p);
    u.validate();
    ConditionalFilter filter(p, u, grid.dt);
    RandomStream rng(seed);

    TrajectoryResult result{p, u, grid.dt, seed, NoiseRecord(filter.noise_kind(), p.n_qubits, grid.dt),
                            std::nullopt, {}};
    const std::size_t total = grid.total_steps();
    result.noise.reserve(total);
    if (u.kind == Unravelling::Homodyne) {
        result.current = HomodyneCurrent{p.n_qubits, {}};
        result.current->values.reserve(total * p.n_qubits);
    }

    Matrix rho = rho0.matrix();
    Matrix tangent = Matrix::Zero(rho.rows(), rho.cols());
    std::vector<double> noise(p.n_qubits), current(p.n_qubits);
    auto next_sample = grid.sample_steps.begin();
    for (std::size_t step = 0;; ++step) {
        if (next_sample != grid.sample_steps.end() && *next_sample == step) {
            result.samples.push_back(make_sample(step, grid.dt, rho, tangent));
            ++next_sample;
        }
        if (step == total) {
            break;
        }
        filter.step(rho, tangent, rng, noise, current);
        result.noise.append(noise);
        if (result.current) {
            result.current->values.insert(result.current->values.end(), current.begin(),
                                          current.end());
        }
    }
    return result;
}

std::vector<long> to_counts(std::span<const double> totals) {
    std::vector<long> counts;
    counts.reserve(totals.size());
    for (double v : totals) {
        if (v < 0.0 || v != std::floor(v)) {
            throw std::invalid_argument("photo-counts must be nonnegative integers");
        }
        counts.push_back(static_cast<long>(v));
    }
    return counts;
}

std::vector<Complex> spin_flip_diagonal(int n_qubits, std::span<const long> counts) {
    const auto dim = hilbert_dimension(n_qubits);
    if (counts.size() != static_cast<std::size_t>(n_qubits)) {
        throw std::invalid_argument("need one photo-count per channel");
    }
    std::size_t odd_mask = 0;
    for (int j = 1; j <= n_qubits; ++j) {
        if (counts[j - 1] < 0) {
            throw std::invalid_argument("photo-counts must be nonnegative");
        }
        if (counts[j - 1] % 2 != 0) {
            odd_mask |= std::size_t{1} << (n_qubits - j);
        }
    }
    std::vector<Complex> d(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        d[m] = (__builtin_popcountll(m & odd_mask) % 2 == 0) ? 1.0 : -1.0;
    }
    return d;
}

std::vector<Complex> phase_kick_diagonal(int n_qubits, double strength, std::span<const double> w) {
    const auto dim = hilbert_dimension(n_qubits);
    if (w.size() != static_cast<std::size_t>(n_qubits)) {
        throw std::invalid_argument("need one Wiener total per channel");
    }
    std::vector<Complex> d(dim);
    for (std::size_t m = 0; m < dim; ++m) {
        double phase = 0.0;
        for (int j = 1; j <= n_qubits; ++j) {
            phase += z_sign(m, j, n_qubits) * w[j - 1];
        }
        d[m] = std::exp(Complex(0.0, strength * phase));
    }
    return d;
}

namespace {

StateWithDerivative rescaled_with_derivative(const DensityMatrix& rho0, const LindbladParams& p,
                                             double eta, double t,
                                             std::span<const Complex> unitary) {
    check_qubits(rho0, p);
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("detection efficiency eta must lie in [0, 1]");
    }
    Matrix rho = rho0.matrix();
    Matrix tangent = Matrix::Zero(rho.rows(), rho.cols());
    DephasingPropagator(p.with_kappa((1.0 - eta) * p.kappa), t).apply_with_tangent(rho, tangent);
    kernels::conjugate_diagonal(rho, unitary);
    kernels::conjugate_diagonal(tangent, unitary);
    return {DensityMatrix::trusted(std::move(rho)), std::move(tangent)};
}

}  // namespace

DensityMatrix closed_form_pd(const DensityMatrix& rho0, const LindbladParams& p, double eta,
                             std::span<const long> counts, double t) {
    return closed_form_pd_with_derivative(rho0, p, eta, counts, t).state;
}

DensityMatrix closed_form_hd(const DensityMatrix& rho0, const LindbladParams& p, double eta,
                             std::span<const double> w, double t) {
    return closed_form_hd_with_derivative(rho0, p, eta, w, t).state;
}

StateWithDerivative closed_form_pd_with_derivative(const DensityMatrix& rho0,
                                                   const LindbladParams& p, double eta,
                                                   std::span<const long> counts, double t) {
    const auto flips = spin_flip_diagonal(p.n_qubits, counts);
    return rescaled_with_derivative(rho0, p, eta, t, flips);
}

StateWithDerivative closed_form_hd_with_derivative(const DensityMatrix& rho0,
                                                   const LindbladParams& p, double eta,
                                                   std::span<const double> w, double t) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("detection efficiency eta must lie in [0, 1]");
    }
    const auto kick = phase_kick_diagonal(p.n_qubits, std::sqrt(0.5 * eta * p.kappa), w);
    return rescaled_with_derivative(rho0, p, eta, t, kick);
}

StateWithDerivative closed_form_from_record(const DensityMatrix& rho0, const TrajectoryResult& r,
                                            std::size_t step) {
    if (!r.unravelling.record_is_pure_noise()) {
        throw std::invalid_argument(
            "closed-form conditional states exist only for photo-detection and homodyne at "
            "theta = pi/2");
    }
    const double t = static_cast<double>(step) * r.dt;
    const auto totals = r.noise.cumulative(step);
    if (r.unravelling.kind == Unravelling::PhotoDetection) {
        const auto counts = to_counts(totals);
        return closed_form_pd_with_derivative(rho0, r.params, r.unravelling.eta, counts, t);
    }
    return closed_form_hd_with_derivative(rho0, r.params, r.unravelling.eta, totals, t);
}

double replay_log_likelihood(const DensityMatrix& rho0, const TrajectoryResult& record,
                             double omega) {
    const LindbladParams p = record.params.with_omega(omega);
    check_qubits(rho0, p);
    ConditionalFilter filter(p, record.unravelling, record.dt);
    Matrix rho = rho0.matrix();
    Matrix tangent = Matrix::Zero(rho.rows(), rho.cols());
    double log_norm = 0.0;
    for (std::size_t s = 0; s < record.noise.steps(); ++s) {
        if (record.unravelling.kind == Unravelling::PhotoDetection) {
            // Click probabilities do not depend on the state or on omega.
            filter.apply_pd(rho, tangent, record.noise.step(s));
        } else {
            log_norm += std::log(filter.apply_hd(rho, tangent, record.current->step(s)));
        }
    }
    return log_norm;
}

}  // namespace dephmon
