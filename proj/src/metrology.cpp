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

#include "dephmon/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dephmon {

namespace {

// Eigenvalues this small are roundoff in a unit-trace matrix; their square
// roots (~1e-7) would otherwise swamp 1 - F in the finite-difference oracle.
constexpr double kFidelityEigenFloor = 1e-14;

Matrix psd_sqrt(const Matrix& m, const char* which) {
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd lam = es.eigenvalues();
    if (lam.minCoeff() < -kPsdTolerance) {
        throw InvalidStateError(std::string("fidelity: ") + which +
                                " has a negative eigenvalue beyond tolerance");
    }
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        lam[i] = lam[i] > kFidelityEigenFloor ? std::sqrt(lam[i]) : 0.0;
    }
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    const Matrix sr = psd_sqrt(rho.matrix(), "rho");
    psd_sqrt(sigma.matrix(), "sigma");
    const Matrix k = sr * sigma.matrix() * sr;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (k + k.adjoint()), Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (double mu : es.eigenvalues()) {
        if (mu > kFidelityEigenFloor) f += std::sqrt(mu);
    }
    return std::clamp(f, 0.0, 1.0);
}

double qfi_sld(const DensityMatrix& rho, const Matrix& drho) {
    if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
        throw DimensionError("qfi_sld: derivative dimension mismatch");
    }
    const Matrix h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    const Matrix d = v.adjoint() * drho * v;
    double q = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k) {
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            const double denom = lam[i] + lam[k];
            if (denom > kSldEigenFloor) {
                q += std::norm(d(i, k)) / denom;
            }
        }
    }
    return 2.0 * q;
}

double qfi_fd_oracle(const std::function<DensityMatrix(double)>& state_of, double omega,
                     double eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("finite-difference step must be > 0");
    }
    const double f = fidelity(state_of(omega - 0.5 * eps), state_of(omega + 0.5 * eps));
    return 8.0 * (1.0 - f) / (eps * eps);
}

double unconditional_qfi(const DensityMatrix& rho0, const LindbladParams& p, double t) {
    return qfi_sld(dephasing_map_exact(rho0, p, t), dephasing_map_derivative(rho0, p, t));
}

double ultimate_qfi(const DensityMatrix& rho0, const LindbladParams& p, double t) {
    if (rho0.purity() < 1.0 - 1e-9) {
        throw InvalidStateError("ultimate QFI needs a pure initial state (purity " +
                                std::to_string(rho0.purity()) + ")");
    }
    const LindbladParams noiseless = p.with_kappa(0.0);
    return unconditional_qfi(rho0, noiseless, t);
}

Estimate mean_with_error(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of an empty sample");
    }
    const double n = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / n;
    if (values.size() < 2) {
        return {mean, 0.0};
    }
    std::vector<double> sq(values.size());
    std::transform(values.begin(), values.end(), sq.begin(),
                   [mean](double v) { return (v - mean) * (v - mean); });
    const double var = pairwise_sum(sq) / (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

namespace {
double slack(double a, double b) { return 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }
}  // namespace

bool leq_within(double a, double b, double standard_error) {
    return a <= b + 3.0 * standard_error + slack(a, b);
}

bool equal_within(double a, double b, double standard_error) {
    return std::abs(a - b) <= 3.0 * standard_error + slack(a, b);
}

FisherEstimates estimates_at(const DensityMatrix& rho0, const LindbladParams& p,
                             const BatchResult& batch, std::size_t sample) {
    const double t = batch.grid.time_at(batch.grid.sample_steps.at(sample));
    const auto& scores = batch.score[sample];
    const auto& cond = batch.conditional_qfi[sample];
    std::vector<double> sq(scores.size()), total(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        sq[i] = scores[i] * scores[i];
        total[i] = sq[i] + cond[i];
    }
    FisherEstimates fe;
    fe.time = t;
    fe.fi_traj = mean_with_error(sq);
    fe.mean_conditional_qfi = mean_with_error(cond);
    fe.effective_qfi = {fe.fi_traj.value + fe.mean_conditional_qfi.value,
                        mean_with_error(total).standard_error};
    fe.unconditional_qfi = unconditional_qfi(rho0, p, t);
    fe.ultimate_qfi = rho0.purity() >= 1.0 - 1e-9 ? ultimate_qfi(rho0, p, t) : std::nan("");
    fe.trajectories_used = batch.trajectories;
    return fe;
}

std::vector<FisherEstimates> effective_qfi_series(const DensityMatrix& rho0,
                                                  const LindbladParams& p,
                                                  const UnravellingSpec& u, const TimeGrid& grid,
                                                  std::size_t trajectories, std::uint64_t seed,
                                                  const BatchOptions& opts) {
    if (trajectories < 2) {
        throw std::invalid_argument("Fisher estimates need at least two trajectories");
    }
    BatchOptions batch_opts = opts;
    batch_opts.dt = grid.dt;
    const BatchResult batch = run_batch(rho0, p, u, grid, trajectories, seed, batch_opts);
    std::vector<FisherEstimates> out;
    for (std::size_t k = 0; k < grid.sample_steps.size(); ++k) {
        out.push_back(estimates_at(rho0, p, batch, k));
    }
    return out;
}

FisherEstimates effective_qfi(const DensityMatrix& rho0, const LindbladParams& p,
                              const UnravellingSpec& u, double t, std::size_t trajectories,
                              std::uint64_t seed, const BatchOptions& opts) {
    const double times[] = {t};
    const TimeGrid grid = TimeGrid::snapped(opts.dt, times);
    return effective_qfi_series(rho0, p, u, grid, trajectories, seed, opts).front();
}

Estimate fi_trajectories(const DensityMatrix& rho0, const LindbladParams& p,
                         const UnravellingSpec& u, double t, std::size_t trajectories,
                         std::uint64_t seed, const BatchOptions& opts) {
    if (trajectories < 2) {
        throw std::invalid_argument("Fisher estimates need at least two trajectories");
    }
    const double times[] = {t};
    const TimeGrid grid = TimeGrid::snapped(opts.dt, times);
    const BatchResult batch = run_batch(rho0, p, u, grid, trajectories, seed, opts);
    std::vector<double> sq(batch.score[0].size());
    std::transform(batch.score[0].begin(), batch.score[0].end(), sq.begin(),
                   [](double s) { return s * s; });
    return mean_with_error(sq);
}

}  // namespace dephmon
