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

// Serial reference vs OpenMP: trajectory batches and the elementwise kernels.

#include <benchmark/benchmark.h>

#include <numbers>

#include "dephmon/batch.hpp"
#include "dephmon/dynamics.hpp"
#include "dephmon/kernels.hpp"

namespace {

using namespace dephmon;

void batch_args(benchmark::internal::Benchmark* b) {
    for (int n : {2, 4, 6}) b->Args({n});
    b->Unit(benchmark::kMillisecond);
}

void BM_BatchSerial(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double times[] = {0.2};
    const auto grid = TimeGrid::snapped(1e-3, times);
    const auto u = UnravellingSpec::homodyne(0.8, 0.0);
    BatchOptions opts;
    for (auto _ : state) {
        auto r = run_batch_serial(ghz_state(n), {n, 1.0, 1.0}, u, grid, 64, 1, opts);
        benchmark::DoNotOptimize(r.conditional_qfi);
    }
}
BENCHMARK(BM_BatchSerial)->Apply(batch_args);

void BM_BatchParallel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const double times[] = {0.2};
    const auto grid = TimeGrid::snapped(1e-3, times);
    const auto u = UnravellingSpec::homodyne(0.8, 0.0);
    BatchOptions opts;
    for (auto _ : state) {
        auto r = run_batch(ghz_state(n), {n, 1.0, 1.0}, u, grid, 64, 1, opts);
        benchmark::DoNotOptimize(r.conditional_qfi);
    }
    state.counters["workers"] = available_workers();
}
BENCHMARK(BM_BatchParallel)->Apply(batch_args);

template <bool Parallel>
void BM_DephaseWithTangent(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n));
    std::vector<Complex> table(kernels::factor_table_size(n), Complex(0.999, 0.001));
    Matrix rho = Matrix::Constant(dim, dim, Complex(1.0 / static_cast<double>(dim), 0.0));
    Matrix tangent = Matrix::Zero(dim, dim);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::dephase_with_tangent(rho, tangent, table, n, 1e-3);
        } else {
            kernels::reference::dephase_with_tangent(rho, tangent, table, n, 1e-3);
        }
        benchmark::DoNotOptimize(rho.data());
    }
    state.SetBytesProcessed(state.iterations() * 2 * dim * dim *
                            static_cast<std::int64_t>(sizeof(Complex)));
}
BENCHMARK(BM_DephaseWithTangent<false>)->DenseRange(6, 10, 2);
BENCHMARK(BM_DephaseWithTangent<true>)->DenseRange(6, 10, 2);

}  // namespace

BENCHMARK_MAIN();
