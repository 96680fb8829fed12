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

#pragma once

#include <cstdint>
#include <random>

namespace dephmon {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Keyed per-trajectory seed; independent of scheduling order.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t trajectory_index);

/// Single-consumer random stream. Channels draw in fixed order 1..N per step.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

    static RandomStream for_trajectory(std::uint64_t master_seed, std::uint64_t index) {
        return RandomStream(trajectory_seed(master_seed, index));
    }

    double normal(double stddev) { return stddev * normal_(engine_); }
    bool bernoulli(double p) { return uniform_(engine_) < p; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace dephmon
