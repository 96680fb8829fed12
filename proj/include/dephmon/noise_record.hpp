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
 * Measurement-noise records: per-channel, per-step Poisson counts dN_j or
 * Wiener increments dw_j, with running totals N_j(t) / W_j(t).
 *
 * Text export (line oriented, no binary):
 *
 *     # dephmon noise record
 *     # kind: poisson|wiener
 *     # channels: N
 *     # dt: <step>
 *     # steps: <count>
 *     <inc_1>,<inc_2>,...,<inc_N>      one line per step
 *
 * Poisson increments are written as 0/1; Wiener increments with 17
 * significant digits so a replay is bit-exact.
 */

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

namespace dephmon {

enum class NoiseKind { Poisson, Wiener };

class NoiseFormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class NoiseRecord {
  public:
    NoiseRecord(NoiseKind kind, int channels, double dt);

    /// Appends one step; `increments` has one entry per channel (channel 1 first).
    void append(std::span<const double> increments);
    void reserve(std::size_t steps);

    NoiseKind kind() const noexcept { return kind_; }
    int channels() const noexcept { return channels_; }
    double dt() const noexcept { return dt_; }
    std::size_t steps() const noexcept { return increments_.size() / channels_; }

    /// Increments of step s (0-based), channel-ordered.
    std::span<const double> step(std::size_t s) const;

    /// Per-channel totals after the first `n_steps` steps.
    std::vector<double> cumulative(std::size_t n_steps) const;
    std::vector<double> final_cumulative() const { return cumulative(steps()); }

    void write(std::ostream& out) const;
    static NoiseRecord read(std::istream& in);

    bool operator==(const NoiseRecord&) const = default;

  private:
    NoiseKind kind_;
    int channels_;
    double dt_;
    std::vector<double> increments_;
    std::vector<double> totals_;
};

/// Observed homodyne currents dy_j, step-major.
struct HomodyneCurrent {
    int channels = 0;
    std::vector<double> values;

    std::span<const double> step(std::size_t s) const {
        return {values.data() + s * static_cast<std::size_t>(channels),
                static_cast<std::size_t>(channels)};
    }
    bool operator==(const HomodyneCurrent&) const = default;
};

}  // namespace dephmon
