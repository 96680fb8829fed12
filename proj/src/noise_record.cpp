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

#include "dephmon/noise_record.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace dephmon {

NoiseRecord::NoiseRecord(NoiseKind kind, int channels, double dt)
    : kind_(kind), channels_(channels), dt_(dt) {
    if (channels < 1) {
        throw std::invalid_argument("noise record needs at least one channel");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("noise record step must be > 0");
    }
}

void NoiseRecord::reserve(std::size_t steps) {
    increments_.reserve(steps * channels_);
    totals_.reserve(steps * channels_);
}

void NoiseRecord::append(std::span<const double> increments) {
    if (increments.size() != static_cast<std::size_t>(channels_)) {
        throw std::invalid_argument("noise step has wrong channel count");
    }
    for (double v : increments) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("noise increments must be finite");
        }
        if (kind_ == NoiseKind::Poisson && v != 0.0 && v != 1.0) {
            throw std::invalid_argument("Poisson increments must be 0 or 1");
        }
    }
    const std::size_t base = totals_.size();
    for (int j = 0; j < channels_; ++j) {
        const double prev = base == 0 ? 0.0 : totals_[base - channels_ + j];
        increments_.push_back(increments[j]);
        totals_.push_back(prev + increments[j]);
    }
}

std::span<const double> NoiseRecord::step(std::size_t s) const {
    if (s >= steps()) {
        throw std::out_of_range("noise record step out of range");
    }
    return {increments_.data() + s * channels_, static_cast<std::size_t>(channels_)};
}

std::vector<double> NoiseRecord::cumulative(std::size_t n_steps) const {
    if (n_steps > steps()) {
        throw std::out_of_range("noise record has fewer steps than requested");
    }
    if (n_steps == 0) {
        return std::vector<double>(channels_, 0.0);
    }
    const auto first = totals_.begin() + static_cast<std::ptrdiff_t>((n_steps - 1) * channels_);
    return {first, first + channels_};
}

void NoiseRecord::write(std::ostream& out) const {
    char buf[64];
    out << "# dephmon noise record\n";
    out << "# kind: " << (kind_ == NoiseKind::Poisson ? "poisson" : "wiener") << '\n';
    out << "# channels: " << channels_ << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", dt_);
    out << "# dt: " << buf << '\n';
    out << "# steps: " << steps() << '\n';
    for (std::size_t s = 0; s < steps(); ++s) {
        for (int j = 0; j < channels_; ++j) {
            const double v = increments_[s * channels_ + j];
            if (kind_ == NoiseKind::Poisson) {
                out << (v != 0.0 ? '1' : '0');
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out << buf;
            }
            out << (j + 1 < channels_ ? ',' : '\n');
        }
    }
}

NoiseRecord NoiseRecord::read(std::istream& in) {
    std::map<std::string, std::string> header;
    std::string line;
    std::size_t line_no = 0;
    while (in.peek() == '#') {
        std::getline(in, line);
        ++line_no;
        const auto colon = line.find(':');
        if (colon != std::string::npos) {
            auto key = line.substr(1, colon - 1);
            auto value = line.substr(colon + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
            };
            trim(key);
            trim(value);
            header[key] = value;
        }
    }
    for (const char* key : {"kind", "channels", "dt", "steps"}) {
        if (!header.count(key)) {
            throw NoiseFormatError(std::string("noise record header missing '") + key + "'");
        }
    }
    NoiseKind kind;
    if (header["kind"] == "poisson") {
        kind = NoiseKind::Poisson;
    } else if (header["kind"] == "wiener") {
        kind = NoiseKind::Wiener;
    } else {
        throw NoiseFormatError("unknown noise kind '" + header["kind"] + "'");
    }
    const int channels = std::stoi(header["channels"]);
    const double dt = std::stod(header["dt"]);
    const auto steps = static_cast<std::size_t>(std::stoull(header["steps"]));

    NoiseRecord rec(kind, channels, dt);
    rec.reserve(steps);
    std::vector<double> row(channels);
    while (rec.steps() < steps && std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::string field;
        int j = 0;
        while (std::getline(fields, field, ',')) {
            if (j >= channels) {
                break;
            }
            try {
                row[j] = std::stod(field);
            } catch (const std::exception&) {
                throw NoiseFormatError("line " + std::to_string(line_no) + ": bad value '" +
                                       field + "'");
            }
            ++j;
        }
        if (j != channels || std::getline(fields, field, ',')) {
            throw NoiseFormatError("line " + std::to_string(line_no) + ": expected " +
                                   std::to_string(channels) + " comma-separated values");
        }
        try {
            rec.append(row);
        } catch (const std::invalid_argument& e) {
            throw NoiseFormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (rec.steps() != steps) {
        throw NoiseFormatError("noise record truncated: header says " + std::to_string(steps) +
                               " steps, found " + std::to_string(rec.steps()));
    }
    return rec;
}

}  // namespace dephmon
