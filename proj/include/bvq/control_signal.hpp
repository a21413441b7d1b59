// Copyright 2026 The bvq Authors
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

// control_signal.hpp: piecewise-constant controls and their functionals.
//
// A signal is u(t) = u_i on [t_{i-1}, t_i), with t_0 = 0 < t_1 < ... < t_m. Every
// signal is understood to be preceded by u = 0, so the total variation counts the
// jump |u_1| at t = 0. No jump back to zero is counted at the end.

#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace bvq {

class ControlSignal {
public:
    ControlSignal(std::vector<double> breakpoints, std::vector<double> values);

    // m pieces of equal length `step`.
    static ControlSignal uniform(double step, std::vector<double> values);
    static ControlSignal zero(double duration);

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t pieces() const noexcept { return values_.size(); }
    double duration() const noexcept { return breakpoints_.back(); }
    double piece_length(std::size_t i) const { return breakpoints_[i + 1] - breakpoints_[i]; }
    double max_abs() const noexcept;

    // Value on the piece containing t; t = duration maps to the last piece.
    double value_at(double t) const;
    // Index of the piece containing t (same convention as value_at).
    std::size_t piece_index(double t) const;

    // First `count` pieces.
    ControlSignal prefix(std::size_t count) const;

    bool operator==(const ControlSignal&) const = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

struct SinePulseSpec {
    double amplitude{0.0};
    double omega{1.0};
    double duration{0.0};
    double step{0.0};
};

// |u_1| + sum |u_{i+1} - u_i|
double total_variation(const ControlSignal& s);
// sum |u_{i+1} - u_i|, i.e. without the jump from the conventional u(0) = 0.
double internal_variation(const ControlSignal& s);

double lp_norm(const ControlSignal& s, double p);

// Midpoint sampling amplitude*sin(omega*t) on a uniform grid; duration is rounded
// to the nearest multiple of step. When step divides the period the samples repeat
// bit-for-bit from period to period.
ControlSignal sample_sine(const SinePulseSpec& spec);

// s2 shifted by duration(s1) and appended; equal values at the seam are merged.
ControlSignal concat(const ControlSignal& s1, const ControlSignal& s2);

ControlSignal scale(const ControlSignal& s, double c);

// Exact integral of u(tau) exp(i*gap*tau) over [0, duration].
std::complex<double> fourier_coefficient(const ControlSignal& s, double gap);

// Signal files: {"type":"piecewise_constant","breakpoints":[..],"values":[..]} or
// {"type":"sine","amplitude":x,"omega":w,"duration":d,"step":h}.
ControlSignal signal_from_json(const std::string& text);
ControlSignal load_signal(const std::string& path);
std::string signal_to_json(const ControlSignal& s);
void save_signal(const ControlSignal& s, const std::string& path);

// Columns t,u: one row per breakpoint, the last row repeating the final value.
void write_signal_csv(std::ostream& out, const ControlSignal& s);

}  // namespace bvq
