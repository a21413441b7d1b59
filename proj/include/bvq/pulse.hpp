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

// pulse.hpp: resonant sine pulses and ladder climbing.
//
// For a non-degenerate transition (j,k) with gap omega = |lambda_j - lambda_k| and
// coupling b = |b_jk|, the control sin(omega t)/n transfers phi_j to phi_k at some
// time within one period T = 2 pi/omega of n T*, where T* = pi/b, with probability
// tending to 1 as n grows. Over that time the control has total variation close to
// 2 omega / b and an L1 norm of 4/omega per period.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvq/control_signal.hpp"
#include "bvq/operator_model.hpp"
#include "bvq/propagator.hpp"

namespace bvq {

// Levels above the highest targeted one kept in the truncation by default.
inline constexpr int kGuardBand = 4;

struct PulseDesign {
    int from{1};
    int to{2};
    int n{1};                  // amplitude is 1/n
    double omega{0.0};
    double coupling{0.0};      // |b_jk|
    double period{0.0};        // T
    double t_star{0.0};        // T*
    double duration{0.0};      // n T* rounded to a whole number of periods
    double step{0.0};
    double predicted_tv{0.0};  // 2 omega / |b_jk|
    double l1_per_period{0.0}; // I = 4 / omega
    double k_constant{0.0};    // K = I T* / T
    double c_constant{0.0};    // diagnostic supremum over the off-resonant coupled pairs
    double window_lo{0.0};     // n T* - T
    double window_hi{0.0};     // n T* + T
    int truncation{0};         // depth used for the degeneracy / resonance checks

    double amplitude() const noexcept { return 1.0 / n; }
};

struct DesignOptions {
    int truncation{0};            // 0: max(j, k) + kGuardBand
    double gap_tolerance{kDefaultGapTolerance};
    double resonance_tolerance{0.01};
};

struct DesignedPulse {
    PulseDesign design;
    ControlSignal signal;
};

// Throws DegenerateTransitionError (zero coupling, shared gap, or a harmonic of omega
// that the pulse excites above tolerance) and AmplitudeError (1/n not admissible).
DesignedPulse design_pulse(const OperatorTriple& triple, int j, int k, int n, double step,
                           const DesignOptions& options = {});

struct TransferPeak {
    double time{0.0};
    double population{0.0};
    std::size_t pieces{0};  // pieces of the extended pulse executed up to the peak
    State state;
};

// Runs sin(omega t)/n over [0, n T* + T] from psi0 and returns the piece boundary in
// (n T* - T, n T* + T) with the largest population of level `design.to`.
TransferPeak find_transfer_peak(const OperatorTriple& triple, int n_trunc,
                                const PulseDesign& design, const State& psi0);
TransferPeak find_transfer_peak(Propagator& engine, const PulseDesign& design, const State& psi0);

// The control used by find_transfer_peak.
ControlSignal extended_pulse(const PulseDesign& design);

struct PulsePlan {
    std::vector<PulseDesign> rungs;  // rung r drives (r, r+1)
    double predicted_tv{0.0};
    int target{1};
};

struct Ladder {
    PulsePlan plan;
    std::optional<ControlSignal> signal;  // fixed-length concatenation; empty for target 1
};

// Rung r uses step = period_r / samples_per_period.
Ladder ladder_plan(const OperatorTriple& triple, int target, const std::vector<int>& n_list,
                   int samples_per_period, const DesignOptions& options = {});

enum class Schedule { fixed, peak };

Schedule parse_schedule(const std::string& name);
std::string to_string(Schedule s);

struct PlanMeasurement {
    double final_anorm{0.0};               // M
    double tv{0.0};
    std::vector<double> rung_population;   // population of level r+1 after rung r
    std::vector<double> rung_anorm;
    std::vector<double> rung_end_time;
    std::optional<ControlSignal> executed;
    State final_state;
};

// Executes the plan from psi0 (phi_1 when empty) on an n_trunc-level truncation.
// Peak schedule cuts each rung at its measured transfer peak; fixed runs the full
// pulses. Requires n_trunc >= target + guard.
PlanMeasurement measure_plan(const OperatorTriple& triple, int n_trunc, const PulsePlan& plan,
                             Schedule schedule = Schedule::peak,
                             std::optional<State> psi0 = std::nullopt, int guard = kGuardBand);

std::string to_json(const PulseDesign& design);
std::string to_json(const PulsePlan& plan);

}  // namespace bvq
