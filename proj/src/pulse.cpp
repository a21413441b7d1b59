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

#include "bvq/pulse.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bvq/energy.hpp"
#include "bvq/errors.hpp"

namespace bvq {

namespace {

constexpr double kPi = std::numbers::pi;

bool overlaps(int l, int m, int j, int k) { return l == j || l == k || m == j || m == k; }

}  // namespace

DesignedPulse design_pulse(const OperatorTriple& triple, int j, int k, int n, double step,
                           const DesignOptions& options) {
    if (j < 1 || k < 1 || j == k) throw std::invalid_argument("design_pulse: need distinct levels >= 1");
    if (n < 1) throw std::invalid_argument("design_pulse: n must be >= 1");
    if (!(step > 0.0)) throw std::invalid_argument("design_pulse: step must be > 0");

    int depth = options.truncation > 0 ? options.truncation : std::max(j, k) + kGuardBand;
    depth = std::min(depth, triple.max_truncation());
    if (depth < std::max(j, k)) {
        throw std::invalid_argument("design_pulse: transition outside the model");
    }

    const TransitionCheck check =
        is_nondegenerate_transition(triple, j, k, depth, options.gap_tolerance);
    if (!check.coupled) {
        throw DegenerateTransitionError("transition (" + std::to_string(j) + "," +
                                        std::to_string(k) + ") has zero coupling");
    }
    if (!check.violations.empty()) {
        std::ostringstream msg;
        msg << "transition (" << j << "," << k << ") shares its gap with";
        for (const auto& [l, m] : check.violations) msg << " (" << l << "," << m << ")";
        throw DegenerateTransitionError(msg.str());
    }
    if (!(1.0 / n < triple.amplitude_limit())) {
        std::ostringstream msg;
        msg << "amplitude 1/" << n << " is not below the admissible limit "
            << triple.amplitude_limit();
        throw AmplitudeError(msg.str(), triple.amplitude_limit(), 1.0 / n);
    }

    PulseDesign d;
    d.from = j;
    d.to = k;
    d.n = n;
    d.step = step;
    d.truncation = depth;
    d.omega = std::abs(triple.eigenvalue(j) - triple.eigenvalue(k));
    d.coupling = std::abs(triple.coupling(j, k));
    d.period = 2.0 * kPi / d.omega;
    if (!(step < d.period / 2.0)) {
        throw std::invalid_argument("design_pulse: step must be below half a period");
    }
    d.t_star = kPi / d.coupling;
    const double periods = std::max(1.0, std::round(n * d.t_star / d.period));
    d.duration = periods * d.period;
    d.predicted_tv = 2.0 * d.omega / d.coupling;
    d.l1_per_period = 4.0 / d.omega;
    d.k_constant = d.l1_per_period * d.t_star / d.period;
    d.window_lo = n * d.t_star - d.period;
    d.window_hi = n * d.t_star + d.period;

    // Fourier content of one period of the sampled unit sine.
    const ControlSignal one_period = sample_sine({1.0, d.omega, d.period, step});
    const double resonant = std::abs(fourier_coefficient(one_period, d.omega));
    for (int l = 1; l <= depth; ++l) {
        for (int m = 1; m <= depth; ++m) {
            if (l == m || triple.coupling(l, m) == Complex{0.0, 0.0}) continue;
            if (!overlaps(l, m, j, k)) continue;
            if (std::min(l, m) == std::min(j, k) && std::max(l, m) == std::max(j, k)) continue;
            const double signed_gap = triple.eigenvalue(l) - triple.eigenvalue(m);
            const double gap = std::abs(signed_gap);
            const double harmonic = std::round(gap / d.omega);
            const bool on_lattice = std::abs(gap - harmonic * d.omega) <= options.gap_tolerance;
            const double coeff = std::abs(fourier_coefficient(one_period, signed_gap));
            if (on_lattice) {
                if (harmonic >= 2.0 && coeff > options.resonance_tolerance * resonant) {
                    std::ostringstream msg;
                    msg << "pulse for (" << j << "," << k << ") excites harmonic " << harmonic
                        << " of pair (" << l << "," << m << "): ratio " << coeff / resonant;
                    throw DegenerateTransitionError(msg.str());
                }
                continue;
            }
            const double denom = std::abs(std::sin(kPi * gap / d.omega));
            d.c_constant = std::max(d.c_constant, coeff / denom);
        }
    }

    ControlSignal signal = sample_sine({d.amplitude(), d.omega, d.duration, step});
    return {d, std::move(signal)};
}

ControlSignal extended_pulse(const PulseDesign& design) {
    return sample_sine({design.amplitude(), design.omega, design.window_hi, design.step});
}

TransferPeak find_transfer_peak(Propagator& engine, const PulseDesign& design, const State& psi0) {
    if (psi0.size() != engine.size()) {
        throw std::invalid_argument("find_transfer_peak: dimension mismatch");
    }
    if (design.to > engine.size()) {
        throw std::invalid_argument("find_transfer_peak: target level outside truncation");
    }
    const ControlSignal signal = extended_pulse(design);
    TransferPeak best{0.0, -1.0, 0, psi0};
    State psi = psi0;
    const int target = design.to - 1;
    for (std::size_t i = 0; i < signal.pieces(); ++i) {
        psi = engine.run(signal, i, i + 1, std::move(psi));
        const double t = signal.breakpoints()[i + 1];
        if (t <= design.window_lo || t >= design.window_hi) continue;
        const double pop = std::norm(psi(target));
        if (pop > best.population) best = {t, pop, i + 1, psi};
    }
    if (best.population < 0.0) {
        // window narrower than one step: fall back to the last piece
        best = {signal.duration(), std::norm(psi(target)), signal.pieces(), psi};
    }
    return best;
}

TransferPeak find_transfer_peak(const OperatorTriple& triple, int n_trunc,
                                const PulseDesign& design, const State& psi0) {
    check_amplitude(triple, ControlSignal({0.0, 1.0}, {design.amplitude()}));
    Propagator engine(compress(triple, n_trunc));
    return find_transfer_peak(engine, design, psi0);
}

Ladder ladder_plan(const OperatorTriple& triple, int target, const std::vector<int>& n_list,
                   int samples_per_period, const DesignOptions& options) {
    if (target < 1) throw std::invalid_argument("ladder_plan: target level must be >= 1");
    if (static_cast<int>(n_list.size()) != target - 1) {
        throw std::invalid_argument("ladder_plan: need one n per rung (" +
                                    std::to_string(target - 1) + ")");
    }
    if (samples_per_period < 2) throw std::invalid_argument("ladder_plan: samples per period < 2");
    DesignOptions opts = options;
    if (opts.truncation == 0) opts.truncation = target + kGuardBand;

    Ladder ladder;
    ladder.plan.target = target;
    for (int r = 1; r < target; ++r) {
        const double omega = std::abs(triple.eigenvalue(r + 1) - triple.eigenvalue(r));
        const double step = 2.0 * kPi / omega / samples_per_period;
        DesignedPulse pulse = design_pulse(triple, r, r + 1, n_list[static_cast<std::size_t>(r - 1)],
                                           step, opts);
        ladder.plan.predicted_tv += pulse.design.predicted_tv;
        ladder.plan.rungs.push_back(pulse.design);
        ladder.signal = ladder.signal ? concat(*ladder.signal, pulse.signal) : pulse.signal;
    }
    return ladder;
}

Schedule parse_schedule(const std::string& name) {
    if (name == "fixed") return Schedule::fixed;
    if (name == "peak") return Schedule::peak;
    throw ConfigError("unknown schedule '" + name + "' (expected fixed or peak)");
}

std::string to_string(Schedule s) { return s == Schedule::fixed ? "fixed" : "peak"; }

PlanMeasurement measure_plan(const OperatorTriple& triple, int n_trunc, const PulsePlan& plan,
                             Schedule schedule, std::optional<State> psi0, int guard) {
    if (n_trunc < plan.target + guard) {
        throw ConfigError("truncation " + std::to_string(n_trunc) + " is below target level " +
                          std::to_string(plan.target) + " plus guard band " +
                          std::to_string(guard));
    }
    const Eigen::VectorXd lambda = eigenvalues(triple, n_trunc);
    State psi = psi0 ? *psi0 : basis_state(n_trunc, 1);
    if (psi.size() != n_trunc) throw std::invalid_argument("measure_plan: dimension mismatch");

    PlanMeasurement out;
    Propagator engine(compress(triple, n_trunc));
    double elapsed = 0.0;
    for (const PulseDesign& rung : plan.rungs) {
        ControlSignal executed = ControlSignal::zero(1.0);
        if (schedule == Schedule::peak) {
            check_amplitude(triple, ControlSignal({0.0, 1.0}, {rung.amplitude()}));
            TransferPeak peak = find_transfer_peak(engine, rung, psi);
            executed = extended_pulse(rung).prefix(peak.pieces);
            psi = std::move(peak.state);
        } else {
            executed = sample_sine({rung.amplitude(), rung.omega, rung.duration, rung.step});
            check_amplitude(triple, executed);
            psi = engine.run(executed, 0, executed.pieces(), std::move(psi));
        }
        elapsed += executed.duration();
        out.executed = out.executed ? concat(*out.executed, executed) : executed;
        out.rung_population.push_back(std::norm(psi(rung.to - 1)));
        out.rung_anorm.push_back(anorm(lambda, psi));
        out.rung_end_time.push_back(elapsed);
    }
    out.final_anorm = anorm(lambda, psi);
    out.tv = out.executed ? total_variation(*out.executed) : 0.0;
    out.final_state = std::move(psi);
    return out;
}

namespace {

nlohmann::json as_json(const PulseDesign& d) {
    return {{"transition", {d.from, d.to}},
            {"n", d.n},
            {"amplitude", d.amplitude()},
            {"omega", d.omega},
            {"coupling", d.coupling},
            {"period", d.period},
            {"t_star", d.t_star},
            {"duration", d.duration},
            {"step", d.step},
            {"predicted_tv", d.predicted_tv},
            {"I", d.l1_per_period},
            {"K", d.k_constant},
            {"C", d.c_constant},
            {"search_window", {d.window_lo, d.window_hi}},
            {"truncation", d.truncation}};
}

}  // namespace

std::string to_json(const PulseDesign& design) { return as_json(design).dump(2); }

std::string to_json(const PulsePlan& plan) {
    nlohmann::json rungs = nlohmann::json::array();
    for (const auto& d : plan.rungs) rungs.push_back(as_json(d));
    nlohmann::json doc{{"target", plan.target}, {"predicted_tv", plan.predicted_tv}, {"rungs", rungs}};
    return doc.dump(2);
}

}  // namespace bvq
