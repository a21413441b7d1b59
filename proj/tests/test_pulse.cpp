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

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>

#include "bvq/energy.hpp"
#include "bvq/errors.hpp"
#include "bvq/pulse.hpp"

using bvq::Complex;

namespace {

constexpr double kPi = std::numbers::pi;

double rotor_step(int rung, int spp) { return 2.0 * kPi / (2 * rung + 1) / spp; }

// Oscillator rung j: 2 omega_j / |b_{j,j+1}| from the closed-form spectrum.
double oscillator_rung_tv(int j) {
    auto lambda = [](int n) { return (4.0 * n - 1.0) + 1.0 / (4.0 * n - 1.0); };
    return 2.0 * (lambda(j + 1) - lambda(j)) / std::sqrt(j * (j + 0.5));
}

}  // namespace

TEST_CASE("rotor (1,2) design") {
    const auto rotor = bvq::make_rotor();
    const auto [d, signal] = bvq::design_pulse(rotor, 1, 2, 50, rotor_step(1, 400));
    CHECK(d.omega == 3.0);
    CHECK(d.coupling == 0.5);
    CHECK(d.period == doctest::Approx(2.0 * kPi / 3.0));
    CHECK(d.t_star == doctest::Approx(2.0 * kPi));
    CHECK(d.predicted_tv == doctest::Approx(12.0));
    CHECK(d.l1_per_period == doctest::Approx(4.0 / 3.0));
    CHECK(d.k_constant == doctest::Approx(4.0));
    CHECK(d.amplitude() == 0.02);
    CHECK(std::abs(d.duration - 50.0 * d.t_star) <= d.period);
    CHECK(d.window_lo == doctest::Approx(100.0 * kPi - 2.0 * kPi / 3.0));
    CHECK(d.window_hi == doctest::Approx(100.0 * kPi + 2.0 * kPi / 3.0));
    CHECK(d.c_constant > 0.0);
    CHECK(std::isfinite(d.c_constant));
    CHECK(signal.duration() == doctest::Approx(d.duration));
    CHECK(bvq::total_variation(signal) == doctest::Approx(12.0).epsilon(0.02));
}

TEST_CASE("oscillator (1,2) design") {
    const auto osc = bvq::make_oscillator();
    const double omega = 80.0 / 21.0;
    const auto [d, signal] = bvq::design_pulse(osc, 1, 2, 50, 2.0 * kPi / omega / 400.0);
    CHECK(d.omega == doctest::Approx(omega).epsilon(1e-14));
    CHECK(d.coupling == doctest::Approx(std::sqrt(1.5)));
    CHECK(d.t_star == doctest::Approx(2.565).epsilon(1e-3));
    CHECK(d.predicted_tv == doctest::Approx(6.221).epsilon(1e-4));
    CHECK(d.predicted_tv == doctest::Approx(oscillator_rung_tv(1)).epsilon(1e-14));
    CHECK(bvq::total_variation(signal) == doctest::Approx(d.predicted_tv).epsilon(0.02));
}

TEST_CASE("design errors") {
    const auto rotor = bvq::make_rotor();
    CHECK_THROWS_AS(bvq::design_pulse(rotor, 1, 3, 50, 0.01), bvq::DegenerateTransitionError);
    CHECK_THROWS_AS(bvq::design_pulse(rotor, 1, 1, 50, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(bvq::design_pulse(rotor, 1, 2, 0, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(bvq::design_pulse(rotor, 1, 2, 50, 2.0), std::invalid_argument);

    const bvq::OperatorTriple equal(
        "equal", [](int j) { return double(j); },
        [](int j, int k) { return std::abs(j - k) == 1 ? Complex(0.0, -1.0) : Complex(0.0, 0.0); },
        1, {0.0, 2.0});
    CHECK_THROWS_AS(bvq::design_pulse(equal, 1, 2, 50, 0.01), bvq::DegenerateTransitionError);

    const bvq::OperatorTriple stiff(
        "stiff", [](int j) { return double(j * j); },
        [](int j, int k) { return std::abs(j - k) == 1 ? Complex(0.0, -1.0) : Complex(0.0, 0.0); },
        1, {2.0, 1.0});
    CHECK_THROWS_AS(bvq::design_pulse(stiff, 1, 2, 1, 0.01), bvq::AmplitudeError);
    CHECK_NOTHROW(bvq::design_pulse(stiff, 1, 2, 3, 0.01));
}

TEST_CASE("designed pulses keep harmonics of the resonance small") {
    const auto rotor = bvq::make_rotor();
    const auto osc = bvq::make_oscillator();
    for (const auto* triple : {&rotor, &osc}) {
        for (int j = 1; j <= 4; ++j) {
            const double omega = std::abs(triple->eigenvalue(j + 1) - triple->eigenvalue(j));
            const auto [d, signal] = bvq::design_pulse(*triple, j, j + 1, 20, 2.0 * kPi / omega / 200.0);
            const double base = std::abs(bvq::fourier_coefficient(signal, d.omega));
            CHECK(base > 0.0);
            for (int m = 2; m <= 4; ++m) {
                CHECK(std::abs(bvq::fourier_coefficient(signal, m * d.omega)) / base <= 0.01);
            }
            CHECK(d.predicted_tv > 0.0);
            CHECK(d.k_constant > 0.0);
            // Duration is a whole number of periods; compare with the prediction for that duration.
            const double rounded = d.predicted_tv * d.duration / (d.n * d.t_star);
            CHECK(bvq::total_variation(signal) == doctest::Approx(rounded).epsilon(0.02));
            if (triple == &rotor) {
                CHECK(bvq::total_variation(signal) == doctest::Approx(d.predicted_tv).epsilon(0.02));
            }
        }
    }
}

TEST_CASE("transfer peak") {
    const auto rotor = bvq::make_rotor();
    const auto [d, signal] = bvq::design_pulse(rotor, 1, 2, 20, rotor_step(1, 400));
    const auto peak = bvq::find_transfer_peak(rotor, 8, d, bvq::basis_state(8, 1));
    CHECK(peak.time > d.window_lo);
    CHECK(peak.time < d.window_hi);
    CHECK(peak.population >= 0.9);
    CHECK(peak.population == doctest::Approx(std::norm(peak.state(1))));
    // the executed prefix reproduces the peak state
    const auto prefix = bvq::extended_pulse(d).prefix(peak.pieces);
    const auto replay = bvq::propagate(rotor, 8, prefix, bvq::basis_state(8, 1));
    CHECK((replay.final_state() - peak.state).norm() < 1e-10);
    CHECK_THROWS(bvq::find_transfer_peak(rotor, 8, d, bvq::basis_state(6, 1)));
}

TEST_CASE("ladder plans") {
    const auto rotor = bvq::make_rotor();
    SUBCASE("rotor N=3") {
        const auto ladder = bvq::ladder_plan(rotor, 3, {50, 50}, 400);
        REQUIRE(ladder.plan.rungs.size() == 2);
        CHECK(ladder.plan.predicted_tv == doctest::Approx(32.0));
        CHECK(ladder.plan.rungs[0].to == ladder.plan.rungs[1].from);
        REQUIRE(ladder.signal);
        CHECK(bvq::total_variation(*ladder.signal) == doctest::Approx(32.0).epsilon(0.02));
        double per_pulse = 0.0;
        for (const auto& r : ladder.plan.rungs) {
            per_pulse += bvq::total_variation(
                bvq::sample_sine({r.amplitude(), r.omega, r.duration, r.step}));
        }
        CHECK(bvq::total_variation(*ladder.signal) == doctest::Approx(per_pulse).epsilon(1e-3));
    }
    SUBCASE("rotor exact sum 4(N^2 - 1)") {
        for (int target = 2; target <= 7; ++target) {
            const auto ladder = bvq::ladder_plan(rotor, target, std::vector<int>(target - 1, 50), 64);
            CHECK(ladder.plan.predicted_tv == doctest::Approx(4.0 * (target * target - 1)));
        }
    }
    SUBCASE("rotor N=2 single rung") {
        const auto ladder = bvq::ladder_plan(rotor, 2, {50}, 400);
        CHECK(ladder.plan.predicted_tv == doctest::Approx(12.0));
    }
    SUBCASE("oscillator N=4") {
        const auto osc = bvq::make_oscillator();
        const auto ladder = bvq::ladder_plan(osc, 4, {50, 50, 50}, 400);
        const double expected = oscillator_rung_tv(1) + oscillator_rung_tv(2) + oscillator_rung_tv(3);
        CHECK(ladder.plan.predicted_tv == doctest::Approx(expected).epsilon(1e-13));
        CHECK(ladder.plan.rungs[1].predicted_tv == doctest::Approx(3.531).epsilon(1e-3));
        CHECK(ladder.plan.rungs[2].predicted_tv == doctest::Approx(2.454).epsilon(1e-3));
        CHECK(bvq::total_variation(*ladder.signal) == doctest::Approx(expected).epsilon(0.02));
    }
    SUBCASE("target 1 is empty") {
        const auto ladder = bvq::ladder_plan(rotor, 1, {}, 400);
        CHECK(ladder.plan.rungs.empty());
        CHECK_FALSE(ladder.signal);
    }
    SUBCASE("errors") {
        CHECK_THROWS(bvq::ladder_plan(rotor, 3, {50}, 400));
        CHECK_THROWS(bvq::ladder_plan(rotor, 0, {}, 400));
    }
}

TEST_CASE("measure plan") {
    const auto rotor = bvq::make_rotor();
    SUBCASE("rotor N=3, peak schedule") {
        const auto ladder = bvq::ladder_plan(rotor, 3, {50, 50}, 400);
        const auto m = bvq::measure_plan(rotor, 7, ladder.plan);
        REQUIRE(m.rung_population.size() == 2);
        CHECK(m.rung_population[1] >= 0.8);
        CHECK(m.final_anorm >= 9.0 * std::sqrt(m.rung_population[1]));
        const Eigen::VectorXd lambda = bvq::eigenvalues(rotor, 7);
        for (std::size_t r = 0; r < m.rung_anorm.size(); ++r) {
            CHECK(m.rung_anorm[r] >= lambda(static_cast<int>(r) + 1) * std::sqrt(m.rung_population[r]));
        }
        REQUIRE(m.executed);
        CHECK(m.tv == doctest::Approx(bvq::total_variation(*m.executed)));
        CHECK(m.tv == doctest::Approx(32.0).epsilon(0.03));
        CHECK(m.final_anorm <= bvq::bounded_bound(1.0, m.tv, 1.0));
        const auto replay = bvq::propagate(rotor, 7, *m.executed, bvq::basis_state(7, 1));
        CHECK((replay.final_state() - m.final_state).norm() < 1e-9);
    }
    SUBCASE("fixed schedule runs whole pulses") {
        const auto ladder = bvq::ladder_plan(rotor, 3, {20, 20}, 200);
        const auto m = bvq::measure_plan(rotor, 7, ladder.plan, bvq::Schedule::fixed);
        REQUIRE(m.executed);
        CHECK(m.executed->duration() == doctest::Approx(ladder.signal->duration()));
    }
    SUBCASE("trivial plan") {
        const auto ladder = bvq::ladder_plan(rotor, 1, {}, 400);
        const auto m = bvq::measure_plan(rotor, 5, ladder.plan);
        CHECK(m.final_anorm == 1.0);
        CHECK(m.tv == 0.0);
    }
    SUBCASE("oscillator N=3") {
        const auto osc = bvq::make_oscillator();
        const auto ladder = bvq::ladder_plan(osc, 3, {50, 50}, 400);
        const auto m = bvq::measure_plan(osc, 7, ladder.plan);
        CHECK(m.final_anorm >= (11.0 + 1.0 / 11.0) * std::sqrt(m.rung_population.back()));
    }
    SUBCASE("guard band") {
        const auto ladder = bvq::ladder_plan(rotor, 3, {50, 50}, 400);
        CHECK_THROWS_AS(bvq::measure_plan(rotor, 6, ladder.plan), bvq::ConfigError);
    }
}

TEST_CASE("schedules and JSON") {
    CHECK(bvq::parse_schedule("fixed") == bvq::Schedule::fixed);
    CHECK(bvq::parse_schedule("peak") == bvq::Schedule::peak);
    CHECK_THROWS_AS(bvq::parse_schedule("greedy"), bvq::ConfigError);
    CHECK(bvq::to_string(bvq::Schedule::fixed) == "fixed");

    const auto ladder = bvq::ladder_plan(bvq::make_rotor(), 3, {50, 50}, 400);
    const auto doc = nlohmann::json::parse(bvq::to_json(ladder.plan));
    CHECK(doc["target"] == 3);
    CHECK(doc["rungs"].size() == 2);
    CHECK(doc["rungs"][0]["K"].get<double>() == doctest::Approx(4.0));
    CHECK(doc["rungs"][1]["transition"][0] == 2);
}
