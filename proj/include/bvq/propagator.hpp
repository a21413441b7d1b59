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

// propagator.hpp: Galerkin propagator for piecewise-constant controls.
//
// On a piece where u is constant the flow is exp(dt (A^(N) + u B^(N))). The
// exponent is skew-Hermitian, so we diagonalise the Hermitian matrix
// H = i(A^(N) + u B^(N)) = V diag(w) V^H and apply V diag(exp(-i w dt)) V^H.
// The resulting step is unitary up to rounding. The propagator over a signal is
// the ordered product of these steps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "bvq/control_signal.hpp"
#include "bvq/operator_model.hpp"

namespace bvq {

struct PropagationResult {
    std::vector<double> times;
    std::vector<State> states;
    // Number of completed pieces at each recorded time.
    std::vector<std::size_t> piece_marks;
    ControlSignal signal;
    int truncation{0};

    const State& final_state() const { return states.back(); }
};

// exp(dt (A + uB)) psi without caching.
State step(const CompressedPair& pair, double u, double dt, const State& psi);

// Step engine for one run. Caches the eigendecomposition per distinct control value
// (keyed on the bit pattern of u) and the step matrix per (u, dt).
class Propagator {
public:
    explicit Propagator(CompressedPair pair);

    const CompressedPair& pair() const noexcept { return pair_; }
    int size() const noexcept { return pair_.size; }

    State step(double u, double dt, const State& psi);
    // Advance psi through pieces [first, last) of s.
    State run(const ControlSignal& s, std::size_t first, std::size_t last, State psi);

    std::size_t cached_values() const noexcept { return eigen_cache_.size(); }

private:
    struct Eigensystem {
        Eigen::VectorXd frequencies;
        Eigen::MatrixXcd vectors;
    };
    struct StepKey {
        std::uint64_t u;
        std::uint64_t dt;
        bool operator==(const StepKey&) const = default;
    };
    struct StepKeyHash {
        std::size_t operator()(const StepKey& k) const noexcept {
            return std::hash<std::uint64_t>{}(k.u * 0x9E3779B97F4A7C15ULL ^ k.dt);
        }
    };

    const Eigensystem& eigensystem(double u);
    const Eigen::MatrixXcd& step_matrix(double u, double dt);

    CompressedPair pair_;
    std::unordered_map<std::uint64_t, Eigensystem> eigen_cache_;
    std::unordered_map<StepKey, Eigen::MatrixXcd, StepKeyHash> step_cache_;
};

// Throws AmplitudeError unless max|u| < amplitude_limit (strict).
void check_amplitude(const OperatorTriple& triple, const ControlSignal& signal);

// Propagate psi0 (length n, unit norm) through the signal on the n-level
// truncation. States are recorded every `record_every` pieces and at the end.
PropagationResult propagate(const OperatorTriple& triple, int n, const ControlSignal& signal,
                            const State& psi0, int record_every = 1);

// Same, reusing an existing step engine (and its cache).
PropagationResult propagate(Propagator& engine, const ControlSignal& signal, const State& psi0,
                            int record_every = 1);

// State at an arbitrary t in [0, duration], reconstructed from the nearest earlier
// recorded state by whole and partial steps.
State state_at(const CompressedPair& pair, const PropagationResult& result, double t);

// phi_k in an n-level truncation.
State basis_state(int n, int k);

// (X_N (+) 0) psi0 versus X_N' psi0 for consecutive sizes.
struct GalerkinRow {
    int n{0};
    int n_next{0};
    double discrepancy{0.0};
    double tail_mass{0.0};       // sum_{j > n/2} |c_j|^2 of the size-n run
    double tail_mass_next{0.0};  // same for the size-n_next run
};

// psi0 is given on its own support (length <= min(sizes)) and zero-padded.
std::vector<GalerkinRow> galerkin_study(const OperatorTriple& triple, const ControlSignal& signal,
                                        const State& psi0, const std::vector<int>& sizes);

double tail_mass(const State& psi);

}  // namespace bvq
