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

#include "bvq/propagator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bvq/errors.hpp"

namespace bvq {

namespace {

constexpr Complex kI{0.0, 1.0};

Eigen::MatrixXcd hermitian_generator(const CompressedPair& pair, double u) {
    Eigen::MatrixXcd h = kI * (pair.a_matrix + u * pair.b_matrix);
    const double scale = 1.0 + h.cwiseAbs().maxCoeff();
    const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "i(A + uB) is not Hermitian (deviation " << asym << " at u = " << u
            << "); check that B is skew-adjoint";
        throw NumericalError(msg.str());
    }
    // symmetrise away the rounding noise so the solver sees an exactly Hermitian input
    return 0.5 * (h + h.adjoint());
}

void check_state(const State& psi, int n, const char* where) {
    if (psi.size() != n) {
        throw std::invalid_argument(std::string(where) + ": state has dimension " +
                                    std::to_string(psi.size()) + ", truncation is " +
                                    std::to_string(n));
    }
    if (std::abs(psi.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument(std::string(where) + ": initial state must have unit norm");
    }
}

}  // namespace

State step(const CompressedPair& pair, double u, double dt, const State& psi) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    if (psi.size() != pair.size) throw std::invalid_argument("step: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_generator(pair, u));
    if (solver.info() != Eigen::Success) throw NumericalError("step: eigendecomposition failed");
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    Eigen::VectorXcd phases(pair.size);
    for (int i = 0; i < pair.size; ++i) phases(i) = std::polar(1.0, -solver.eigenvalues()(i) * dt);
    return v * phases.cwiseProduct(v.adjoint() * psi);
}

Propagator::Propagator(CompressedPair pair) : pair_(std::move(pair)) {}

const Propagator::Eigensystem& Propagator::eigensystem(double u) {
    const auto key = std::bit_cast<std::uint64_t>(u);
    auto it = eigen_cache_.find(key);
    if (it != eigen_cache_.end()) return it->second;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian_generator(pair_, u));
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Propagator: eigendecomposition failed");
    }
    return eigen_cache_.emplace(key, Eigensystem{solver.eigenvalues(), solver.eigenvectors()})
        .first->second;
}

const Eigen::MatrixXcd& Propagator::step_matrix(double u, double dt) {
    const StepKey key{std::bit_cast<std::uint64_t>(u), std::bit_cast<std::uint64_t>(dt)};
    auto it = step_cache_.find(key);
    if (it != step_cache_.end()) return it->second;
    const Eigensystem& es = eigensystem(u);
    Eigen::VectorXcd phases(pair_.size);
    for (int i = 0; i < pair_.size; ++i) phases(i) = std::polar(1.0, -es.frequencies(i) * dt);
    Eigen::MatrixXcd m = es.vectors * phases.asDiagonal() * es.vectors.adjoint();
    return step_cache_.emplace(key, std::move(m)).first->second;
}

State Propagator::step(double u, double dt, const State& psi) {
    if (!(dt > 0.0)) throw std::invalid_argument("Propagator::step: dt must be > 0");
    if (psi.size() != pair_.size) throw std::invalid_argument("Propagator::step: dimension mismatch");
    return step_matrix(u, dt) * psi;
}

State Propagator::run(const ControlSignal& s, std::size_t first, std::size_t last, State psi) {
    State next(psi.size());
    for (std::size_t i = first; i < last; ++i) {
        next.noalias() = step_matrix(s.values()[i], s.piece_length(i)) * psi;
        psi.swap(next);
    }
    return psi;
}

void check_amplitude(const OperatorTriple& triple, const ControlSignal& signal) {
    const double limit = triple.amplitude_limit();
    const double peak = signal.max_abs();
    if (!(peak < limit)) {
        std::ostringstream msg;
        msg << "control amplitude " << peak << " is not below the admissible limit 1/||B||_A = "
            << limit << " for model '" << triple.name() << "'";
        throw AmplitudeError(msg.str(), limit, peak);
    }
}

PropagationResult propagate(const OperatorTriple& triple, int n, const ControlSignal& signal,
                            const State& psi0, int record_every) {
    check_amplitude(triple, signal);
    Propagator engine(compress(triple, n));
    return propagate(engine, signal, psi0, record_every);
}

PropagationResult propagate(Propagator& engine, const ControlSignal& signal, const State& psi0,
                            int record_every) {
    if (record_every < 1) throw std::invalid_argument("propagate: record_every must be >= 1");
    check_state(psi0, engine.size(), "propagate");
    PropagationResult result{{}, {}, {}, signal, engine.size()};
    const std::size_t m = signal.pieces();
    const auto every = static_cast<std::size_t>(record_every);
    result.times.reserve(m / every + 2);
    result.states.reserve(m / every + 2);
    result.piece_marks.reserve(m / every + 2);

    result.times.push_back(0.0);
    result.states.push_back(psi0);
    result.piece_marks.push_back(0);
    State psi = psi0;
    for (std::size_t done = 0; done < m;) {
        const std::size_t next = std::min(m, done + every);
        psi = engine.run(signal, done, next, std::move(psi));
        done = next;
        result.times.push_back(signal.breakpoints()[done]);
        result.states.push_back(psi);
        result.piece_marks.push_back(done);
    }
    return result;
}

State state_at(const CompressedPair& pair, const PropagationResult& result, double t) {
    const ControlSignal& s = result.signal;
    if (t < 0.0 || t > s.duration()) throw std::out_of_range("state_at: time outside [0, T]");
    const auto it = std::upper_bound(result.times.begin(), result.times.end(), t);
    const auto rec = static_cast<std::size_t>(std::distance(result.times.begin(), it)) - 1;
    State psi = result.states[rec];
    std::size_t piece = result.piece_marks[rec];
    double now = result.times[rec];
    while (now < t) {
        const double end = s.breakpoints()[piece + 1];
        const double dt = std::min(end, t) - now;
        if (dt > 0.0) psi = step(pair, s.values()[piece], dt, psi);
        now = std::min(end, t);
        ++piece;
    }
    return psi;
}

State basis_state(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("basis_state: level outside truncation");
    return State::Unit(n, k - 1);
}

double tail_mass(const State& psi) {
    const auto n = psi.size();
    const auto from = n / 2;  // 0-based index of level floor(n/2)+1
    return psi.tail(n - from).squaredNorm();
}

std::vector<GalerkinRow> galerkin_study(const OperatorTriple& triple, const ControlSignal& signal,
                                        const State& psi0, const std::vector<int>& sizes) {
    if (sizes.size() < 2) throw std::invalid_argument("galerkin_study: need at least two sizes");
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) {
            throw std::invalid_argument("galerkin_study: sizes must be increasing");
        }
    }
    if (psi0.size() > sizes.front()) {
        throw std::invalid_argument("galerkin_study: initial state not supported in the smallest size");
    }
    check_amplitude(triple, signal);

    std::vector<State> finals;
    finals.reserve(sizes.size());
    for (int n : sizes) {
        State start = State::Zero(n);
        start.head(psi0.size()) = psi0;
        Propagator engine(compress(triple, n));
        finals.push_back(engine.run(signal, 0, signal.pieces(), start));
    }
    std::vector<GalerkinRow> rows;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        State padded = State::Zero(sizes[i + 1]);
        padded.head(sizes[i]) = finals[i];
        rows.push_back({sizes[i], sizes[i + 1], (padded - finals[i + 1]).norm(),
                        tail_mass(finals[i]), tail_mass(finals[i + 1])});
    }
    return rows;
}

}  // namespace bvq
