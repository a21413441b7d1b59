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

// operator_model.hpp: spectral description of a bilinear system psi' = (A + uB) psi.
//
// A is diagonal in the eigenbasis (A phi_j = -i lambda_j phi_j, lambda_j > 0) and
// B is given by its matrix elements b_jk = <phi_j, B phi_k>. Levels are 1-based.
// Eigenvalues and couplings are produced on demand, so any truncation size can be
// requested from formula-backed models.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bvq/errors.hpp"

namespace bvq {

using Complex = std::complex<double>;
using State = Eigen::VectorXcd;

// Constants (a, b) in ||B psi|| <= a ||A psi|| + b ||psi||.
struct RelativeBound {
    double a{0.0};
    double b{0.0};
};

class OperatorTriple {
public:
    using EigenvalueFn = std::function<double(int)>;
    using CouplingFn = std::function<Complex(int, int)>;

    // level_count is empty for formula-backed (infinite) models.
    OperatorTriple(std::string name, EigenvalueFn eigenvalue, CouplingFn coupling,
                   int bandwidth, RelativeBound relative_bound,
                   std::optional<int> level_count = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    int bandwidth() const noexcept { return bandwidth_; }
    const RelativeBound& relative_bound() const noexcept { return relative_bound_; }
    std::optional<int> level_count() const noexcept { return level_count_; }

    // 1/a when a > 0, +infinity otherwise.
    double amplitude_limit() const noexcept;

    // Throws std::out_of_range for j < 1 or j beyond a finite table.
    double eigenvalue(int j) const;
    Complex coupling(int j, int k) const;

    // Highest truncation available (INT_MAX for formula models).
    int max_truncation() const noexcept {
        return level_count_.value_or(std::numeric_limits<int>::max());
    }

private:
    void check_level(int j) const;

    std::string name_;
    EigenvalueFn eigenvalue_;
    CouplingFn coupling_;
    int bandwidth_;
    RelativeBound relative_bound_;
    std::optional<int> level_count_;
};

// Galerkin compression onto span(phi_1..phi_N).
struct CompressedPair {
    int size{0};
    Eigen::MatrixXcd a_matrix;  // diag(-i lambda_j)
    Eigen::MatrixXcd b_matrix;

    // lambda_1..lambda_N, read back from the diagonal of a_matrix.
    Eigen::VectorXd eigenvalues() const;
};

// Planar rotor: lambda_k = k^2, b_{k,k+1} = b_{k+1,k} = -i/2.
OperatorTriple make_rotor();

// Perturbed harmonic oscillator restricted to odd Hermite functions; level n is
// Hermite index 2n-1. lambda_n = (4n-1) + 1/(4n-1), tridiagonal coupling.
OperatorTriple make_oscillator();

// Relative-bound offset used for the oscillator (only a enters the growth estimate).
inline constexpr double kOscillatorBoundOffset = 1.0;

CompressedPair compress(const OperatorTriple& triple, int n);

// Largest singular value of a (square) matrix.
double operator_norm(const Eigen::MatrixXcd& m);

struct SpectralGap {
    int l{0};
    int m{0};
    double gap{0.0};
    bool coupled{false};

    bool operator==(const SpectralGap&) const = default;
};

// All pairs l < m <= n with |lambda_l - lambda_m| and whether b_lm != 0.
std::vector<SpectralGap> spectral_gaps(const OperatorTriple& triple, int n);

struct TransitionCheck {
    bool nondegenerate{false};
    bool coupled{false};
    // Pairs (l, m), l < m, sharing the gap of (j, k) while coupled and overlapping {j, k}.
    std::vector<std::pair<int, int>> violations;

    explicit operator bool() const noexcept { return nondegenerate; }
};

inline constexpr double kDefaultGapTolerance = 1e-9;

// Non-degenerate transition test. Only pairs within the first scan_depth levels
// are examined, so a positive answer is certified up to that depth only.
TransitionCheck is_nondegenerate_transition(const OperatorTriple& triple, int j, int k,
                                            int scan_depth,
                                            double tol = kDefaultGapTolerance);

struct ValidationReport {
    int truncation{0};
    std::vector<int> nonpositive_levels;
    double skew_deviation{0.0};        // max |b_kj + conj(b_jk)|
    std::vector<std::pair<int, int>> bandwidth_violations;
    int samples{0};
    double worst_bound_margin{std::numeric_limits<double>::infinity()};
    double measured_b_norm{0.0};       // ||B^(N)||

    bool positive() const noexcept { return nonpositive_levels.empty(); }
    bool skew_adjoint(double tol = 1e-12) const noexcept { return skew_deviation <= tol; }
    bool bound_holds() const noexcept { return worst_bound_margin >= 0.0; }
    bool ok() const noexcept {
        return positive() && skew_adjoint() && bandwidth_violations.empty() && bound_holds();
    }
};

// Structural checks on the N-level truncation, plus sampling of the relative bound on
// every basis vector and `samples` random unit vectors drawn with `seed`.
ValidationReport validate(const OperatorTriple& triple, int n, int samples = 1000,
                          std::uint64_t seed = 20130101);

// User model from a finite table:
//   { "name": "...", "eigenvalues": [...], "coupling": [[j,k,re,im],...],
//     "relative_bound": [a,b] }
OperatorTriple triple_from_json(const std::string& text);
OperatorTriple load_triple(const std::string& path);

// Resolve "rotor", "oscillator" or a JSON file path.
OperatorTriple model_by_name(const std::string& spec);

}  // namespace bvq
