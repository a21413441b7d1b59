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

// energy.hpp: A-norm, physical energy and the a priori growth bounds in terms of
// the total variation of the control.
//
// In coefficients c_j = <phi_j, psi>:
//   ||A psi|| = sqrt(sum lambda_j^2 |c_j|^2)      (A-norm)
//   E(psi)    = sum lambda_j |c_j|^2              (physical energy)
//   dE/dt     = 2 u Im <A psi, B psi>             (inner product antilinear in the first slot)
//
// Bounds, for u(0) = 0:
//   bounded B:    ||A psi_T|| <= ||A psi_0|| + 2 ||B|| TV(u)
//   unbounded B:  ||A psi_T|| <= exp(a TV(u) / delta) ||A psi_0||,  |u| <= (1 - delta)/a

#pragma once

#include <string>
#include <vector>

#include "bvq/operator_model.hpp"
#include "bvq/propagator.hpp"

namespace bvq {

Eigen::VectorXd eigenvalues(const OperatorTriple& triple, int n);

double anorm(const Eigen::VectorXd& lambda, const State& psi);
double energy(const Eigen::VectorXd& lambda, const State& psi);
// sqrt(lambda_k^2 |c_k|^2), evaluated term-for-term like anorm so that
// anorm >= population_lower_bound holds exactly in floating point.
double population_lower_bound(const Eigen::VectorXd& lambda, const State& psi, int k);

double energy_rate(const CompressedPair& pair, const State& psi, double u);
double energy_rate(const OperatorTriple& triple, const State& psi, double u);

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> anorm;
    std::vector<double> energy;
    std::vector<Eigen::VectorXd> populations;
};

EnergyTrace trace(const OperatorTriple& triple, const PropagationResult& result);

double bounded_bound(double opnorm_b, double tv, double initial_anorm);
// Throws std::invalid_argument unless 0 < delta < 1.
double unbounded_bound(double a_coeff, double delta, double tv, double initial_anorm);
// Largest admissible delta for a control with peak |u|: 1 - a max|u|.
double admissible_delta(double a_coeff, double peak);

enum class BoundCase { bounded, unbounded };

struct BoundReport {
    BoundCase kind{BoundCase::bounded};
    std::string norm_source;  // which constant multiplied TV
    double coefficient{0.0};  // ||B|| or a
    double delta{0.0};        // unbounded case only
    double tv{0.0};
    double initial_anorm{0.0};
    double final_anorm{0.0};
    double bound_value{0.0};
    double margin{0.0};
    bool satisfied{false};
};

BoundReport check_bounded(double opnorm_b, double tv, double initial_anorm, double final_anorm,
                          std::string norm_source = "measured");
BoundReport check_unbounded(double a_coeff, double delta, double tv, double initial_anorm,
                            double final_anorm);

// Every bound that applies to the triple for this run. a = 0 gives the bounded check
// twice: against ||B^(N)|| ("measured") and against the model's b constant
// ("nominal"). a > 0 gives the unbounded check with delta = 1 - a max|u|.
std::vector<BoundReport> bound_reports(const OperatorTriple& triple,
                                       const PropagationResult& result);

std::string to_json(const BoundReport& report);
std::string to_json(const std::vector<BoundReport>& reports);

}  // namespace bvq
