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

#include "bvq/energy.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace bvq {

Eigen::VectorXd eigenvalues(const OperatorTriple& triple, int n) {
    Eigen::VectorXd lambda(n);
    for (int j = 1; j <= n; ++j) lambda(j - 1) = triple.eigenvalue(j);
    return lambda;
}

double anorm(const Eigen::VectorXd& lambda, const State& psi) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < psi.size(); ++j) sum += lambda(j) * lambda(j) * std::norm(psi(j));
    return std::sqrt(sum);
}

double energy(const Eigen::VectorXd& lambda, const State& psi) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < psi.size(); ++j) sum += lambda(j) * std::norm(psi(j));
    return sum;
}

double population_lower_bound(const Eigen::VectorXd& lambda, const State& psi, int k) {
    const double l = lambda(k - 1);
    return std::sqrt(l * l * std::norm(psi(k - 1)));
}

double energy_rate(const CompressedPair& pair, const State& psi, double u) {
    if (psi.size() != pair.size) throw std::invalid_argument("energy_rate: dimension mismatch");
    const State a_psi = pair.a_matrix * psi;
    const State b_psi = pair.b_matrix * psi;
    return 2.0 * u * a_psi.dot(b_psi).imag();
}

double energy_rate(const OperatorTriple& triple, const State& psi, double u) {
    return energy_rate(compress(triple, static_cast<int>(psi.size())), psi, u);
}

EnergyTrace trace(const OperatorTriple& triple, const PropagationResult& result) {
    const Eigen::VectorXd lambda = eigenvalues(triple, result.truncation);
    EnergyTrace out;
    out.times = result.times;
    out.anorm.reserve(result.states.size());
    out.energy.reserve(result.states.size());
    out.populations.reserve(result.states.size());
    for (const State& psi : result.states) {
        out.anorm.push_back(anorm(lambda, psi));
        out.energy.push_back(energy(lambda, psi));
        out.populations.push_back(psi.cwiseAbs2());
    }
    return out;
}

double bounded_bound(double opnorm_b, double tv, double initial_anorm) {
    if (opnorm_b < 0.0 || tv < 0.0) {
        throw std::invalid_argument("bounded_bound: norm and total variation must be >= 0");
    }
    return initial_anorm + 2.0 * opnorm_b * tv;
}

double unbounded_bound(double a_coeff, double delta, double tv, double initial_anorm) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("unbounded_bound: delta must lie in (0, 1)");
    }
    return std::exp(a_coeff * tv / delta) * initial_anorm;
}

double admissible_delta(double a_coeff, double peak) { return 1.0 - a_coeff * peak; }

BoundReport check_bounded(double opnorm_b, double tv, double initial_anorm, double final_anorm,
                          std::string norm_source) {
    BoundReport r;
    r.kind = BoundCase::bounded;
    r.norm_source = std::move(norm_source);
    r.coefficient = opnorm_b;
    r.tv = tv;
    r.initial_anorm = initial_anorm;
    r.final_anorm = final_anorm;
    r.bound_value = bounded_bound(opnorm_b, tv, initial_anorm);
    r.margin = r.bound_value - final_anorm;
    r.satisfied = r.margin >= 0.0;
    return r;
}

BoundReport check_unbounded(double a_coeff, double delta, double tv, double initial_anorm,
                            double final_anorm) {
    BoundReport r;
    r.kind = BoundCase::unbounded;
    r.norm_source = "relative_bound_a";
    r.coefficient = a_coeff;
    r.delta = delta;
    r.tv = tv;
    r.initial_anorm = initial_anorm;
    r.final_anorm = final_anorm;
    r.bound_value = unbounded_bound(a_coeff, delta, tv, initial_anorm);
    r.margin = r.bound_value - final_anorm;
    r.satisfied = r.margin >= 0.0;
    return r;
}

std::vector<BoundReport> bound_reports(const OperatorTriple& triple,
                                       const PropagationResult& result) {
    const Eigen::VectorXd lambda = eigenvalues(triple, result.truncation);
    const double tv = total_variation(result.signal);
    const double a0 = anorm(lambda, result.states.front());
    const double a1 = anorm(lambda, result.final_state());
    std::vector<BoundReport> out;
    const auto rb = triple.relative_bound();
    if (rb.a == 0.0) {
        const double measured = operator_norm(compress(triple, result.truncation).b_matrix);
        out.push_back(check_bounded(measured, tv, a0, a1, "measured"));
        out.push_back(check_bounded(rb.b, tv, a0, a1, "nominal"));
    } else {
        const double delta = admissible_delta(rb.a, result.signal.max_abs());
        out.push_back(check_unbounded(rb.a, delta, tv, a0, a1));
    }
    return out;
}

namespace {

nlohmann::json as_json(const BoundReport& r) {
    nlohmann::json j;
    j["case"] = r.kind == BoundCase::bounded ? "bounded" : "unbounded";
    j["norm_source"] = r.norm_source;
    j["coefficient"] = r.coefficient;
    if (r.kind == BoundCase::unbounded) j["delta"] = r.delta;
    j["tv"] = r.tv;
    j["initial_anorm"] = r.initial_anorm;
    j["final_anorm"] = r.final_anorm;
    j["bound_value"] = r.bound_value;
    j["margin"] = r.margin;
    j["satisfied"] = r.satisfied;
    return j;
}

}  // namespace

std::string to_json(const BoundReport& report) { return as_json(report).dump(2); }

std::string to_json(const std::vector<BoundReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(as_json(r));
    return arr.dump(2);
}

}  // namespace bvq
