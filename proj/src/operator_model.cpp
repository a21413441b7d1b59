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

#include "bvq/operator_model.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace bvq {

namespace {
constexpr Complex kI{0.0, 1.0};
}

OperatorTriple::OperatorTriple(std::string name, EigenvalueFn eigenvalue, CouplingFn coupling,
                               int bandwidth, RelativeBound relative_bound,
                               std::optional<int> level_count)
    : name_(std::move(name)),
      eigenvalue_(std::move(eigenvalue)),
      coupling_(std::move(coupling)),
      bandwidth_(bandwidth),
      relative_bound_(relative_bound),
      level_count_(level_count) {
    if (!eigenvalue_ || !coupling_) {
        throw std::invalid_argument("OperatorTriple: missing eigenvalue or coupling map");
    }
    if (bandwidth_ < 0) {
        throw std::invalid_argument("OperatorTriple: bandwidth must be nonnegative");
    }
    if (relative_bound_.a < 0.0 || relative_bound_.b < 0.0) {
        throw std::invalid_argument("OperatorTriple: relative bound constants must be nonnegative");
    }
    if (level_count_ && *level_count_ < 1) {
        throw std::invalid_argument("OperatorTriple: a finite model needs at least one level");
    }
}

double OperatorTriple::amplitude_limit() const noexcept {
    if (relative_bound_.a > 0.0) return 1.0 / relative_bound_.a;
    return std::numeric_limits<double>::infinity();
}

void OperatorTriple::check_level(int j) const {
    if (j < 1 || (level_count_ && j > *level_count_)) {
        throw std::out_of_range("level index " + std::to_string(j) + " outside model '" +
                                name_ + "'");
    }
}

double OperatorTriple::eigenvalue(int j) const {
    check_level(j);
    return eigenvalue_(j);
}

Complex OperatorTriple::coupling(int j, int k) const {
    check_level(j);
    check_level(k);
    return coupling_(j, k);
}

Eigen::VectorXd CompressedPair::eigenvalues() const {
    // Im(-i lambda) = -lambda
    return -a_matrix.diagonal().imag();
}

OperatorTriple make_rotor() {
    return OperatorTriple(
        "rotor", [](int k) { return static_cast<double>(k) * static_cast<double>(k); },
        [](int j, int k) -> Complex {
            if (std::abs(j - k) == 1) return Complex{0.0, -0.5};
            return Complex{0.0, 0.0};
        },
        1, RelativeBound{0.0, std::sqrt(2.0)});
}

OperatorTriple make_oscillator() {
    return OperatorTriple(
        "oscillator",
        [](int n) {
            const double m = 4.0 * n - 1.0;
            return m + 1.0 / m;
        },
        [](int j, int k) -> Complex {
            if (j == k) return -kI * (j - 0.5);
            if (std::abs(j - k) == 1) {
                const double n = std::min(j, k);
                return -kI * std::sqrt(n * (n + 0.5));
            }
            return Complex{0.0, 0.0};
        },
        1, RelativeBound{std::sqrt(6.0) / 4.0, kOscillatorBoundOffset});
}

CompressedPair compress(const OperatorTriple& triple, int n) {
    if (n < 1) throw std::invalid_argument("compress: truncation must be >= 1");
    if (n > triple.max_truncation()) {
        throw std::invalid_argument("compress: model '" + triple.name() + "' has only " +
                                    std::to_string(triple.max_truncation()) + " levels");
    }
    CompressedPair pair;
    pair.size = n;
    pair.a_matrix = Eigen::MatrixXcd::Zero(n, n);
    pair.b_matrix = Eigen::MatrixXcd::Zero(n, n);
    const int bw = triple.bandwidth();
    for (int j = 1; j <= n; ++j) {
        pair.a_matrix(j - 1, j - 1) = -kI * triple.eigenvalue(j);
        for (int k = std::max(1, j - bw); k <= std::min(n, j + bw); ++k) {
            pair.b_matrix(j - 1, k - 1) = triple.coupling(j, k);
        }
    }
    return pair;
}

double operator_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

std::vector<SpectralGap> spectral_gaps(const OperatorTriple& triple, int n) {
    if (n < 2) throw std::invalid_argument("spectral_gaps: need at least two levels");
    std::vector<SpectralGap> gaps;
    gaps.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int l = 1; l <= n; ++l) {
        for (int m = l + 1; m <= n; ++m) {
            gaps.push_back({l, m, std::abs(triple.eigenvalue(l) - triple.eigenvalue(m)),
                            triple.coupling(l, m) != Complex{0.0, 0.0}});
        }
    }
    return gaps;
}

TransitionCheck is_nondegenerate_transition(const OperatorTriple& triple, int j, int k,
                                            int scan_depth, double tol) {
    if (j < 1 || k < 1 || j == k) {
        throw std::invalid_argument("is_nondegenerate_transition: need distinct levels >= 1");
    }
    if (scan_depth < std::max(j, k) || scan_depth > triple.max_truncation()) {
        throw std::invalid_argument("is_nondegenerate_transition: scan depth " +
                                    std::to_string(scan_depth) + " does not cover (" +
                                    std::to_string(j) + "," + std::to_string(k) + ")");
    }
    TransitionCheck check;
    check.coupled = triple.coupling(j, k) != Complex{0.0, 0.0};
    const double gap = std::abs(triple.eigenvalue(j) - triple.eigenvalue(k));
    for (int l = 1; l <= scan_depth; ++l) {
        for (int m = l + 1; m <= scan_depth; ++m) {
            const bool same = (l == std::min(j, k) && m == std::max(j, k));
            if (same) continue;
            const bool overlaps = l == j || l == k || m == j || m == k;
            if (!overlaps) continue;
            if (std::abs(std::abs(triple.eigenvalue(l) - triple.eigenvalue(m)) - gap) > tol) {
                continue;
            }
            if (triple.coupling(l, m) == Complex{0.0, 0.0} &&
                triple.coupling(m, l) == Complex{0.0, 0.0}) {
                continue;
            }
            check.violations.emplace_back(l, m);
        }
    }
    check.nondegenerate = check.coupled && check.violations.empty();
    return check;
}

ValidationReport validate(const OperatorTriple& triple, int n, int samples, std::uint64_t seed) {
    ValidationReport report;
    report.truncation = n;
    for (int j = 1; j <= n; ++j) {
        if (!(triple.eigenvalue(j) > 0.0)) report.nonpositive_levels.push_back(j);
    }
    for (int j = 1; j <= n; ++j) {
        for (int k = 1; k <= n; ++k) {
            const Complex b = triple.coupling(j, k);
            const double dev = std::abs(triple.coupling(k, j) + std::conj(b));
            report.skew_deviation = std::max(report.skew_deviation, dev);
            if (std::abs(j - k) > triple.bandwidth() && b != Complex{0.0, 0.0}) {
                report.bandwidth_violations.emplace_back(j, k);
            }
        }
    }

    // Full matrix, not the banded compression: bandwidth violations must show up here.
    Eigen::MatrixXcd b_full(n, n);
    Eigen::VectorXd lambda(n);
    for (int j = 1; j <= n; ++j) {
        lambda(j - 1) = triple.eigenvalue(j);
        for (int k = 1; k <= n; ++k) b_full(j - 1, k - 1) = triple.coupling(j, k);
    }
    report.measured_b_norm = operator_norm(b_full);

    const auto [a, b] = triple.relative_bound();
    auto margin_of = [&](const State& x) {
        const double anorm = lambda.cwiseProduct(x.cwiseAbs()).norm();
        return a * anorm + b * x.norm() - (b_full * x).norm();
    };
    for (int j = 0; j < n; ++j) {
        report.worst_bound_margin =
            std::min(report.worst_bound_margin, margin_of(State::Unit(n, j)));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    State x(n);
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < n; ++i) x(i) = Complex{normal(rng), normal(rng)};
        x.normalize();
        report.worst_bound_margin = std::min(report.worst_bound_margin, margin_of(x));
    }
    report.samples = samples + n;
    return report;
}

namespace {

struct Table {
    std::vector<double> eigenvalues;
    std::map<std::pair<int, int>, Complex> coupling;
};

}  // namespace

OperatorTriple triple_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("model file: ") + e.what());
    }
    try {
        auto table = std::make_shared<Table>();
        table->eigenvalues = doc.at("eigenvalues").get<std::vector<double>>();
        const int size = static_cast<int>(table->eigenvalues.size());
        if (size < 1) throw ConfigError("model file: 'eigenvalues' is empty");
        int bandwidth = 0;
        for (const auto& entry : doc.at("coupling")) {
            if (!entry.is_array() || entry.size() != 4) {
                throw ConfigError("model file: coupling entries must be [j,k,re,im]");
            }
            const int j = entry[0].get<int>();
            const int k = entry[1].get<int>();
            if (j < 1 || k < 1 || j > size || k > size) {
                throw ConfigError("model file: coupling index (" + std::to_string(j) + "," +
                                  std::to_string(k) + ") outside 1.." + std::to_string(size));
            }
            const Complex value{entry[2].get<double>(), entry[3].get<double>()};
            table->coupling[{j, k}] = value;
            if (value != Complex{0.0, 0.0}) bandwidth = std::max(bandwidth, std::abs(j - k));
        }
        const auto rb = doc.at("relative_bound").get<std::vector<double>>();
        if (rb.size() != 2) throw ConfigError("model file: 'relative_bound' must be [a,b]");
        if (rb[0] < 0.0 || rb[1] < 0.0) {
            throw ConfigError("model file: relative bound constants must be nonnegative");
        }
        const std::string name = doc.value("name", std::string("table"));
        return OperatorTriple(
            name, [table](int j) { return table->eigenvalues[static_cast<std::size_t>(j - 1)]; },
            [table](int j, int k) {
                const auto it = table->coupling.find({j, k});
                return it == table->coupling.end() ? Complex{0.0, 0.0} : it->second;
            },
            bandwidth, RelativeBound{rb[0], rb[1]}, size);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model file: ") + e.what());
    }
}

OperatorTriple load_triple(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return triple_from_json(buffer.str());
}

OperatorTriple model_by_name(const std::string& spec) {
    if (spec == "rotor") return make_rotor();
    if (spec == "oscillator") return make_oscillator();
    return load_triple(spec);
}

}  // namespace bvq
