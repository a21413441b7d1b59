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

#include "bvq/control_signal.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bvq/errors.hpp"

namespace bvq {

ControlSignal::ControlSignal(std::vector<double> breakpoints, std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("ControlSignal: need at least one piece");
    if (breakpoints_.size() != values_.size() + 1) {
        throw std::invalid_argument("ControlSignal: expected one more breakpoint than values");
    }
    if (breakpoints_.front() != 0.0) {
        throw std::invalid_argument("ControlSignal: first breakpoint must be 0");
    }
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
        if (!(breakpoints_[i] > breakpoints_[i - 1])) {
            throw std::invalid_argument("ControlSignal: breakpoints must be strictly increasing");
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::invalid_argument("ControlSignal: non-finite value");
    }
}

ControlSignal ControlSignal::uniform(double step, std::vector<double> values) {
    if (!(step > 0.0)) throw std::invalid_argument("ControlSignal::uniform: step must be > 0");
    std::vector<double> bps(values.size() + 1);
    for (std::size_t i = 0; i < bps.size(); ++i) bps[i] = static_cast<double>(i) * step;
    return ControlSignal(std::move(bps), std::move(values));
}

ControlSignal ControlSignal::zero(double duration) {
    return ControlSignal({0.0, duration}, {0.0});
}

double ControlSignal::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::size_t ControlSignal::piece_index(double t) const {
    if (t < 0.0 || t > duration()) throw std::out_of_range("ControlSignal: time outside [0, T]");
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    const auto idx = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
    return std::min(idx, values_.size()) - 1;
}

double ControlSignal::value_at(double t) const { return values_[piece_index(t)]; }

ControlSignal ControlSignal::prefix(std::size_t count) const {
    if (count < 1 || count > pieces()) throw std::out_of_range("ControlSignal::prefix: bad count");
    return ControlSignal(std::vector<double>(breakpoints_.begin(), breakpoints_.begin() + count + 1),
                         std::vector<double>(values_.begin(), values_.begin() + count));
}

double internal_variation(const ControlSignal& s) {
    const auto& v = s.values();
    double tv = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
    return tv;
}

double total_variation(const ControlSignal& s) {
    return std::abs(s.values().front()) + internal_variation(s);
}

double lp_norm(const ControlSignal& s, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double sum = 0.0;
    for (std::size_t i = 0; i < s.pieces(); ++i) {
        sum += std::pow(std::abs(s.values()[i]), p) * s.piece_length(i);
    }
    return std::pow(sum, 1.0 / p);
}

ControlSignal sample_sine(const SinePulseSpec& spec) {
    if (!(spec.step > 0.0)) throw std::invalid_argument("sample_sine: step must be > 0");
    if (!(spec.duration > 0.0)) throw std::invalid_argument("sample_sine: duration must be > 0");
    if (!(spec.omega > 0.0)) throw std::invalid_argument("sample_sine: omega must be > 0");
    if (!(spec.amplitude >= 0.0)) throw std::invalid_argument("sample_sine: amplitude must be >= 0");
    if (!(spec.step < std::numbers::pi / spec.omega)) {
        throw std::invalid_argument("sample_sine: step must be below half a period");
    }
    const auto count =
        std::max<long long>(1, std::llround(spec.duration / spec.step));

    const double period = 2.0 * std::numbers::pi / spec.omega;
    const double per_period = period / spec.step;
    const long long grid = std::llround(per_period);
    const bool commensurate = std::abs(per_period - static_cast<double>(grid)) <= 1e-9 * per_period;

    std::vector<double> values(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        double phase;
        if (commensurate) {
            phase = 2.0 * std::numbers::pi * (static_cast<double>(i % grid) + 0.5) /
                    static_cast<double>(grid);
        } else {
            phase = spec.omega * (static_cast<double>(i) + 0.5) * spec.step;
        }
        values[static_cast<std::size_t>(i)] = spec.amplitude * std::sin(phase);
    }
    return ControlSignal::uniform(spec.step, std::move(values));
}

ControlSignal concat(const ControlSignal& s1, const ControlSignal& s2) {
    std::vector<double> bps = s1.breakpoints();
    std::vector<double> vals = s1.values();
    const double shift = s1.duration();
    std::size_t i = 0;
    if (vals.back() == s2.values().front()) {
        bps.back() = shift + s2.breakpoints()[1];
        i = 1;
    }
    for (; i < s2.pieces(); ++i) {
        vals.push_back(s2.values()[i]);
        bps.push_back(shift + s2.breakpoints()[i + 1]);
    }
    return ControlSignal(std::move(bps), std::move(vals));
}

ControlSignal scale(const ControlSignal& s, double c) {
    std::vector<double> vals = s.values();
    for (double& v : vals) v *= c;
    return ControlSignal(s.breakpoints(), std::move(vals));
}

std::complex<double> fourier_coefficient(const ControlSignal& s, double gap) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < s.pieces(); ++i) {
        const double a = s.breakpoints()[i];
        const double b = s.breakpoints()[i + 1];
        const double h = b - a;
        const double x = 0.5 * gap * h;
        const double sinc = (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        acc += s.values()[i] * h * sinc * std::polar(1.0, 0.5 * gap * (a + b));
    }
    return acc;
}

ControlSignal signal_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("signal file: ") + e.what());
    }
    try {
        const std::string type = doc.at("type").get<std::string>();
        if (type == "piecewise_constant") {
            return ControlSignal(doc.at("breakpoints").get<std::vector<double>>(),
                                 doc.at("values").get<std::vector<double>>());
        }
        if (type == "sine") {
            return sample_sine({doc.at("amplitude").get<double>(), doc.at("omega").get<double>(),
                                doc.at("duration").get<double>(), doc.at("step").get<double>()});
        }
        throw ConfigError("signal file: unknown type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("signal file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("signal file: ") + e.what());
    }
}

ControlSignal load_signal(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open signal file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return signal_from_json(buffer.str());
}

std::string signal_to_json(const ControlSignal& s) {
    nlohmann::json doc;
    doc["type"] = "piecewise_constant";
    doc["breakpoints"] = s.breakpoints();
    doc["values"] = s.values();
    return doc.dump();
}

void save_signal(const ControlSignal& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << signal_to_json(s) << '\n';
}

void write_signal_csv(std::ostream& out, const ControlSignal& s) {
    const auto old = out.precision(17);
    out << "t,u\n";
    for (std::size_t i = 0; i < s.pieces(); ++i) {
        out << s.breakpoints()[i] << ',' << s.values()[i] << '\n';
    }
    out << s.duration() << ',' << s.values().back() << '\n';
    out.precision(old);
}

}  // namespace bvq
