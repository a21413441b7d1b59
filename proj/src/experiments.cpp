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

#include "bvq/experiments.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "bvq/errors.hpp"

namespace bvq {

namespace fs = std::filesystem;
using nlohmann::json;

// ----------------------------------------------------------------------------- config

void RunConfig::validate() const {
    if (samples_per_period < 16) throw ConfigError("samples per period must be >= 16");
    if (levels.empty()) throw ConfigError("level list is empty");
    for (int l : levels) {
        if (l < 1) throw ConfigError("target levels must be >= 1");
    }
    if (n < 1) throw ConfigError("n must be >= 1");
    for (int v : n_list) {
        if (v < 1) throw ConfigError("per-rung n values must be >= 1");
    }
    if (truncation < 0) throw ConfigError("truncation must be positive");
    if (count < 1) throw ConfigError("count must be >= 1");
    if (record_every < 1) throw ConfigError("record interval must be >= 1");
    if (!(slack >= 0.0 && slack < 1.0)) throw ConfigError("slack must lie in [0, 1)");
    if (initial_level < 1) throw ConfigError("initial level must be >= 1");
    if (from < 1 || to < 1 || from == to) throw ConfigError("transition needs distinct levels >= 1");
    if (random_truncation < 1) throw ConfigError("random-suite truncation must be >= 1");
}

void RunConfig::validate_truncation() const {
    if (truncation == 0) return;
    const int top = *std::max_element(levels.begin(), levels.end());
    if (truncation < top + kGuardBand) {
        throw ConfigError("truncation " + std::to_string(truncation) +
                          " must be at least target level " + std::to_string(top) + " + " +
                          std::to_string(kGuardBand));
    }
}

int RunConfig::truncation_for(int target) const {
    return truncation > 0 ? truncation : target + kGuardBand;
}

std::vector<int> RunConfig::rung_ns(int target) const {
    const auto rungs = static_cast<std::size_t>(std::max(0, target - 1));
    if (n_list.empty()) return std::vector<int>(rungs, n);
    if (n_list.size() < rungs) {
        throw ConfigError("per-rung n list has " + std::to_string(n_list.size()) +
                          " entries, level " + std::to_string(target) + " needs " +
                          std::to_string(rungs));
    }
    return {n_list.begin(), n_list.begin() + static_cast<std::ptrdiff_t>(rungs)};
}

std::vector<int> parse_int_list(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("cannot parse integer list '" + text + "'");
        }
    };
    std::vector<int> out;
    for (const std::string sep : {"..", "-"}) {
        const auto pos = text.find(sep, sep == "-" ? 1 : 0);
        if (pos != std::string::npos && pos > 0) {
            const int lo = to_int(text.substr(0, pos));
            const int hi = to_int(text.substr(pos + sep.size()));
            if (hi < lo) throw ConfigError("empty range '" + text + "'");
            for (int v = lo; v <= hi; ++v) out.push_back(v);
            return out;
        }
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(to_int(item));
    }
    return out;
}

RunConfig config_from_json(const std::string& text, RunConfig base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    try {
        RunConfig c = std::move(base);
        auto int_list = [](const json& v) {
            if (v.is_string()) return parse_int_list(v.get<std::string>());
            if (v.is_number_integer()) return std::vector<int>{v.get<int>()};
            return v.get<std::vector<int>>();
        };
        if (doc.contains("model")) c.model = doc["model"].get<std::string>();
        if (doc.contains("trunc")) c.truncation = doc["trunc"].get<int>();
        if (doc.contains("levels")) c.levels = int_list(doc["levels"]);
        if (doc.contains("n")) {
            if (doc["n"].is_array()) {
                c.n_list = doc["n"].get<std::vector<int>>();
            } else {
                c.n = doc["n"].get<int>();
            }
        }
        if (doc.contains("samples_per_period")) c.samples_per_period = doc["samples_per_period"].get<int>();
        if (doc.contains("out")) c.out_dir = doc["out"].get<std::string>();
        if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("mode")) c.mode = parse_schedule(doc["mode"].get<std::string>());
        if (doc.contains("signal")) c.signal_path = doc["signal"].get<std::string>();
        if (doc.contains("count")) c.count = doc["count"].get<int>();
        if (doc.contains("sizes")) c.sizes = int_list(doc["sizes"]);
        if (doc.contains("initial")) c.initial_level = doc["initial"].get<int>();
        if (doc.contains("from")) c.from = doc["from"].get<int>();
        if (doc.contains("to")) c.to = doc["to"].get<int>();
        if (doc.contains("record_every")) c.record_every = doc["record_every"].get<int>();
        if (doc.contains("slack")) c.slack = doc["slack"].get<double>();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
}

std::string to_json(const RunConfig& c) {
    json doc{{"model", c.model},
             {"trunc", c.truncation},
             {"levels", c.levels},
             {"n", c.n},
             {"n_list", c.n_list},
             {"samples_per_period", c.samples_per_period},
             {"out", c.out_dir},
             {"seed", c.seed},
             {"mode", to_string(c.mode)},
             {"signal", c.signal_path},
             {"count", c.count},
             {"sizes", c.sizes},
             {"initial", c.initial_level},
             {"from", c.from},
             {"to", c.to},
             {"record_every", c.record_every},
             {"slack", c.slack}};
    return doc.dump(2);
}

// ----------------------------------------------------------------------- reproductions

namespace {

struct LadderRun {
    int level;
    int truncation;
    PulsePlan plan;
    PlanMeasurement measurement;
    double b_norm;
};

LadderRun run_ladder(const OperatorTriple& triple, const RunConfig& config, int level) {
    const int trunc = config.truncation_for(level);
    Ladder ladder = ladder_plan(triple, level, config.rung_ns(level), config.samples_per_period,
                                DesignOptions{trunc});
    PlanMeasurement m = measure_plan(triple, trunc, ladder.plan, config.mode);
    const double b_norm = operator_norm(compress(triple, trunc).b_matrix);
    return {level, trunc, std::move(ladder.plan), std::move(m), b_norm};
}

// Ladders for every requested level, run concurrently.
std::vector<LadderRun> run_ladders(const OperatorTriple& triple, const RunConfig& config) {
    std::vector<std::future<LadderRun>> jobs;
    for (int level : config.levels) {
        jobs.push_back(std::async(std::launch::async, [&triple, &config, level] {
            return run_ladder(triple, config, level);
        }));
    }
    std::vector<LadderRun> runs;
    for (auto& j : jobs) runs.push_back(j.get());
    std::sort(runs.begin(), runs.end(),
              [](const LadderRun& a, const LadderRun& b) { return a.level < b.level; });
    return runs;
}

ReproductionRow base_row(const LadderRun& run) {
    ReproductionRow row;
    row.level = run.level;
    row.truncation = run.truncation;
    row.m = run.measurement.final_anorm;
    row.tv = run.measurement.tv;
    row.predicted_tv = run.plan.predicted_tv;
    row.ratio = row.tv > 0.0 ? row.m / row.tv : std::numeric_limits<double>::infinity();
    row.rung_population = run.measurement.rung_population;
    return row;
}

}  // namespace

ReproductionReport reproduce_bounded(const RunConfig& config) {
    config.validate();
    config.validate_truncation();
    if (config.model != "rotor") {
        throw ConfigError("reproduce-bounded runs on the rotor model, got '" + config.model + "'");
    }
    const OperatorTriple triple = make_rotor();
    ReproductionReport report;
    report.kind = "bounded";
    for (const LadderRun& run : run_ladders(triple, config)) {
        ReproductionRow row = base_row(run);
        const double level = run.level;
        row.stated_tv = 4.0 * level * level;
        row.coefficient = run.b_norm;
        row.rhs = (1.0 - config.slack) * (run.b_norm / 4.0) * row.tv;
        row.pass = std::isfinite(row.m) && row.m >= row.rhs;
        if (!(row.m >= (run.b_norm / 4.0) * row.tv)) report.stated_constants_hold = false;
        if (!row.pass) {
            std::ostringstream msg;
            msg << "level " << run.level << ": M = " << row.m << " < " << row.rhs;
            report.failures.push_back(msg.str());
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

ReproductionReport reproduce_unbounded(const RunConfig& config) {
    config.validate();
    config.validate_truncation();
    if (config.model != "oscillator") {
        throw ConfigError("reproduce-unbounded runs on the oscillator model, got '" +
                          config.model + "'");
    }
    const OperatorTriple triple = make_oscillator();
    const double a = triple.relative_bound().a;
    constexpr double kOffset = 6.0;
    ReproductionReport report;
    report.kind = "unbounded";
    for (const LadderRun& run : run_ladders(triple, config)) {
        ReproductionRow row = base_row(run);
        row.stated_tv = 2.0 * std::log(run.level + 1.0);
        row.coefficient = a;
        row.rhs = 4.0 * std::exp(std::sqrt(2.0 / 3.0) * a * row.tv) - kOffset;
        row.pass = std::isfinite(row.m) && std::isfinite(row.tv);
        if (!(row.m >= row.rhs)) report.stated_constants_hold = false;
        if (!row.pass) report.failures.push_back("level " + std::to_string(run.level) + ": non-finite result");
        report.rows.push_back(std::move(row));
    }

    const auto& rows = report.rows;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].tv > rows[i - 1].tv)) report.tv_increasing = false;
    }
    if (!report.tv_increasing) report.failures.push_back("measured TV does not grow with level");

    if (rows.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (const auto& r : rows) {
            mx += r.tv;
            my += std::log(r.m + kOffset);
        }
        mx /= rows.size();
        my /= rows.size();
        double sxx = 0.0, sxy = 0.0;
        for (const auto& r : rows) {
            sxx += (r.tv - mx) * (r.tv - mx);
            sxy += (r.tv - mx) * (std::log(r.m + kOffset) - my);
        }
        report.slope = sxx > 0.0 ? sxy / sxx : 0.0;
        report.intercept = my - report.slope * mx;
        double ss = 0.0;
        for (const auto& r : rows) {
            const double e = std::log(r.m + kOffset) - (report.intercept + report.slope * r.tv);
            ss += e * e;
        }
        report.fit_residual = std::sqrt(ss / rows.size());
        if (!(report.slope > 0.0)) report.failures.push_back("log-fit slope is not positive");
    } else {
        report.failures.push_back("need at least two levels for the log fit");
    }

    // TV as a function of M should bend downwards: successive slopes dTV/dM, ordered
    // by M, must not increase by more than 5%.
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) pts.emplace_back(r.m, r.tv);
    std::sort(pts.begin(), pts.end());
    std::vector<double> slopes;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dm = pts[i].first - pts[i - 1].first;
        slopes.push_back(dm > 0.0 ? (pts[i].second - pts[i - 1].second) / dm
                                  : std::numeric_limits<double>::infinity());
    }
    for (std::size_t i = 1; i < slopes.size(); ++i) {
        if (!(slopes[i] <= slopes[i - 1] + 0.05 * std::abs(slopes[i - 1]))) report.concave = false;
    }
    if (!report.concave) report.failures.push_back("TV is not concave in M (5% tolerance)");
    return report;
}

std::string to_json(const ReproductionReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"level", r.level},
                        {"truncation", r.truncation},
                        {"M", r.m},
                        {"tv", r.tv},
                        {"predicted_tv", r.predicted_tv},
                        {"stated_tv", r.stated_tv},
                        {"coefficient", r.coefficient},
                        {"rhs", r.rhs},
                        {"ratio", r.ratio},
                        {"pass", r.pass},
                        {"rung_population", r.rung_population}});
    }
    json doc{{"kind", report.kind},
             {"rows", rows},
             {"stated_constants_hold", report.stated_constants_hold},
             {"passed", report.passed()},
             {"failures", report.failures}};
    if (report.kind == "unbounded") {
        doc["fit"] = {{"offset", 6.0},
                      {"slope", report.slope},
                      {"intercept", report.intercept},
                      {"rms_residual", report.fit_residual}};
        doc["tv_increasing"] = report.tv_increasing;
        doc["concave"] = report.concave;
    }
    return doc.dump(2);
}

void write_reproduction_csv(std::ostream& out, const ReproductionReport& report) {
    out << csv_banner();
    out << "level,truncation,M,tv,predicted_tv,stated_tv,coefficient,rhs,ratio,pass\n";
    out << std::setprecision(12);
    for (const auto& r : report.rows) {
        out << r.level << ',' << r.truncation << ',' << r.m << ',' << r.tv << ','
            << r.predicted_tv << ',' << r.stated_tv << ',' << r.coefficient << ',' << r.rhs << ','
            << r.ratio << ',' << (r.pass ? 1 : 0) << '\n';
    }
}

// ----------------------------------------------------------------------- random suite

ControlSignal random_control(std::mt19937_64& rng, double amplitude_limit) {
    const double cap = 0.8 * (std::isfinite(amplitude_limit) ? amplitude_limit : 1.0);
    std::uniform_int_distribution<int> pieces_dist(10, 200);
    std::uniform_real_distribution<double> duration_dist(0.01, 1.0);
    std::uniform_real_distribution<double> value_dist(-cap, cap);
    const int pieces = pieces_dist(rng);
    const double duration = duration_dist(rng);
    std::uniform_real_distribution<double> cut_dist(0.0, duration);
    std::vector<double> bps;
    do {
        bps.assign(1, 0.0);
        for (int i = 1; i < pieces; ++i) bps.push_back(cut_dist(rng));
        bps.push_back(duration);
        std::sort(bps.begin(), bps.end());
    } while (std::adjacent_find(bps.begin(), bps.end()) != bps.end() || bps[1] <= 0.0);
    std::vector<double> values(static_cast<std::size_t>(pieces));
    for (double& v : values) v = value_dist(rng);
    return ControlSignal(std::move(bps), std::move(values));
}

BoundReport primary_bound(const OperatorTriple& triple, const PropagationResult& result) {
    return bound_reports(triple, result).front();
}

RandomSuiteSummary random_bound_suite(const OperatorTriple& triple, int n_trunc, int count,
                                      std::uint64_t seed) {
    if (count < 1) throw ConfigError("random suite count must be >= 1");
    std::mt19937_64 rng(seed);
    RandomSuiteSummary summary;
    summary.count = count;
    summary.worst_margin = std::numeric_limits<double>::infinity();
    Propagator engine(compress(triple, n_trunc));
    const State psi0 = basis_state(n_trunc, 1);
    for (int i = 0; i < count; ++i) {
        const ControlSignal s = random_control(rng, triple.amplitude_limit());
        check_amplitude(triple, s);
        const PropagationResult r = propagate(engine, s, psi0, static_cast<int>(s.pieces()));
        BoundReport b = primary_bound(triple, r);
        if (!b.satisfied) ++summary.violations;
        if (b.margin < summary.worst_margin) {
            summary.worst_margin = b.margin;
            summary.worst_index = i;
        }
        summary.reports.push_back(std::move(b));
    }
    return summary;
}

// ------------------------------------------------------------------------------ output

std::string csv_banner() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::ostringstream s;
    s << "# bvq " << kVersion << " generated " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n';
    return s.str();
}

void write_trajectory_csv(std::ostream& out, const OperatorTriple& triple,
                          const PropagationResult& result) {
    const int n = result.truncation;
    const EnergyTrace tr = trace(triple, result);
    out << csv_banner();
    out << "t,u";
    for (int j = 1; j <= n; ++j) out << ",re_c" << j << ",im_c" << j;
    for (int j = 1; j <= n; ++j) out << ",pop_" << j;
    out << ",anorm,energy\n";
    out << std::setprecision(17);
    const ControlSignal& s = result.signal;
    for (std::size_t r = 0; r < result.times.size(); ++r) {
        const std::size_t piece = std::min(result.piece_marks[r], s.pieces() - 1);
        out << result.times[r] << ',' << s.values()[piece];
        const State& c = result.states[r];
        for (int j = 0; j < n; ++j) out << ',' << c(j).real() << ',' << c(j).imag();
        for (int j = 0; j < n; ++j) out << ',' << tr.populations[r](j);
        out << ',' << tr.anorm[r] << ',' << tr.energy[r] << '\n';
    }
}

// ---------------------------------------------------------------------------- commands

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << content;
    if (content.empty() || content.back() != '\n') f << '\n';
}

fs::path prepare_out(const RunConfig& config, const std::string& command) {
    fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "'");
    json side{{"tool", "bvq"},
              {"version", kVersion},
              {"command", command},
              {"config", json::parse(to_json(config))}};
    write_file(dir / (command + ".run.json"), side.dump(2));
    return dir;
}

int single_level(const RunConfig& config) {
    if (config.levels.size() != 1) throw ConfigError("this command takes a single target level");
    return config.levels.front();
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
    if (config.signal_path.empty()) throw ConfigError("simulate needs --signal <file.json>");
    const OperatorTriple triple = model_by_name(config.model);
    const ControlSignal signal = load_signal(config.signal_path);
    const int n = config.truncation > 0 ? config.truncation
                                        : std::max(config.initial_level, single_level(config)) + kGuardBand;
    if (config.initial_level > n) throw ConfigError("initial level outside truncation");
    const PropagationResult result =
        propagate(triple, n, signal, basis_state(n, config.initial_level), config.record_every);
    const fs::path dir = prepare_out(config, "simulate");
    {
        std::ofstream f(dir / "trajectory.csv");
        write_trajectory_csv(f, triple, result);
    }
    const auto reports = bound_reports(triple, result);
    write_file(dir / "bounds.json", to_json(reports));
    const Eigen::VectorXd lambda = eigenvalues(triple, n);
    out << "model " << triple.name() << ", N = " << n << ", pieces = " << signal.pieces()
        << ", TV = " << total_variation(signal) << '\n'
        << "final anorm " << anorm(lambda, result.final_state()) << ", energy "
        << energy(lambda, result.final_state()) << '\n';
    for (const auto& r : reports) {
        out << "bound (" << (r.kind == BoundCase::bounded ? "bounded" : "unbounded") << ", "
            << r.norm_source << "): " << r.bound_value << " margin " << r.margin
            << (r.satisfied ? " ok" : " VIOLATED") << '\n';
    }
    return kExitOk;
}

int cmd_synthesize(const RunConfig& config, std::ostream& out) {
    const OperatorTriple triple = model_by_name(config.model);
    const double omega =
        std::abs(triple.eigenvalue(config.to) - triple.eigenvalue(config.from));
    if (!(omega > 0.0)) throw DegenerateTransitionError("transition has zero gap");
    const double step = 2.0 * std::numbers::pi / omega / config.samples_per_period;
    DesignOptions opts;
    opts.truncation = config.truncation;
    const DesignedPulse pulse = design_pulse(triple, config.from, config.to, config.n, step, opts);
    PulsePlan plan;
    plan.target = std::max(config.from, config.to);
    plan.rungs.push_back(pulse.design);
    plan.predicted_tv = pulse.design.predicted_tv;
    const fs::path dir = prepare_out(config, "synthesize");
    write_file(dir / "plan.json", to_json(plan));
    save_signal(pulse.signal, (dir / "signal.json").string());
    out << to_json(pulse.design) << '\n'
        << "measured TV of sampled pulse: " << total_variation(pulse.signal) << '\n';
    return kExitOk;
}

int cmd_ladder(const RunConfig& config, std::ostream& out) {
    const OperatorTriple triple = model_by_name(config.model);
    const int target = single_level(config);
    config.validate_truncation();
    const int trunc = config.truncation_for(target);
    const Ladder ladder = ladder_plan(triple, target, config.rung_ns(target),
                                      config.samples_per_period, DesignOptions{trunc});
    const PlanMeasurement m = measure_plan(triple, trunc, ladder.plan, config.mode);
    const fs::path dir = prepare_out(config, "ladder");
    write_file(dir / "plan.json", to_json(ladder.plan));
    if (m.executed) save_signal(*m.executed, (dir / "signal.json").string());
    json result{{"target", target},
                {"truncation", trunc},
                {"mode", to_string(config.mode)},
                {"M", m.final_anorm},
                {"tv", m.tv},
                {"predicted_tv", ladder.plan.predicted_tv},
                {"rung_population", m.rung_population},
                {"rung_anorm", m.rung_anorm},
                {"rung_end_time", m.rung_end_time}};
    write_file(dir / "ladder.json", result.dump(2));
    out << result.dump(2) << '\n';
    return kExitOk;
}

int cmd_reproduce(const RunConfig& config, bool bounded, std::ostream& out, std::ostream& err) {
    const ReproductionReport report =
        bounded ? reproduce_bounded(config) : reproduce_unbounded(config);
    const std::string name = bounded ? "reproduce-bounded" : "reproduce-unbounded";
    const fs::path dir = prepare_out(config, name);
    {
        std::ofstream f(dir / "reproduction.csv");
        write_reproduction_csv(f, report);
    }
    write_file(dir / "reproduction.json", to_json(report));
    out << std::setprecision(6);
    out << "level      M          TV        ratio M/TV   rhs        pass\n";
    for (const auto& r : report.rows) {
        out << std::setw(5) << r.level << "  " << std::setw(9) << r.m << "  " << std::setw(9)
            << r.tv << "  " << std::setw(9) << r.ratio << "  " << std::setw(9) << r.rhs << "  "
            << (r.pass ? "yes" : "no") << '\n';
    }
    if (!bounded) {
        out << "log(M + 6) = " << report.intercept << " + " << report.slope << " TV  (rms "
            << report.fit_residual << ")\n";
        out << "stated closed forms (2 log(N+1) for TV, 4 exp(sqrt(2/3) a TV) - 6 for M) "
            << (report.stated_constants_hold ? "hold" : "do not hold")
            << " on this data; per-rung TV is about 2 omega_j/sqrt(j(j+1/2)), i.e. ~8/j\n";
    } else {
        out << "stated TV closed form 4N^2 is reported next to the exact rung sum 4(N^2-1)\n";
    }
    for (const auto& f : report.failures) err << "FAIL: " << f << '\n';
    return report.passed() ? kExitOk : kExitAcceptance;
}

int cmd_random_suite(const RunConfig& config, std::ostream& out) {
    const OperatorTriple triple = model_by_name(config.model);
    const int n = config.truncation > 0 ? config.truncation : config.random_truncation;
    const RandomSuiteSummary s = random_bound_suite(triple, n, config.count, config.seed);
    const fs::path dir = prepare_out(config, "random-suite");
    json reports = json::array();
    for (const auto& r : s.reports) reports.push_back(json::parse(to_json(r)));
    json doc{{"model", triple.name()},
             {"truncation", n},
             {"count", s.count},
             {"seed", config.seed},
             {"violations", s.violations},
             {"worst_margin", s.worst_margin},
             {"worst_index", s.worst_index},
             {"reports", reports}};
    write_file(dir / "random_suite.json", doc.dump(2));
    out << s.count << " controls, " << s.violations << " violations, worst margin "
        << s.worst_margin << " (control " << s.worst_index << ")\n";
    return s.violations == 0 ? kExitOk : kExitAcceptance;
}

int cmd_galerkin(const RunConfig& config, std::ostream& out) {
    if (config.sizes.size() < 2) throw ConfigError("galerkin needs at least two sizes");
    const OperatorTriple triple = model_by_name(config.model);
    ControlSignal signal = ControlSignal::zero(1.0);
    if (!config.signal_path.empty()) {
        signal = load_signal(config.signal_path);
    } else {
        const double omega =
            std::abs(triple.eigenvalue(config.to) - triple.eigenvalue(config.from));
        DesignOptions opts;
        opts.truncation = std::min(config.sizes.back(), triple.max_truncation());
        signal = design_pulse(triple, config.from, config.to, config.n,
                              2.0 * std::numbers::pi / omega / config.samples_per_period, opts)
                     .signal;
    }
    const State psi0 = basis_state(config.initial_level, config.initial_level);
    const auto rows = galerkin_study(triple, signal, psi0, config.sizes);
    const fs::path dir = prepare_out(config, "galerkin");
    std::ofstream f(dir / "galerkin.csv");
    f << csv_banner() << "N,N',discrepancy,tail_mass\n" << std::setprecision(17);
    out << "N    N'   discrepancy        tail_mass\n";
    for (const auto& r : rows) {
        f << r.n << ',' << r.n_next << ',' << r.discrepancy << ',' << r.tail_mass << '\n';
        out << std::setw(3) << r.n << "  " << std::setw(3) << r.n_next << "  " << std::setw(16)
            << r.discrepancy << "  " << r.tail_mass << '\n';
    }
    return kExitOk;
}

int cmd_model_dump(const RunConfig& config, std::ostream& out) {
    const OperatorTriple triple = model_by_name(config.model);
    const int n = std::min(config.truncation_for(single_level(config)), triple.max_truncation());
    const ValidationReport v = validate(triple, n, 1000, config.seed);
    json lambda = json::array();
    json coupling = json::array();
    for (int j = 1; j <= n; ++j) {
        lambda.push_back(triple.eigenvalue(j));
        for (int k = 1; k <= n; ++k) {
            const Complex b = triple.coupling(j, k);
            if (b != Complex{0.0, 0.0}) coupling.push_back({j, k, b.real(), b.imag()});
        }
    }
    const auto rb = triple.relative_bound();
    json doc{{"name", triple.name()},
             {"truncation", n},
             {"eigenvalues", lambda},
             {"coupling", coupling},
             {"bandwidth", triple.bandwidth()},
             {"relative_bound", {rb.a, rb.b}},
             {"amplitude_limit", std::isfinite(triple.amplitude_limit())
                                     ? json(triple.amplitude_limit())
                                     : json("inf")},
             {"validation",
              {{"positive", v.positive()},
               {"skew_deviation", v.skew_deviation},
               {"bandwidth_violations", v.bandwidth_violations.size()},
               {"samples", v.samples},
               {"worst_bound_margin", v.worst_bound_margin},
               {"measured_b_norm", v.measured_b_norm},
               {"ok", v.ok()}}}};
    const fs::path dir = prepare_out(config, "model-dump");
    write_file(dir / "model.json", doc.dump(2));
    out << doc.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int run_command(const std::string& command, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
    try {
        config.validate();
        if (command == "simulate") return cmd_simulate(config, out);
        if (command == "synthesize") return cmd_synthesize(config, out);
        if (command == "ladder") return cmd_ladder(config, out);
        if (command == "reproduce-bounded") return cmd_reproduce(config, true, out, err);
        if (command == "reproduce-unbounded") return cmd_reproduce(config, false, out, err);
        if (command == "random-suite") return cmd_random_suite(config, out);
        if (command == "galerkin") return cmd_galerkin(config, out);
        if (command == "model-dump") return cmd_model_dump(config, out);
        err << "unknown command '" << command << "'\n";
        return kExitConfig;
    } catch (const AmplitudeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPrecondition;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace bvq
