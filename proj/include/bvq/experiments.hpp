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

// experiments.hpp: reproducible runs behind the `bvq` command line tool.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "bvq/energy.hpp"
#include "bvq/operator_model.hpp"
#include "bvq/propagator.hpp"
#include "bvq/pulse.hpp"

namespace bvq {

inline constexpr const char* kVersion = BVQ_VERSION;

// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitPrecondition = 3,
    kExitAcceptance = 4,
};

struct RunConfig {
    std::string model{"rotor"};
    int truncation{0};             // 0: highest target level + kGuardBand
    std::vector<int> levels{2};    // target levels
    int n{50};
    std::vector<int> n_list;       // per-rung override; empty means n for every rung
    int samples_per_period{400};
    std::string out_dir{"."};
    std::uint64_t seed{7};
    Schedule mode{Schedule::peak};
    std::string signal_path;
    int count{100};
    std::vector<int> sizes{4, 6, 8, 12};
    int initial_level{1};
    int from{1};
    int to{2};
    int record_every{1};
    double slack{0.15};
    int random_truncation{12};

    // Throws ConfigError.
    void validate() const;
    // Ladder-style commands: truncation >= highest level + kGuardBand.
    void validate_truncation() const;
    int truncation_for(int target) const;
    std::vector<int> rung_ns(int target) const;
};

RunConfig config_from_json(const std::string& text, RunConfig base = {});
std::string to_json(const RunConfig& config);

// "2..6", "2-6", "2,3,5" or "4".
std::vector<int> parse_int_list(const std::string& text);

struct ReproductionRow {
    int level{0};
    int truncation{0};
    double m{0.0};               // final A-norm
    double tv{0.0};              // measured total variation
    double predicted_tv{0.0};    // sum of per-rung 2 omega/|b|
    double stated_tv{0.0};       // closed form quoted for the model (4N^2 or 2 log(N+1))
    double coefficient{0.0};     // ||B^(N)|| (bounded) or a (unbounded)
    double rhs{0.0};             // quantity M is compared with
    double ratio{0.0};           // M / TV
    bool pass{true};
    std::vector<double> rung_population;
};

struct ReproductionReport {
    std::string kind;  // "bounded" or "unbounded"
    std::vector<ReproductionRow> rows;
    double slope{0.0};
    double intercept{0.0};
    double fit_residual{0.0};
    bool tv_increasing{true};
    bool concave{true};
    bool stated_constants_hold{true};
    std::vector<std::string> failures;

    bool passed() const noexcept { return failures.empty(); }
};

// Ladder on the rotor for each level; row passes when M >= (1 - slack)(||B^(N)||/4) TV.
ReproductionReport reproduce_bounded(const RunConfig& config);
// Ladder on the oscillator for each level; least-squares fit of log(M + 6) on TV.
ReproductionReport reproduce_unbounded(const RunConfig& config);

std::string to_json(const ReproductionReport& report);
void write_reproduction_csv(std::ostream& out, const ReproductionReport& report);

// Uniform values within 80% of the amplitude limit (80% of 1 when unlimited),
// 10-200 pieces, total duration in [0.01, 1].
ControlSignal random_control(std::mt19937_64& rng, double amplitude_limit);

// The check that decides pass/fail for one run: bounded with ||B^(N)|| when a = 0,
// unbounded with delta = 1 - a max|u| otherwise.
BoundReport primary_bound(const OperatorTriple& triple, const PropagationResult& result);

struct RandomSuiteSummary {
    int count{0};
    int violations{0};
    double worst_margin{0.0};
    int worst_index{-1};
    std::vector<BoundReport> reports;
};

RandomSuiteSummary random_bound_suite(const OperatorTriple& triple, int n_trunc, int count,
                                      std::uint64_t seed);

// Trajectory CSV: t,u, re/im of each coefficient, populations, anorm, energy.
// u is the value on [t, next t); the last row repeats the final piece's value.
void write_trajectory_csv(std::ostream& out, const OperatorTriple& triple,
                          const PropagationResult& result);

// Timestamp comment line that heads every emitted CSV.
std::string csv_banner();

// Runs one subcommand (simulate, synthesize, ladder, reproduce-bounded,
// reproduce-unbounded, random-suite, galerkin, model-dump), writing artifacts under
// config.out_dir. Returns an ExitCode; errors are reported on `err`.
int run_command(const std::string& command, const RunConfig& config, std::ostream& out,
                std::ostream& err);

}  // namespace bvq
