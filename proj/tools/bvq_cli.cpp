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

// bvq: command line front end. Flags override values from --config.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "bvq/errors.hpp"
#include "bvq/experiments.hpp"

namespace {

struct Flags {
    std::string config_path;
    std::string model;
    int trunc{0};
    std::string levels;
    std::string n;
    int samples_per_period{0};
    std::string out;
    std::uint64_t seed{0};
    std::string mode;
    std::string signal;
    int count{0};
    std::string sizes;
    int initial{0};
    int from{0};
    int to{0};
    int record_every{0};
    double slack{0.0};
};

bvq::RunConfig defaults_for(const std::string& command) {
    bvq::RunConfig c;
    if (command == "reproduce-bounded" || command == "reproduce-unbounded") {
        c.levels = {2, 3, 4, 5, 6};
    }
    if (command == "reproduce-unbounded") c.model = "oscillator";
    return c;
}

bvq::RunConfig resolve(const std::string& command, const Flags& f, const CLI::App& sub) {
    bvq::RunConfig c = defaults_for(command);
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw bvq::ConfigError("cannot open config file '" + f.config_path + "'");
        std::ostringstream text;
        text << in.rdbuf();
        c = bvq::config_from_json(text.str(), c);
    }
    auto given = [&](const char* name) { return sub.count(name) > 0; };
    if (given("--model")) c.model = f.model;
    if (given("--trunc")) c.truncation = f.trunc;
    if (given("--levels")) c.levels = bvq::parse_int_list(f.levels);
    if (given("--n")) {
        const auto ns = bvq::parse_int_list(f.n);
        if (ns.size() == 1) {
            c.n = ns.front();
            c.n_list.clear();
        } else {
            c.n_list = ns;
        }
    }
    if (given("--samples-per-period")) c.samples_per_period = f.samples_per_period;
    if (given("--out")) c.out_dir = f.out;
    if (given("--seed")) c.seed = f.seed;
    if (given("--mode")) c.mode = bvq::parse_schedule(f.mode);
    if (given("--signal")) c.signal_path = f.signal;
    if (given("--count")) c.count = f.count;
    if (given("--sizes")) c.sizes = bvq::parse_int_list(f.sizes);
    if (given("--initial")) c.initial_level = f.initial;
    if (given("--from")) c.from = f.from;
    if (given("--to")) c.to = f.to;
    if (given("--record-every")) c.record_every = f.record_every;
    if (given("--slack")) c.slack = f.slack;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bvq: bilinear quantum control, total variation and energy growth"};
    app.set_version_flag("--version", std::string(bvq::kVersion));
    app.require_subcommand(1);

    Flags f;
    const std::pair<const char*, const char*> commands[] = {
        {"simulate", "propagate a signal file and check the growth bounds"},
        {"synthesize", "design one resonant sine pulse"},
        {"ladder", "design and run a ladder-climbing plan"},
        {"reproduce-bounded", "rotor: M against TV, linear regime"},
        {"reproduce-unbounded", "oscillator: M against TV, exponential regime"},
        {"random-suite", "growth bounds over seeded random admissible controls"},
        {"galerkin", "final-state discrepancy between truncation sizes"},
        {"model-dump", "spectral data and validation report"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", f.config_path, "JSON config mirroring the flags");
        sub->add_option("--model", f.model, "rotor | oscillator | path to a model JSON");
        sub->add_option("--trunc", f.trunc, "Galerkin truncation N");
        sub->add_option("--levels", f.levels, "target level(s): 4, 2..6 or 2,3,5");
        sub->add_option("--n", f.n, "amplitude divisor n (or one per rung, comma separated)");
        sub->add_option("--samples-per-period", f.samples_per_period, "sine samples per period");
        sub->add_option("--out", f.out, "output directory");
        sub->add_option("--seed", f.seed, "random seed");
        sub->add_option("--mode", f.mode, "rung schedule: fixed | peak");
        sub->add_option("--signal", f.signal, "signal JSON file");
        sub->add_option("--count", f.count, "number of random controls");
        sub->add_option("--sizes", f.sizes, "truncation sizes, e.g. 4,6,8,12");
        sub->add_option("--initial", f.initial, "initial level");
        sub->add_option("--from", f.from, "transition lower level");
        sub->add_option("--to", f.to, "transition upper level");
        sub->add_option("--record-every", f.record_every, "record a state every k pieces");
        sub->add_option("--slack", f.slack, "bounded reproduction slack");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return bvq::kExitConfig;
    }

    for (const CLI::App* sub : app.get_subcommands()) {
        const std::string command = sub->get_name();
        try {
            const bvq::RunConfig config = resolve(command, f, *sub);
            return bvq::run_command(command, config, std::cout, std::cerr);
        } catch (const bvq::ConfigError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return bvq::kExitConfig;
        }
    }
    return bvq::kExitConfig;
}
