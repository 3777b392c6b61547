// Copyright 2026 The vqclone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>

#include "vqclone/experiment.h"
#include "vqclone/oracles.h"

using namespace vqclone;

// Exit codes: 0 success, 1 failed check, 2 bad input.
int main(int argc, char **argv) {
    CLI::App app{"Variational photonic cloner: train, validate, report, oracle"};
    app.require_subcommand(1);

    std::string config, params, run_dir, oracle_name, shots, out;
    uint64_t seed = 0;
    size_t count = 50;

    auto *train = app.add_subcommand("train", "Train a cloner and write a run directory");
    train->add_option("--config", config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    train->add_option("--seed", seed, "Master seed (overrides the config)");
    train->add_option("--shots", shots, "Trials per state and evaluation, or 'exact'");
    train->add_option("--out", out, "Run directory (overrides the config)");

    auto *validate = app.add_subcommand("validate", "Sweep equatorial states with trained parameters");
    validate->add_option("--params", params, "params.json from a training run")->required();
    validate->add_option("--count", count, "Number of equatorial states")->check(CLI::PositiveNumber);
    validate->add_option("--seed", seed, "Sampling seed");
    validate->add_option("--shots", shots, "Trials per state, or 'exact' (default)");
    validate->add_option("--out", out, "Write <out>/validate.csv instead of stdout");

    auto *report = app.add_subcommand("report", "Regenerate plot-ready series from a run's traces");
    report->add_option("--run", run_dir, "Completed run directory")->required();

    auto *oracle_cmd = app.add_subcommand("oracle", "Run reference checks");
    std::string oracle_help = "One of: all";
    for (const auto &n : oracle::names()) oracle_help += ", " + n;
    oracle_cmd->add_option("name", oracle_name, oracle_help)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            TrainOptions opts;
            if (train->count("--seed")) opts.seed = seed;
            if (!shots.empty()) opts.shots = parse_shots(shots);
            if (!out.empty()) opts.out = out;
            const TrainSummary s = cmd_train(config, opts, std::cout);
            std::cout << "wrote " << s.run_dir.string() << "\n";
            return 0;
        }
        if (validate->parsed()) {
            ValidateOptions opts;
            opts.count = count;
            opts.seed = seed;
            if (!shots.empty()) opts.shots = parse_shots(shots);
            if (!out.empty()) opts.out = out;
            const auto rows = cmd_validate(params, opts, std::cout);
            double worst = 1;
            for (const auto &r : rows) worst = std::min({worst, r.outcome.f1, r.outcome.f2});
            (opts.out ? std::cout : std::cerr) << "min(F1, F2) over " << rows.size() << " states: " << worst << "\n";
            return 0;
        }
        if (report->parsed()) {
            for (const auto &p : cmd_report(run_dir)) std::cout << "wrote " << p.string() << "\n";
            return 0;
        }
        if (oracle_cmd->parsed()) {
            const auto &names = oracle::names();
            if (oracle_name != "all" && std::find(names.begin(), names.end(), oracle_name) == names.end()) {
                std::cerr << "unknown oracle '" << oracle_name << "'\n";
                return 2;
            }
            return cmd_oracle(oracle_name, std::cout) ? 0 : 1;
        }
    } catch (const ConfigError &e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
