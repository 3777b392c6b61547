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

#include "vqclone/experiment.h"

#include <gtest/gtest.h>
#include <unistd.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vqclone;

namespace {

fs::path scratch(const std::string &name) {
    const fs::path p = fs::temp_directory_path() / ("vqclone_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const fs::path &dir, const json &j) {
    const fs::path p = dir / "config_in.json";
    std::ofstream(p) << j.dump(2);
    return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::vector<std::string> problems_of(const json &j) {
    try {
        ExperimentConfig::from_json(j);
    } catch (const ConfigError &e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string> &problems, const std::string &needle) {
    for (const auto &p : problems) {
        if (p.find(needle) != std::string::npos) return true;
    }
    return false;
}

json smoke_pc() {
    return {{"task", "pc"}, {"optimizer", {{"max_evaluations", 300}}}, {"seed", 5}, {"restarts", 2}, {"threads", 1}};
}

}  // namespace

TEST(Config, minimal_pc_defaults) {
    const ExperimentConfig c = ExperimentConfig::from_json({{"task", "pc"}});
    EXPECT_EQ(c.kind, ExperimentConfig::Kind::PhaseCovariant);
    EXPECT_EQ(c.mesh, MeshSpec::clements(4));
    EXPECT_EQ(c.training_states.size(), 4u);
    EXPECT_FALSE(c.shots.has_value());
    EXPECT_EQ(c.restarts, 20u);
    EXPECT_EQ(c.optimizer.max_evaluations, 2500);
    EXPECT_NE(c.optimizer_config().seed, c.noise().seed);
}

TEST(Config, sd_requires_lambda_and_pair) {
    auto p = problems_of({{"task", "sd"}, {"state_pair", "x-y"}});
    EXPECT_TRUE(mentions(p, "lambda: required"));
    p = problems_of({{"task", "sd"}, {"lambda", 1.0}});
    EXPECT_TRUE(mentions(p, "state_pair: required"));
    p = problems_of({{"task", "sd"}, {"lambda", -0.5}, {"state_pair", "nope"}});
    EXPECT_EQ(p.size(), 2u);
    const ExperimentConfig c = ExperimentConfig::from_json({{"task", "sd"}, {"lambda", 0.5}, {"state_pair", "z-close"}});
    EXPECT_EQ(c.state_pair->label, "z-close");
    EXPECT_EQ(std::get<StateDependentTask>(c.task()).lambda, 0.5);
}

TEST(Config, rejects_degree_inputs) {
    auto p = problems_of({{"task", "pc"}, {"training_states", {{{"theta_deg", 45}, {"phi_deg", 0}}}}});
    EXPECT_TRUE(mentions(p, "training_states[0].theta_deg: degree inputs are not accepted"));
    p = problems_of({{"task", "pc"}, {"angle_unit", "deg"}});
    EXPECT_TRUE(mentions(p, "angle_unit"));
    p = problems_of({{"task", "pc"}, {"training_states", {{{"theta_rad", 45}, {"phi_rad", 0}}}}});
    EXPECT_TRUE(mentions(p, "theta_rad: must lie in [0, pi] radians"));
    p = problems_of({{"task", "pc"}, {"optimizer", {{"initial_edge_deg", 30}}}});
    EXPECT_TRUE(mentions(p, "optimizer.initial_edge_deg"));
    EXPECT_TRUE(problems_of({{"task", "pc"}, {"angle_unit", "rad"}}).empty());
}

TEST(Config, rejects_unknown_and_misplaced_keys) {
    auto p = problems_of({{"task", "pc"}, {"restart", 3}});
    EXPECT_TRUE(mentions(p, "restart: unknown key"));
    p = problems_of({{"task", "pc"}, {"lambda", 1.0}});
    EXPECT_TRUE(mentions(p, "only valid for task \"sd\""));
    p = problems_of({{"task", "xx"}});
    EXPECT_TRUE(mentions(p, "task"));
    p = problems_of({{"task", "pc"}, {"optimizer", {{"contraction", 2.0}}}});
    EXPECT_TRUE(mentions(p, "contraction"));
    p = problems_of({{"task", "pc"}, {"noise", {{"shots", 0}}}});
    EXPECT_TRUE(mentions(p, "noise.shots"));
    p = problems_of({{"task", "pc"}, {"mesh", {{"mode_count", 2}, {"phase_count", 2},
                                               {"cells", {{{"column", 0}, {"lower_mode", 0},
                                                           {"internal_phase", 0}, {"external_phase", 1}}}},
                                               {"fixed_couplers", json::array()}}}});
    EXPECT_TRUE(mentions(p, "mesh"));
    EXPECT_THROW(ExperimentConfig::parse("{not json"), ConfigError);
}

TEST(Config, inline_mesh_and_full_seed_range) {
    json j = {{"task", "pc"}, {"mesh", MeshSpec::clements(4)}, {"seed", UINT64_MAX}};
    const ExperimentConfig c = ExperimentConfig::from_json(j);
    EXPECT_EQ(c.mesh, MeshSpec::clements(4));
    EXPECT_EQ(c.seed, UINT64_MAX);
}

TEST(Config, shipped_configs_parse) {
    for (const auto &entry : fs::directory_iterator(fs::path(VQCLONE_SOURCE_DIR) / "configs")) {
        EXPECT_NO_THROW(ExperimentConfig::parse(slurp(entry.path()))) << entry.path();
    }
    EXPECT_THROW(ExperimentConfig::parse(slurp(fs::path(VQCLONE_SOURCE_DIR) / "tests/data/sd_missing_lambda.json")),
                 ConfigError);
}

TEST(Shots, parse) {
    EXPECT_FALSE(parse_shots("exact").has_value());
    EXPECT_EQ(parse_shots("5000"), 5000);
    EXPECT_THROW(parse_shots("0"), std::invalid_argument);
    EXPECT_THROW(parse_shots("12abc"), std::invalid_argument);
    EXPECT_THROW(parse_shots(""), std::invalid_argument);
}

TEST(Sha256, known_vector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Train, run_directory_contents) {
    const fs::path dir = scratch("train");
    std::ostringstream log;
    const TrainSummary s = cmd_train(write_config(dir, smoke_pc()), {.out = dir / "run"}, log);
    const fs::path run = dir / "run";

    const json m = json::parse(slurp(run / "manifest.json"));
    EXPECT_EQ(m["schema"], kManifestSchema);
    EXPECT_TRUE(m["complete"].get<bool>());
    EXPECT_EQ(m["config_sha256"], sha256_hex(slurp(run / "config.json")));
    EXPECT_EQ(slurp(run / "config.json"), slurp(dir / "config_in.json"));
    std::set<std::string> listed;
    for (const auto &f : m["files"]) {
        listed.insert(f.get<std::string>());
        EXPECT_TRUE(fs::exists(run / f.get<std::string>())) << f;
    }
    for (const auto &entry : fs::recursive_directory_iterator(run)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), run).string();
        if (rel != "manifest.json") EXPECT_TRUE(listed.count(rel)) << rel << " missing from manifest";
    }

    for (size_t r = 0; r < 2; r++) {
        std::istringstream lines(slurp(run / ("traces/restart_00" + std::to_string(r) + ".jsonl")));
        std::string line;
        int64_t n = 0;
        while (std::getline(lines, line)) {
            const json rec = json::parse(line);
            EXPECT_EQ(rec["schema"], kTraceSchema);
            EXPECT_EQ(rec["evaluation"], n);
            EXPECT_EQ(rec["outcomes"].size(), 4u);
            n++;
        }
        EXPECT_EQ(n, s.result.traces[r].evaluations());
    }

    // Summary beats the circuit whose mesh does nothing.
    const Cloner cloner;
    const auto summary = read_csv(run / "summary.csv");
    ASSERT_EQ(summary.size(), 5u);
    EXPECT_EQ(summary[0], (std::vector<std::string>{"state_id", "theta_rad", "phi_rad", "F1", "F2", "P_post",
                                                     "best_cost"}));
    double trained = 0, identity = 0;
    for (size_t k = 0; k < 4; k++) {
        trained += std::stod(summary[k + 1][3]) + std::stod(summary[k + 1][4]);
        const CloningOutcome o = cloner.run(UnitaryMatrix::Identity(4, 4), phase_covariant_training_set()[k]).outcome;
        identity += o.f1 + o.f2;
    }
    EXPECT_GE(trained, identity);
    EXPECT_EQ(read_csv(run / "sweep.csv").size(), 51u);

    EXPECT_THROW(cmd_train(dir / "config_in.json", {.out = run}, log), std::runtime_error);
    fs::remove_all(dir);
}

TEST(Train, same_seed_reproduces_summary) {
    const fs::path dir = scratch("repro");
    std::ostringstream log;
    const fs::path cfg = write_config(dir, smoke_pc());
    cmd_train(cfg, {.out = dir / "a"}, log);
    cmd_train(cfg, {.out = dir / "b"}, log);
    cmd_train(cfg, {.seed = 99, .out = dir / "c"}, log);
    EXPECT_EQ(slurp(dir / "a/summary.csv"), slurp(dir / "b/summary.csv"));
    EXPECT_EQ(slurp(dir / "a/traces/restart_001.jsonl"), slurp(dir / "b/traces/restart_001.jsonl"));
    EXPECT_NE(slurp(dir / "a/summary.csv"), slurp(dir / "c/summary.csv"));
    fs::remove_all(dir);
}

TEST(Train, sd_summary_matches_trace_best_point) {
    const fs::path dir = scratch("sd");
    std::ostringstream log;
    const json cfg = {{"task", "sd"},     {"state_pair", "generic"}, {"lambda", 1.0},
                      {"restarts", 2},    {"threads", 1},            {"optimizer", {{"max_evaluations", 400}}}};
    cmd_train(write_config(dir, cfg), {.out = dir / "run"}, log);
    const json params = json::parse(slurp(dir / "run/params.json"));
    const auto restart = params["restart"].get<int>();
    std::istringstream lines(slurp(dir / ("run/traces/restart_00" + std::to_string(restart) + ".jsonl")));
    std::string line;
    json best;
    while (std::getline(lines, line)) {
        const json rec = json::parse(line);
        if (best.is_null() || rec["cost"].get<double>() < best["cost"].get<double>()) best = rec;
    }
    const StatePair pair = default_state_pairs()[3];
    ASSERT_EQ(pair.label, "generic");
    const double recomputed =
        cost_sd(Cloner(), PhaseVector(best["point"].get<std::vector<double>>()), pair.a, pair.b, 1.0);
    const auto summary = read_csv(dir / "run/summary.csv");
    ASSERT_EQ(summary.size(), 3u);
    EXPECT_NEAR(std::stod(summary[1][6]), recomputed, 1e-12);
    EXPECT_NEAR(params["best_cost"].get<double>(), recomputed, 1e-12);
    fs::remove_all(dir);
}

TEST(Train, shots_override_and_missing_output) {
    const fs::path dir = scratch("shots");
    std::ostringstream log;
    const fs::path cfg = write_config(dir, smoke_pc());
    cmd_train(cfg, {.shots = std::optional<int64_t>(200), .out = dir / "run"}, log);
    EXPECT_EQ(json::parse(slurp(dir / "run/manifest.json"))["shots"], 200);
    EXPECT_THROW(cmd_train(cfg, {}, log), ConfigError);
    fs::remove_all(dir);
}

TEST(Validate, count_four_matches_training_states) {
    const fs::path dir = scratch("validate");
    std::ostringstream log;
    cmd_train(write_config(dir, smoke_pc()), {.out = dir / "run"}, log);
    std::ostringstream csv;
    const auto rows = cmd_validate(dir / "run/params.json", {.count = 4}, csv);
    const auto summary = read_csv(dir / "run/summary.csv");
    for (size_t k = 0; k < 4; k++) {
        EXPECT_NEAR(rows[k].outcome.f1, std::stod(summary[k + 1][3]), 1e-13);
        EXPECT_NEAR(rows[k].outcome.f2, std::stod(summary[k + 1][4]), 1e-13);
    }
    std::istringstream in(csv.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "state_id,phi_rad,F1,F2,P_post,F1_se,F2_se,P_post_se,F_optimal,F_semiclassical");

    cmd_validate(dir / "run/params.json", {.count = 50, .out = dir / "run"}, csv);
    EXPECT_EQ(read_csv(dir / "run/validate.csv").size(), 51u);
    const json m = json::parse(slurp(dir / "run/manifest.json"));
    EXPECT_NE(std::find(m["files"].begin(), m["files"].end(), "validate.csv"), m["files"].end());

    const auto noisy = cmd_validate(dir / "run/params.json", {.count = 5, .shots = 10000, .seed = 3}, csv);
    for (const auto &r : noisy) EXPECT_GT(r.standard_error.f1, 0);
    EXPECT_THROW(cmd_validate(dir / "missing.json", {}, csv), std::runtime_error);
    fs::remove_all(dir);
}

TEST(Report, series_are_monotone_and_mark_reboots) {
    const fs::path dir = scratch("report");
    std::ostringstream log;
    json cfg = smoke_pc();
    cfg["optimizer"] = {{"max_evaluations", 1500}, {"stagnation_window", 10}, {"collapse_threshold", 0.5}};
    cfg["noise"] = {{"shots", 300}};
    cmd_train(write_config(dir, cfg), {.out = dir / "run"}, log);
    const auto written = cmd_report(dir / "run");
    EXPECT_EQ(written.size(), 5u);

    for (const char *name : {"cost", "f1", "f2"}) {
        const auto rows = read_csv(dir / "run/report" / (std::string(name) + "_series.csv"));
        ASSERT_GT(rows.size(), 1u);
        EXPECT_EQ(rows[0], (std::vector<std::string>{"restart", "evaluation", "iteration", "value", "best_so_far",
                                                      "reboot"}));
        const bool is_cost = std::string(name) == "cost";
        for (size_t k = 2; k < rows.size(); k++) {
            if (rows[k][0] != rows[k - 1][0]) continue;
            const double prev = std::stod(rows[k - 1][4]), cur = std::stod(rows[k][4]);
            if (is_cost) {
                EXPECT_LE(cur, prev);
            } else {
                EXPECT_GE(cur, prev);
            }
        }
    }
    const auto reboots = read_csv(dir / "run/report/reboots.csv");
    EXPECT_GT(reboots.size(), 1u) << "expected reboot markers";

    const std::string manifest = slurp(dir / "run/manifest.json");
    const std::string series = slurp(dir / "run/report/cost_series.csv");
    cmd_report(dir / "run");
    EXPECT_EQ(slurp(dir / "run/manifest.json"), manifest);
    EXPECT_EQ(slurp(dir / "run/report/cost_series.csv"), series);
    fs::remove_all(dir);
}

TEST(Report, rejects_bad_run_directories) {
    const fs::path dir = scratch("badrun");
    EXPECT_THROW(cmd_report(dir), std::runtime_error);
    EXPECT_THROW(cmd_report(dir / "absent"), std::runtime_error);

    std::ostringstream log;
    cmd_train(write_config(dir, smoke_pc()), {.out = dir / "run"}, log);
    json m = json::parse(slurp(dir / "run/manifest.json"));
    m["complete"] = false;
    std::ofstream(dir / "run/manifest.json") << m.dump();
    EXPECT_THROW(cmd_report(dir / "run"), std::runtime_error);
    m["complete"] = true;
    std::ofstream(dir / "run/manifest.json") << m.dump();
    std::ofstream(dir / "run/config.json", std::ios::app) << " ";
    EXPECT_THROW(cmd_report(dir / "run"), std::runtime_error);
    fs::remove_all(dir);
}

TEST(Oracle, named_checks) {
    std::ostringstream out;
    EXPECT_TRUE(cmd_oracle("design-identity", out));
    EXPECT_NE(out.str().find("PASS design-identity"), std::string::npos);
    EXPECT_THROW(cmd_oracle("nope", out), std::invalid_argument);
}
