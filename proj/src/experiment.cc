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

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "vqclone/oracles.h"

#ifndef VQCLONE_VERSION
#define VQCLONE_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace vqclone {

namespace {

constexpr double kPi = std::numbers::pi;

std::string join_problems(const std::vector<std::string> &problems) {
    std::string s = "invalid config:";
    for (const auto &p : problems) {
        s += "\n  " + p;
    }
    return s;
}

bool is_degree_key(const std::string &key) {
    auto ends_with = [&](std::string_view suffix) {
        return key.size() >= suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    return key == "deg" || key == "degrees" || ends_with("_deg") || ends_with("_degrees");
}

// Accumulates schema problems; every accessor returns nullopt after recording a problem.
class Schema {
   public:
    std::vector<std::string> problems;

    void fail(const std::string &where, const std::string &msg) {
        problems.push_back(where + ": " + msg);
    }

    bool object(const json &j, const std::string &where) {
        if (!j.is_object()) {
            fail(where, "expected an object");
            return false;
        }
        return true;
    }

    void allow_keys(const json &obj, const std::string &where, std::initializer_list<std::string_view> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            const std::string &k = it.key();
            if (is_degree_key(k)) {
                fail(path(where, k), "degree inputs are not accepted; give angles in radians (*_rad keys)");
            } else if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
                fail(path(where, k), "unknown key");
            }
        }
    }

    std::optional<double> number(const json &obj, const std::string &key, const std::string &where) {
        const json &v = obj.at(key);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            fail(path(where, key), "expected a finite number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<int64_t> integer(const json &obj, const std::string &key, const std::string &where, int64_t min) {
        const json &v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(path(where, key), "expected an integer");
            return std::nullopt;
        }
        if (v.is_number_unsigned() && v.get<uint64_t>() > static_cast<uint64_t>(INT64_MAX)) {
            fail(path(where, key), "integer too large");
            return std::nullopt;
        }
        const auto x = v.get<int64_t>();
        if (x < min) {
            fail(path(where, key), "must be >= " + std::to_string(min));
            return std::nullopt;
        }
        return x;
    }

    std::optional<QubitState> qubit(const json &j, const std::string &where) {
        if (!object(j, where)) return std::nullopt;
        allow_keys(j, where, {"theta_rad", "phi_rad"});
        if (!j.contains("theta_rad") || !j.contains("phi_rad")) {
            fail(where, "needs theta_rad and phi_rad");
            return std::nullopt;
        }
        auto theta = number(j, "theta_rad", where);
        auto phi = number(j, "phi_rad", where);
        if (!theta || !phi) return std::nullopt;
        // Out-of-range values are almost always degrees in disguise.
        if (*theta < 0 || *theta > kPi + 1e-12) {
            fail(path(where, "theta_rad"), "must lie in [0, pi] radians");
            return std::nullopt;
        }
        if (std::abs(*phi) > kTwoPi + 1e-12) {
            fail(path(where, "phi_rad"), "must lie in [-2pi, 2pi] radians");
            return std::nullopt;
        }
        return QubitState{*theta, *phi};
    }

    static std::string path(const std::string &where, const std::string &key) {
        return where.empty() ? key : where + "." + key;
    }
};

void parse_optimizer(Schema &s, const json &j, NMConfig &cfg) {
    const std::string where = "optimizer";
    if (!s.object(j, where)) return;
    s.allow_keys(j, where,
                 {"reflection", "expansion", "contraction", "shrink", "initial_edge_rad", "max_iterations",
                  "max_evaluations", "min_diameter", "reboot", "stagnation_window", "stagnation_threshold",
                  "collapse_threshold", "reboot_scale", "max_reboots"});
    auto real = [&](const char *key, double &field) {
        if (!j.contains(key)) return;
        if (auto v = s.number(j, key, where)) field = *v;
    };
    auto count = [&](const char *key, int64_t &field, int64_t min) {
        if (!j.contains(key)) return;
        if (auto v = s.integer(j, key, where, min)) field = *v;
    };
    real("reflection", cfg.reflection);
    real("expansion", cfg.expansion);
    real("contraction", cfg.contraction);
    real("shrink", cfg.shrink);
    real("initial_edge_rad", cfg.initial_edge);
    real("min_diameter", cfg.min_diameter);
    real("stagnation_threshold", cfg.stagnation_threshold);
    real("collapse_threshold", cfg.collapse_threshold);
    real("reboot_scale", cfg.reboot_scale);
    count("max_iterations", cfg.max_iterations, 0);
    count("max_evaluations", cfg.max_evaluations, 1);
    count("stagnation_window", cfg.stagnation_window, 1);
    count("max_reboots", cfg.max_reboots, 0);
    if (j.contains("reboot")) {
        if (j["reboot"].is_boolean()) {
            cfg.reboot_enabled = j["reboot"].get<bool>();
        } else {
            s.fail("optimizer.reboot", "expected true or false");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument &e) {
        s.fail(where, e.what());
    }
}

json qubit_json(const QubitState &q) {
    return {{"theta_rad", q.theta}, {"phi_rad", q.phi}};
}

json outcome_json(const CloningOutcome &o) {
    return {{"F1", o.f1}, {"F2", o.f2}, {"P_post", o.p_post}};
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path &p, const std::string &bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << bytes;
    out.close();
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::ostringstream csv_stream() {
    std::ostringstream s;
    s << std::setprecision(15);
    return s;
}

json shots_json(const std::optional<int64_t> &shots) {
    return shots ? json(*shots) : json("exact");
}

std::string restart_trace_name(size_t r) {
    std::ostringstream s;
    s << "traces/restart_" << std::setw(3) << std::setfill('0') << r << ".jsonl";
    return s.str();
}

void write_manifest(const fs::path &dir, const json &manifest) {
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

json read_manifest(const fs::path &dir) {
    const fs::path p = dir / "manifest.json";
    if (!fs::exists(p)) {
        throw std::runtime_error(dir.string() + " is not a run directory (no manifest.json)");
    }
    json m = json::parse(read_file(p));
    if (m.value("schema", "") != kManifestSchema) {
        throw std::runtime_error(p.string() + ": unsupported manifest schema");
    }
    return m;
}

// Adds files to the manifest listing; rewrites only when the listing changes.
void register_files(const fs::path &dir, const std::vector<std::string> &files) {
    json m = read_manifest(dir);
    std::set<std::string> listed;
    for (const auto &f : m["files"]) listed.insert(f.get<std::string>());
    const size_t before = listed.size();
    listed.insert(files.begin(), files.end());
    if (listed.size() == before) return;
    m["files"] = std::vector<std::string>(listed.begin(), listed.end());
    write_manifest(dir, m);
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {
}

ExperimentConfig ExperimentConfig::from_json(const json &j) {
    Schema s;
    ExperimentConfig cfg;
    if (!s.object(j, "config")) throw ConfigError(s.problems);
    s.allow_keys(j, "",
                 {"task", "mesh", "training_states", "state_pair", "lambda", "optimizer", "noise", "seed",
                  "restarts", "threads", "validation_count", "output_dir", "angle_unit"});

    if (j.contains("angle_unit") && j["angle_unit"] != "rad") {
        s.fail("angle_unit", "only \"rad\" is accepted; degree inputs are rejected");
    }

    if (!j.contains("task")) {
        s.fail("task", "required (\"pc\" or \"sd\")");
    } else if (j["task"] == "pc") {
        cfg.kind = Kind::PhaseCovariant;
    } else if (j["task"] == "sd") {
        cfg.kind = Kind::StateDependent;
    } else {
        s.fail("task", "must be \"pc\" or \"sd\"");
    }

    if (j.contains("mesh")) {
        const json &m = j["mesh"];
        if (m == "clements4") {
            cfg.mesh = MeshSpec::clements(4);
        } else if (m.is_object()) {
            try {
                cfg.mesh = m.get<MeshSpec>();
                cfg.mesh.validate();
            } catch (const std::exception &e) {
                s.fail("mesh", e.what());
            }
        } else {
            s.fail("mesh", "expected \"clements4\" or an inline mesh object");
        }
        try {
            RailMap::defaults().validate(cfg.mesh.mode_count);
        } catch (const std::exception &e) {
            s.fail("mesh", std::string("does not fit the dual-rail layout: ") + e.what());
        }
    }

    const bool pc = cfg.kind == Kind::PhaseCovariant;
    if (j.contains("training_states")) {
        if (!pc) {
            s.fail("training_states", "only valid for task \"pc\"");
        } else if (!j["training_states"].is_array() || j["training_states"].empty()) {
            s.fail("training_states", "expected a non-empty array");
        } else {
            cfg.training_states.clear();
            for (size_t k = 0; k < j["training_states"].size(); k++) {
                if (auto q = s.qubit(j["training_states"][k], "training_states[" + std::to_string(k) + "]")) {
                    cfg.training_states.push_back(*q);
                }
            }
        }
    }

    if (j.contains("state_pair")) {
        const json &p = j["state_pair"];
        if (pc) {
            s.fail("state_pair", "only valid for task \"sd\"");
        } else if (p.is_string()) {
            for (const auto &d : default_state_pairs()) {
                if (d.label == p.get<std::string>()) cfg.state_pair = d;
            }
            if (!cfg.state_pair) {
                std::string known;
                for (const auto &d : default_state_pairs()) known += " " + d.label;
                s.fail("state_pair", "unknown default pair; known:" + known);
            }
        } else if (s.object(p, "state_pair")) {
            s.allow_keys(p, "state_pair", {"label", "a", "b"});
            if (!p.contains("a") || !p.contains("b")) {
                s.fail("state_pair", "needs states a and b");
            } else {
                auto a = s.qubit(p["a"], "state_pair.a");
                auto b = s.qubit(p["b"], "state_pair.b");
                std::string label = "custom";
                if (p.contains("label")) {
                    if (p["label"].is_string()) {
                        label = p["label"].get<std::string>();
                    } else {
                        s.fail("state_pair.label", "expected a string");
                    }
                }
                if (a && b) cfg.state_pair = StatePair{label, *a, *b};
            }
        }
    } else if (!pc) {
        s.fail("state_pair", "required for task \"sd\"");
    }

    if (j.contains("lambda")) {
        if (pc) {
            s.fail("lambda", "only valid for task \"sd\"");
        } else if (auto l = s.number(j, "lambda", "")) {
            if (*l < 0) {
                s.fail("lambda", "must be >= 0");
            } else {
                cfg.lambda = *l;
            }
        }
    } else if (!pc) {
        s.fail("lambda", "required for task \"sd\"");
    }

    if (j.contains("optimizer")) {
        parse_optimizer(s, j["optimizer"], cfg.optimizer);
    }

    if (j.contains("noise") && s.object(j["noise"], "noise")) {
        const json &n = j["noise"];
        s.allow_keys(n, "noise", {"shots"});
        if (n.contains("shots")) {
            if (n["shots"] == "exact") {
                cfg.shots.reset();
            } else if (auto v = s.integer(n, "shots", "noise", 1)) {
                cfg.shots = *v;
            }
        }
    }

    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<int64_t>() >= 0)) {
            cfg.seed = j["seed"].get<uint64_t>();
        } else {
            s.fail("seed", "expected an unsigned 64-bit integer");
        }
    }
    if (j.contains("restarts")) {
        if (auto v = s.integer(j, "restarts", "", 1)) cfg.restarts = static_cast<size_t>(*v);
    }
    if (j.contains("threads")) {
        if (auto v = s.integer(j, "threads", "", 0)) cfg.threads = static_cast<size_t>(*v);
    }
    if (j.contains("validation_count")) {
        if (auto v = s.integer(j, "validation_count", "", 1)) cfg.validation_count = static_cast<size_t>(*v);
    }
    if (j.contains("output_dir")) {
        if (j["output_dir"].is_string() && !j["output_dir"].get<std::string>().empty()) {
            cfg.output_dir = j["output_dir"].get<std::string>();
        } else {
            s.fail("output_dir", "expected a non-empty string");
        }
    }

    if (!s.problems.empty()) {
        throw ConfigError(s.problems);
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::parse(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError({std::string("not valid JSON: ") + e.what()});
    }
    return from_json(j);
}

Task ExperimentConfig::task() const {
    if (kind == Kind::PhaseCovariant) {
        return PhaseCovariantTask{training_states};
    }
    return StateDependentTask{state_pair.value(), lambda.value()};
}

Cloner ExperimentConfig::cloner() const {
    return Cloner(mesh, RailMap::defaults());
}

NMConfig ExperimentConfig::optimizer_config() const {
    NMConfig c = optimizer;
    c.seed = derive_seed(seed, 1);
    return c;
}

NoiseConfig ExperimentConfig::noise() const {
    return NoiseConfig{shots, derive_seed(seed, 2)};
}

std::optional<int64_t> parse_shots(const std::string &text) {
    if (text == "exact") {
        return std::nullopt;
    }
    size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used != text.size() || v < 1) {
        throw std::invalid_argument("--shots expects a positive integer or 'exact', got '" + text + "'");
    }
    return v;
}

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::ostringstream s;
    for (unsigned int i = 0; i < len; i++) {
        s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return s.str();
}

TrainSummary cmd_train(const fs::path &config_path, const TrainOptions &opts, std::ostream &log) {
    const std::string raw = read_file(config_path);
    ExperimentConfig cfg = ExperimentConfig::parse(raw);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.shots) cfg.shots = *opts.shots;
    if (!opts.out && !cfg.output_dir) {
        throw ConfigError({"output_dir: not set in the config; pass --out"});
    }
    const fs::path dir = opts.out ? *opts.out : fs::path(*cfg.output_dir);
    if (fs::exists(dir) && !fs::is_empty(dir)) {
        throw std::runtime_error("output directory " + dir.string() + " is not empty");
    }
    fs::create_directories(dir / "traces");

    const Cloner cloner = cfg.cloner();
    const Task task = cfg.task();
    const bool pc = cfg.kind == ExperimentConfig::Kind::PhaseCovariant;
    std::vector<std::string> files{"config.json"};

    json manifest = {{"schema", kManifestSchema},
                     {"version", VQCLONE_VERSION},
                     {"command", "train"},
                     {"config_file", "config.json"},
                     {"config_sha256", sha256_hex(raw)},
                     {"task", pc ? "pc" : "sd"},
                     {"seed", cfg.seed},
                     {"shots", shots_json(cfg.shots)},
                     {"restarts", cfg.restarts},
                     {"started_at", utc_now()},
                     {"finished_at", nullptr},
                     {"complete", false},
                     {"files", files}};
    write_file(dir / "config.json", raw);
    write_manifest(dir, manifest);

    log << "training " << (pc ? "pc" : "sd") << " task: " << cfg.restarts << " restarts, shots "
        << shots_json(cfg.shots).dump() << ", seed " << cfg.seed << "\n";
    TrainSummary out;
    out.run_dir = dir;
    out.result = train(cloner, task, cfg.optimizer_config(), cfg.noise(), cfg.restarts, cfg.threads);
    const OptimizationTrace &best = out.result.best();
    const PhaseVector best_params(best.best_point);
    out.best = evaluate_task(cloner, task, best_params);

    auto restarts_csv = csv_stream();
    restarts_csv << "restart,evaluations,iterations,reboots,termination,best_cost\n";
    for (size_t r = 0; r < out.result.traces.size(); r++) {
        const OptimizationTrace &t = out.result.traces[r];
        std::ostringstream lines;
        for (const EvaluationRecord &rec : t.records) {
            json outcomes = json::array();
            for (const auto &o : rec.outcomes) outcomes.push_back(outcome_json(o));
            lines << json{{"schema", kTraceSchema},     {"restart", r},
                          {"evaluation", rec.evaluation}, {"iteration", rec.iteration},
                          {"point", rec.point},           {"cost", rec.cost},
                          {"best_cost", rec.best_cost},   {"reboot", rec.reboot},
                          {"outcomes", outcomes}}
                         .dump()
                  << "\n";
        }
        files.push_back(restart_trace_name(r));
        write_file(dir / files.back(), lines.str());
        restarts_csv << r << "," << t.evaluations() << "," << t.iterations << "," << t.reboot_iterations.size()
                     << "," << to_string(t.termination) << "," << t.best_cost << "\n";
        log << "  restart " << r << ": best cost " << t.best_cost << " after " << t.evaluations()
            << " evaluations / " << t.iterations << " iterations, " << t.reboot_iterations.size() << " reboots\n";
    }
    files.push_back("restarts.csv");
    write_file(dir / files.back(), restarts_csv.str());

    json task_json;
    if (pc) {
        json states = json::array();
        for (const auto &q : cfg.training_states) states.push_back(qubit_json(q));
        task_json = {{"kind", "pc"}, {"states", states}};
    } else {
        task_json = {{"kind", "sd"},
                     {"pair", {{"label", cfg.state_pair->label}, {"a", qubit_json(cfg.state_pair->a)},
                               {"b", qubit_json(cfg.state_pair->b)}}},
                     {"lambda", *cfg.lambda}};
    }
    const json params = {{"schema", kParamsSchema},
                         {"mesh", cfg.mesh},
                         {"phases_rad", best_params.values()},
                         {"task", task_json},
                         {"best_cost", out.best.cost},
                         {"restart", out.result.best_index}};
    files.push_back("params.json");
    write_file(dir / files.back(), params.dump(2) + "\n");

    // Summary values come from a noiseless evaluation of the best point.
    const TrainingSet states = task_states(task);
    auto summary = csv_stream();
    summary << "state_id,theta_rad,phi_rad,F1,F2,P_post,best_cost\n";
    for (size_t k = 0; k < states.size(); k++) {
        const CloningOutcome &o = out.best.outcomes[k];
        summary << k << "," << states[k].theta << "," << states[k].phi << "," << o.f1 << "," << o.f2 << ","
                << o.p_post << "," << out.best.cost << "\n";
    }
    files.push_back("summary.csv");
    write_file(dir / files.back(), summary.str());

    auto sweep = csv_stream();
    sweep << "state_id,phi_rad,F1,F2,P_post\n";
    const auto rows = validate_sweep(cloner, best_params, cfg.validation_count);
    for (size_t k = 0; k < rows.size(); k++) {
        sweep << k << "," << rows[k].phi << "," << rows[k].outcome.f1 << "," << rows[k].outcome.f2 << ","
              << rows[k].outcome.p_post << "\n";
    }
    files.push_back("sweep.csv");
    write_file(dir / files.back(), sweep.str());

    if (pc) {
        const auto [c1, c2] = pipeline_design_gap(cloner, best_params, 10000);
        auto gap = csv_stream();
        gap << "clone,quadrature,four_point,difference\n";
        gap << "1," << c1.quadrature << "," << c1.four_point << "," << c1.quadrature - c1.four_point << "\n";
        gap << "2," << c2.quadrature << "," << c2.four_point << "," << c2.quadrature - c2.four_point << "\n";
        files.push_back("design_gap.csv");
        write_file(dir / files.back(), gap.str());
    }

    std::sort(files.begin(), files.end());
    manifest["files"] = files;
    manifest["finished_at"] = utc_now();
    manifest["complete"] = true;
    write_manifest(dir, manifest);

    log << "best cost " << out.best.cost << " (restart " << out.result.best_index << ")\n";
    for (size_t k = 0; k < states.size(); k++) {
        log << "  state " << k << ": F1 " << out.best.outcomes[k].f1 << "  F2 " << out.best.outcomes[k].f2
            << "  P_post " << out.best.outcomes[k].p_post << "\n";
    }
    return out;
}

ParamsFile load_params(const fs::path &path) {
    if (!fs::exists(path)) {
        throw std::runtime_error("params file " + path.string() + " does not exist");
    }
    const json j = json::parse(read_file(path));
    if (j.value("schema", "") != kParamsSchema) {
        throw std::runtime_error(path.string() + ": not a params file (schema " + kParamsSchema + ")");
    }
    ParamsFile p;
    p.mesh = j.at("mesh").get<MeshSpec>();
    p.mesh.validate();
    p.phases = j.at("phases_rad").get<std::vector<double>>();
    p.best_cost = j.at("best_cost").get<double>();
    if (p.phases.size() != p.mesh.phase_count()) {
        throw std::runtime_error(path.string() + ": phase count does not match the mesh");
    }
    return p;
}

std::vector<SweepRow> cmd_validate(const fs::path &params_path, const ValidateOptions &opts, std::ostream &csv) {
    const ParamsFile params = load_params(params_path);
    const Cloner cloner(params.mesh);
    const NoiseConfig noise{opts.shots, derive_seed(opts.seed, 2)};
    const auto rows = validate_sweep(cloner, PhaseVector(params.phases), opts.count, noise);

    auto s = csv_stream();
    s << "state_id,phi_rad,F1,F2,P_post,F1_se,F2_se,P_post_se,F_optimal,F_semiclassical\n";
    for (size_t k = 0; k < rows.size(); k++) {
        const SweepRow &r = rows[k];
        s << k << "," << r.phi << "," << r.outcome.f1 << "," << r.outcome.f2 << "," << r.outcome.p_post << ","
          << r.standard_error.f1 << "," << r.standard_error.f2 << "," << r.standard_error.p_post << ","
          << kOptimalPhaseCovariantFidelity << "," << kSemiclassicalFidelity << "\n";
    }
    if (opts.out) {
        fs::create_directories(*opts.out);
        write_file(*opts.out / "validate.csv", s.str());
        if (fs::exists(*opts.out / "manifest.json")) {
            register_files(*opts.out, {"validate.csv"});
        }
    } else {
        csv << s.str();
    }
    return rows;
}

std::vector<fs::path> cmd_report(const fs::path &run_dir) {
    if (!fs::is_directory(run_dir)) {
        throw std::runtime_error(run_dir.string() + " is not a directory");
    }
    const json manifest = read_manifest(run_dir);
    if (!manifest.value("complete", false)) {
        throw std::runtime_error(run_dir.string() + ": run is incomplete");
    }
    if (sha256_hex(read_file(run_dir / manifest.at("config_file").get<std::string>())) !=
        manifest.at("config_sha256").get<std::string>()) {
        throw std::runtime_error(run_dir.string() + ": config.json does not match the manifest hash");
    }
    std::vector<std::string> traces;
    bool has_sweep = false;
    for (const auto &f : manifest.at("files")) {
        const auto name = f.get<std::string>();
        if (name.rfind("traces/", 0) == 0) traces.push_back(name);
        has_sweep |= name == "sweep.csv";
    }
    if (traces.empty()) {
        throw std::runtime_error(run_dir.string() + ": no traces listed in the manifest");
    }

    const char *header = "restart,evaluation,iteration,value,best_so_far,reboot\n";
    auto cost = csv_stream(), f1 = csv_stream(), f2 = csv_stream(), reboots = csv_stream();
    cost << header;
    f1 << header;
    f2 << header;
    reboots << "restart,iteration,evaluation\n";
    for (const auto &name : traces) {
        std::istringstream lines(read_file(run_dir / name));
        std::string line;
        double best_cost = std::numeric_limits<double>::infinity();
        double best_f1 = -1, best_f2 = -1;
        bool in_reboot = false;
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            const json rec = json::parse(line);
            if (rec.value("schema", "") != kTraceSchema) {
                throw std::runtime_error(name + ": unsupported trace schema");
            }
            const auto restart = rec.at("restart").get<int64_t>();
            const auto evaluation = rec.at("evaluation").get<int64_t>();
            const auto iteration = rec.at("iteration").get<int64_t>();
            const bool reboot = rec.at("reboot").get<bool>();
            double mean1 = 0, mean2 = 0;
            const json &outcomes = rec.at("outcomes");
            for (const auto &o : outcomes) {
                mean1 += o.at("F1").get<double>() / static_cast<double>(outcomes.size());
                mean2 += o.at("F2").get<double>() / static_cast<double>(outcomes.size());
            }
            const double c = rec.at("cost").get<double>();
            best_cost = std::min(best_cost, c);
            best_f1 = std::max(best_f1, mean1);
            best_f2 = std::max(best_f2, mean2);
            auto row = [&](std::ostringstream &s, double v, double best) {
                s << restart << "," << evaluation << "," << iteration << "," << v << "," << best << ","
                  << (reboot ? 1 : 0) << "\n";
            };
            row(cost, c, best_cost);
            row(f1, mean1, best_f1);
            row(f2, mean2, best_f2);
            if (reboot && !in_reboot) {
                reboots << restart << "," << iteration << "," << evaluation << "\n";
            }
            in_reboot = reboot;
        }
    }

    fs::create_directories(run_dir / "report");
    std::vector<std::pair<std::string, std::string>> outputs{{"report/cost_series.csv", cost.str()},
                                                             {"report/f1_series.csv", f1.str()},
                                                             {"report/f2_series.csv", f2.str()},
                                                             {"report/reboots.csv", reboots.str()}};
    if (has_sweep) {
        outputs.emplace_back("report/sweep.csv", read_file(run_dir / "sweep.csv"));
    }
    std::vector<std::string> names;
    std::vector<fs::path> written;
    for (const auto &[name, bytes] : outputs) {
        write_file(run_dir / name, bytes);
        names.push_back(name);
        written.push_back(run_dir / name);
    }
    register_files(run_dir, names);
    return written;
}

bool cmd_oracle(const std::string &name, std::ostream &out) {
    if (name != "all") {
        const bool ok = oracle::run_named(name, out);
        out << (ok ? "PASS " : "FAIL ") << name << "\n";
        return ok;
    }
    bool all = true;
    for (const auto &n : oracle::names()) {
        all &= cmd_oracle(n, out);
    }
    return all;
}

}  // namespace vqclone
