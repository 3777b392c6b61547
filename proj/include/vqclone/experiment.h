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

#ifndef VQCLONE_EXPERIMENT_H
#define VQCLONE_EXPERIMENT_H

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqclone/optimizer.h"

namespace vqclone {

inline constexpr const char *kManifestSchema = "vqclone.manifest/1";
inline constexpr const char *kTraceSchema = "vqclone.trace/1";
inline constexpr const char *kParamsSchema = "vqclone.params/1";

/// Collects every schema problem found in a config before reporting.
class ConfigError : public std::runtime_error {
   public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string> &problems() const {
        return problems_;
    }

   private:
    std::vector<std::string> problems_;
};

struct ExperimentConfig {
    enum class Kind { PhaseCovariant, StateDependent };

    Kind kind = Kind::PhaseCovariant;
    MeshSpec mesh = MeshSpec::clements(4);
    TrainingSet training_states = phase_covariant_training_set();
    std::optional<StatePair> state_pair;
    std::optional<double> lambda;
    NMConfig optimizer;
    /// Shot budget only; the sampling seed is derived from `seed`.
    std::optional<int64_t> shots;
    uint64_t seed = 0;
    size_t restarts = 20;
    size_t threads = 0;
    size_t validation_count = 50;
    std::optional<std::string> output_dir;

    /// Throws ConfigError listing every problem found.
    static ExperimentConfig from_json(const nlohmann::json &j);
    static ExperimentConfig parse(const std::string &text);

    Task task() const;
    Cloner cloner() const;
    /// NM seed and noise for the master seed.
    NMConfig optimizer_config() const;
    NoiseConfig noise() const;
};

/// Parses `exact` or a positive integer.
std::optional<int64_t> parse_shots(const std::string &text);

std::string sha256_hex(const std::string &bytes);

struct TrainOptions {
    std::optional<uint64_t> seed;
    /// Set to override the config's shot budget; an empty inner value selects exact mode.
    std::optional<std::optional<int64_t>> shots;
    std::optional<std::filesystem::path> out;
};

struct TrainSummary {
    std::filesystem::path run_dir;
    TrainResult result;
    Evaluation best;
};

/// Runs training and writes the run directory. Throws ConfigError on schema problems and
/// std::runtime_error on I/O problems or a non-empty output directory.
TrainSummary cmd_train(const std::filesystem::path &config_path, const TrainOptions &opts, std::ostream &log);

struct ValidateOptions {
    size_t count = 50;
    std::optional<int64_t> shots;
    uint64_t seed = 0;
    std::optional<std::filesystem::path> out;
};

/// Writes the sweep CSV to `<out>/validate.csv` or, without `out`, to `csv`.
std::vector<SweepRow> cmd_validate(const std::filesystem::path &params_path, const ValidateOptions &opts,
                                   std::ostream &csv);

/// Regenerates `report/` from the traces of a completed run.
std::vector<std::filesystem::path> cmd_report(const std::filesystem::path &run_dir);

/// Runs one oracle by name, or all of them for "all". True iff every check passes.
bool cmd_oracle(const std::string &name, std::ostream &out);

struct ParamsFile {
    MeshSpec mesh;
    std::vector<double> phases;
    double best_cost = 0;
};

ParamsFile load_params(const std::filesystem::path &path);

}  // namespace vqclone

#endif
