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

#ifndef VQCLONE_OPTIMIZER_H
#define VQCLONE_OPTIMIZER_H

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vqclone/cloner.h"
#include "vqclone/sampler.h"

namespace vqclone {

struct NMConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Edge of the initial simplex, in parameter units (radians for phases).
    double initial_edge = 0.5;
    int64_t max_iterations = 1'000'000;
    int64_t max_evaluations = 2500;
    /// Terminate once every vertex lies within this distance of the best vertex.
    double min_diameter = 1e-8;

    bool reboot_enabled = true;
    /// K: iterations inspected by the stagnation test.
    int64_t stagnation_window = 50;
    /// Minimum best-so-far improvement over K iterations that counts as progress.
    double stagnation_threshold = 1e-3;
    /// The simplex counts as collapsed below this diameter.
    double collapse_threshold = 0.05;
    /// Reboot simplex edge = reboot_scale × initial_edge.
    double reboot_scale = 4.0;
    int64_t max_reboots = 8;

    /// Seeds initial points in train(); nelder_mead itself is deterministic.
    uint64_t seed = 0;

    /// Throws std::invalid_argument on inadmissible coefficients or counts.
    void validate() const;
};

/// Cost value plus per-state figures of merit, when the objective has them.
struct Evaluation {
    double cost = 0;
    std::vector<CloningOutcome> outcomes;
};

using Objective = std::function<Evaluation(std::span<const double>)>;
using ScalarObjective = std::function<double(std::span<const double>)>;

struct EvaluationRecord {
    int64_t evaluation = 0;
    int64_t iteration = 0;
    std::vector<double> point;
    double cost = 0;
    double best_cost = 0;
    /// Set on the evaluations that rebuilt the simplex after a reboot.
    bool reboot = false;
    std::vector<CloningOutcome> outcomes;
};

enum class Termination { MaxIterations, MaxEvaluations, SimplexCollapsed, NonFiniteCost };

std::string to_string(Termination t);

struct OptimizationTrace {
    std::vector<EvaluationRecord> records;
    std::vector<double> best_point;
    double best_cost = 0;
    /// Completed NM iterations (initial simplex = iteration 0).
    int64_t iterations = 0;
    std::vector<int64_t> reboot_iterations;
    Termination termination = Termination::MaxIterations;
    std::string diagnostic;

    int64_t evaluations() const {
        return static_cast<int64_t>(records.size());
    }
    const EvaluationRecord &best_record() const;
};

/// Nelder–Mead with reflection, expansion, outside/inside contraction and shrink. Ties in the
/// vertex ordering go to the lowest vertex index. Records every cost evaluation. A non-finite
/// cost stops the run with Termination::NonFiniteCost and a diagnostic.
OptimizationTrace nelder_mead(const Objective &cost, std::vector<double> init, const NMConfig &cfg);
OptimizationTrace nelder_mead(const ScalarObjective &cost, std::vector<double> init, const NMConfig &cfg);

/// Stagnation reboot rule. `best_tail` holds the best-so-far cost at the end of every
/// iteration since the last reboot (front = value at that reboot or at the start).
bool reboot_policy(std::span<const double> best_tail, double diameter, int64_t reboots_done, const NMConfig &cfg);

/// Max Euclidean distance from vertex `best` to the others.
double simplex_diameter(std::span<const std::vector<double>> vertices, size_t best);

struct PhaseCovariantTask {
    TrainingSet states = phase_covariant_training_set();
};

struct StateDependentTask {
    StatePair pair;
    double lambda = 1.0;
};

using Task = std::variant<PhaseCovariantTask, StateDependentTask>;

TrainingSet task_states(const Task &task);

/// Cost of a task from per-state outcomes (in task_states order).
double task_cost(const Task &task, std::span<const CloningOutcome> outcomes);

/// Noiseless evaluation through reduced density matrices.
Evaluation evaluate_task(const Cloner &cloner, const Task &task, const PhaseVector &params);

/// Objective over unwrapped phases. With shot noise every evaluation draws fresh counts from an
/// independent seed stream. `run_counter`, if given, is incremented once per single-state device run.
Objective make_objective(
    const Cloner &cloner, const Task &task, const NoiseConfig &noise, std::atomic<int64_t> *run_counter = nullptr);

struct TrainResult {
    std::vector<OptimizationTrace> traces;
    size_t best_index = 0;

    const OptimizationTrace &best() const {
        return traces.at(best_index);
    }
};

/// Independent seeded restarts from uniform random points on the torus; restart r uses
/// derive_seed(cfg.seed, r) for its start and derive_seed(noise.seed, r) for its shot noise.
/// Restarts run on up to `threads` threads (0 = hardware concurrency); results do not depend on it.
TrainResult train(
    const Cloner &cloner, const Task &task, const NMConfig &cfg, const NoiseConfig &noise, size_t restarts,
    size_t threads = 0);

struct SweepRow {
    double phi = 0;
    CloningOutcome outcome;
    CloningOutcome standard_error;
};

/// Equatorial test states φ_k = 2πk/count, evaluated noiselessly or with the given shot noise.
std::vector<SweepRow> validate_sweep(
    const Cloner &cloner, const PhaseVector &params, size_t count = 50,
    const NoiseConfig &noise = NoiseConfig::exact_mode());

}  // namespace vqclone

#endif
