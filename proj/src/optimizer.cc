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

#include "vqclone/optimizer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

namespace vqclone {

void NMConfig::validate() const {
    auto fail = [](const std::string &msg) { throw std::invalid_argument("NMConfig: " + msg); };
    if (!(reflection > 0)) fail("reflection must be > 0");
    if (!(expansion > 1 && expansion > reflection)) fail("expansion must exceed 1 and the reflection coefficient");
    if (!(contraction > 0 && contraction < 1)) fail("contraction must lie in (0, 1)");
    if (!(shrink > 0 && shrink < 1)) fail("shrink must lie in (0, 1)");
    if (!(initial_edge > 0)) fail("initial_edge must be > 0");
    if (max_iterations < 0) fail("max_iterations must be >= 0");
    if (max_evaluations < 1) fail("max_evaluations must be >= 1");
    if (!(min_diameter > 0)) fail("min_diameter must be > 0");
    if (stagnation_window < 1) fail("stagnation_window must be >= 1");
    if (!(stagnation_threshold >= 0)) fail("stagnation_threshold must be >= 0");
    if (!(collapse_threshold > 0)) fail("collapse_threshold must be > 0");
    if (!(reboot_scale > 1)) fail("reboot_scale must be > 1");
    if (max_reboots < 0) fail("max_reboots must be >= 0");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::MaxIterations:
            return "max_iterations";
        case Termination::MaxEvaluations:
            return "max_evaluations";
        case Termination::SimplexCollapsed:
            return "simplex_collapsed";
        case Termination::NonFiniteCost:
            return "non_finite_cost";
    }
    return "unknown";
}

const EvaluationRecord &OptimizationTrace::best_record() const {
    if (records.empty()) {
        throw std::logic_error("OptimizationTrace: no evaluations recorded");
    }
    size_t best = 0;
    for (size_t k = 1; k < records.size(); k++) {
        if (records[k].cost < records[best].cost) {
            best = k;
        }
    }
    return records[best];
}

double simplex_diameter(std::span<const std::vector<double>> vertices, size_t best) {
    double diameter = 0;
    for (const auto &v : vertices) {
        double d2 = 0;
        for (size_t i = 0; i < v.size(); i++) {
            const double d = v[i] - vertices[best][i];
            d2 += d * d;
        }
        diameter = std::max(diameter, std::sqrt(d2));
    }
    return diameter;
}

bool reboot_policy(std::span<const double> best_tail, double diameter, int64_t reboots_done, const NMConfig &cfg) {
    if (!cfg.reboot_enabled || reboots_done >= cfg.max_reboots) {
        return false;
    }
    const auto window = static_cast<size_t>(cfg.stagnation_window);
    if (best_tail.size() < window + 1) {
        return false;
    }
    const double improvement = best_tail[best_tail.size() - 1 - window] - best_tail.back();
    return improvement < cfg.stagnation_threshold && diameter < cfg.collapse_threshold;
}

namespace {

class SimplexRun {
   public:
    SimplexRun(const Objective &cost, const NMConfig &cfg) : cost_(cost), cfg_(cfg) {
    }

    OptimizationTrace run(std::vector<double> init) {
        const size_t d = init.size();
        if (d == 0) {
            throw std::invalid_argument("nelder_mead: empty starting point");
        }
        trace_.best_cost = std::numeric_limits<double>::infinity();

        auto f0 = evaluate(init);
        if (!f0) {
            return finish();
        }
        if (cfg_.max_iterations == 0) {
            trace_.termination = Termination::MaxIterations;
            return finish();
        }
        vertices_.assign(1, init);
        values_.assign(1, *f0);
        if (!build_around(init, cfg_.initial_edge, /*evaluate_center=*/false)) {
            return finish();
        }

        std::vector<double> best_tail{trace_.best_cost};
        int64_t reboots = 0;
        while (true) {
            order();
            const double diameter = simplex_diameter(vertices_, order_[0]);
            if (reboot_policy(best_tail, diameter, reboots, cfg_)) {
                reboots++;
                trace_.reboot_iterations.push_back(iteration_);
                rebooting_ = true;
                const std::vector<double> center = trace_.best_point;
                vertices_.clear();
                values_.clear();
                const bool ok = build_around(center, cfg_.initial_edge * cfg_.reboot_scale, true);
                rebooting_ = false;
                if (!ok) {
                    return finish();
                }
                best_tail.assign(1, trace_.best_cost);
                continue;
            }
            if (diameter < cfg_.min_diameter) {
                trace_.termination = Termination::SimplexCollapsed;
                return finish();
            }
            if (iteration_ >= cfg_.max_iterations) {
                trace_.termination = Termination::MaxIterations;
                return finish();
            }
            iteration_++;
            if (!step()) {
                return finish();
            }
            best_tail.push_back(trace_.best_cost);
        }
    }

   private:
    // Returns nullopt when the run must stop (budget exhausted or non-finite cost).
    std::optional<double> evaluate(const std::vector<double> &x) {
        if (trace_.evaluations() >= cfg_.max_evaluations) {
            trace_.termination = Termination::MaxEvaluations;
            return std::nullopt;
        }
        Evaluation e = cost_(x);
        EvaluationRecord rec;
        rec.evaluation = trace_.evaluations();
        rec.iteration = iteration_;
        rec.point = x;
        rec.cost = e.cost;
        rec.reboot = rebooting_;
        rec.outcomes = std::move(e.outcomes);
        if (!std::isfinite(e.cost)) {
            rec.best_cost = trace_.best_cost;
            trace_.records.push_back(std::move(rec));
            trace_.termination = Termination::NonFiniteCost;
            trace_.diagnostic = "non-finite cost at evaluation " + std::to_string(trace_.evaluations() - 1) +
                                " (iteration " + std::to_string(iteration_) + ")";
            return std::nullopt;
        }
        if (e.cost < trace_.best_cost) {
            trace_.best_cost = e.cost;
            trace_.best_point = x;
        }
        rec.best_cost = trace_.best_cost;
        trace_.records.push_back(std::move(rec));
        return e.cost;
    }

    bool build_around(const std::vector<double> &center, double edge, bool evaluate_center) {
        if (evaluate_center) {
            auto fc = evaluate(center);
            if (!fc) {
                return false;
            }
            vertices_.push_back(center);
            values_.push_back(*fc);
        }
        for (size_t i = 0; i < center.size(); i++) {
            std::vector<double> x = center;
            x[i] += edge;
            auto fx = evaluate(x);
            if (!fx) {
                return false;
            }
            vertices_.push_back(std::move(x));
            values_.push_back(*fx);
        }
        return true;
    }

    void order() {
        order_.resize(vertices_.size());
        std::iota(order_.begin(), order_.end(), size_t{0});
        std::sort(order_.begin(), order_.end(), [&](size_t a, size_t b) {
            return values_[a] < values_[b] || (values_[a] == values_[b] && a < b);
        });
    }

    std::vector<double> along(const std::vector<double> &from, const std::vector<double> &to, double t) const {
        std::vector<double> x(from.size());
        for (size_t i = 0; i < x.size(); i++) {
            x[i] = from[i] + t * (to[i] - from[i]);
        }
        return x;
    }

    void replace(size_t slot, std::vector<double> x, double fx) {
        vertices_[slot] = std::move(x);
        values_[slot] = fx;
    }

    bool step() {
        const size_t n = vertices_.size();
        const size_t best = order_[0];
        const size_t worst = order_[n - 1];
        const size_t second_worst = order_[n - 2];
        const size_t d = vertices_[0].size();

        std::vector<double> centroid(d, 0.0);
        for (size_t k = 0; k + 1 < n; k++) {
            for (size_t i = 0; i < d; i++) {
                centroid[i] += vertices_[order_[k]][i];
            }
        }
        for (double &c : centroid) {
            c /= static_cast<double>(n - 1);
        }

        std::vector<double> xr = along(centroid, vertices_[worst], -cfg_.reflection);
        auto fr = evaluate(xr);
        if (!fr) return false;

        if (*fr < values_[best]) {
            std::vector<double> xe = along(centroid, xr, cfg_.expansion);
            auto fe = evaluate(xe);
            if (!fe) return false;
            if (*fe < *fr) {
                replace(worst, std::move(xe), *fe);
            } else {
                replace(worst, std::move(xr), *fr);
            }
            return true;
        }
        if (*fr < values_[second_worst]) {
            replace(worst, std::move(xr), *fr);
            return true;
        }
        if (*fr < values_[worst]) {
            std::vector<double> xc = along(centroid, xr, cfg_.contraction);
            auto fc = evaluate(xc);
            if (!fc) return false;
            if (*fc <= *fr) {
                replace(worst, std::move(xc), *fc);
                return true;
            }
        } else {
            std::vector<double> xcc = along(centroid, vertices_[worst], cfg_.contraction);
            auto fcc = evaluate(xcc);
            if (!fcc) return false;
            if (*fcc < values_[worst]) {
                replace(worst, std::move(xcc), *fcc);
                return true;
            }
        }
        for (size_t k = 1; k < n; k++) {
            const size_t slot = order_[k];
            std::vector<double> x = along(vertices_[best], vertices_[slot], cfg_.shrink);
            auto fx = evaluate(x);
            if (!fx) return false;
            replace(slot, std::move(x), *fx);
        }
        return true;
    }

    OptimizationTrace finish() {
        trace_.iterations = iteration_;
        if (trace_.best_point.empty() && !trace_.records.empty()) {
            trace_.best_point = trace_.records.front().point;
        }
        return std::move(trace_);
    }

    const Objective &cost_;
    const NMConfig &cfg_;
    OptimizationTrace trace_;
    std::vector<std::vector<double>> vertices_;
    std::vector<double> values_;
    std::vector<size_t> order_;
    int64_t iteration_ = 0;
    bool rebooting_ = false;
};

}  // namespace

OptimizationTrace nelder_mead(const Objective &cost, std::vector<double> init, const NMConfig &cfg) {
    cfg.validate();
    return SimplexRun(cost, cfg).run(std::move(init));
}

OptimizationTrace nelder_mead(const ScalarObjective &cost, std::vector<double> init, const NMConfig &cfg) {
    Objective wrapped = [&cost](std::span<const double> x) { return Evaluation{cost(x), {}}; };
    return nelder_mead(wrapped, std::move(init), cfg);
}

TrainingSet task_states(const Task &task) {
    if (const auto *pc = std::get_if<PhaseCovariantTask>(&task)) {
        return pc->states;
    }
    const auto &sd = std::get<StateDependentTask>(task);
    return {sd.pair.a, sd.pair.b};
}

double task_cost(const Task &task, std::span<const CloningOutcome> outcomes) {
    if (std::holds_alternative<PhaseCovariantTask>(task)) {
        return phase_covariant_terms(outcomes);
    }
    if (outcomes.size() != 2) {
        throw std::invalid_argument("task_cost: state-dependent task needs exactly two outcomes");
    }
    return state_dependent_terms(outcomes[0], outcomes[1], std::get<StateDependentTask>(task).lambda);
}

Evaluation evaluate_task(const Cloner &cloner, const Task &task, const PhaseVector &params) {
    const UnitaryMatrix u = cloner.variational_unitary(params);
    Evaluation e;
    for (const auto &psi : task_states(task)) {
        e.outcomes.push_back(cloner.run(u, psi).outcome);
    }
    e.cost = task_cost(task, e.outcomes);
    return e;
}

Objective make_objective(
    const Cloner &cloner, const Task &task, const NoiseConfig &noise, std::atomic<int64_t> *run_counter) {
    noise.validate();
    if (const auto *sd = std::get_if<StateDependentTask>(&task); sd && !(sd->lambda >= 0)) {
        throw std::invalid_argument("StateDependentTask: lambda must be >= 0");
    }
    auto states = std::make_shared<const TrainingSet>(task_states(task));
    auto calls = std::make_shared<int64_t>(0);
    return [&cloner, task, noise, states, calls, run_counter](std::span<const double> x) {
        const PhaseVector params(x);
        const UnitaryMatrix u = cloner.variational_unitary(params);
        Evaluation e;
        e.outcomes.reserve(states->size());
        for (size_t s = 0; s < states->size(); s++) {
            if (noise.exact()) {
                e.outcomes.push_back(cloner.run(u, (*states)[s]).outcome);
            } else {
                const uint64_t stream = static_cast<uint64_t>(*calls) * states->size() + s;
                e.outcomes.push_back(sampled_outcome(cloner, u, (*states)[s], noise, stream).value);
            }
            if (run_counter) {
                run_counter->fetch_add(1, std::memory_order_relaxed);
            }
        }
        ++*calls;
        e.cost = task_cost(task, e.outcomes);
        return e;
    };
}

TrainResult train(
    const Cloner &cloner, const Task &task, const NMConfig &cfg, const NoiseConfig &noise, size_t restarts,
    size_t threads) {
    cfg.validate();
    noise.validate();
    if (restarts == 0) {
        throw std::invalid_argument("train: need at least one restart");
    }
    TrainResult result;
    result.traces.resize(restarts);
    const size_t d = cloner.phase_count();

    auto run_one = [&](size_t r) {
        std::mt19937_64 rng(derive_seed(cfg.seed, r));
        std::uniform_real_distribution<double> angle(0, kTwoPi);
        std::vector<double> init(d);
        for (double &x : init) {
            x = angle(rng);
        }
        NoiseConfig restart_noise = noise;
        restart_noise.seed = derive_seed(noise.seed, r);
        result.traces[r] = nelder_mead(make_objective(cloner, task, restart_noise), std::move(init), cfg);
    };

    size_t workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, restarts);
    if (workers <= 1) {
        for (size_t r = 0; r < restarts; r++) {
            run_one(r);
        }
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back([&, w] {
                try {
                    for (size_t r = next++; r < restarts; r = next++) {
                        run_one(r);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
        for (auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    for (size_t r = 0; r < restarts; r++) {
        const auto &t = result.traces[r];
        if (t.termination == Termination::NonFiniteCost) {
            throw std::runtime_error("train: restart " + std::to_string(r) + " aborted: " + t.diagnostic);
        }
        if (t.best_cost < result.traces[result.best_index].best_cost) {
            result.best_index = r;
        }
    }
    return result;
}

std::vector<SweepRow> validate_sweep(
    const Cloner &cloner, const PhaseVector &params, size_t count, const NoiseConfig &noise) {
    if (count == 0) {
        throw std::invalid_argument("validate_sweep: count must be >= 1");
    }
    noise.validate();
    const UnitaryMatrix u = cloner.variational_unitary(params);
    std::vector<SweepRow> rows;
    rows.reserve(count);
    const TrainingSet states = equatorial_sweep(count);
    for (size_t k = 0; k < count; k++) {
        SweepRow row;
        row.phi = states[k].phi;
        if (noise.exact()) {
            row.outcome = cloner.run(u, states[k]).outcome;
        } else {
            const OutcomeEstimate est = sampled_outcome(cloner, u, states[k], noise, k);
            row.outcome = est.value;
            row.standard_error = est.standard_error;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace vqclone
