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

#ifndef VQCLONE_SAMPLER_H
#define VQCLONE_SAMPLER_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vqclone/cloner.h"

namespace vqclone {

/// Finite-statistics settings. `shots` is the number of two-photon trials per state and
/// evaluation, accepted or not; empty means exact probabilities.
struct NoiseConfig {
    std::optional<int64_t> shots;
    uint64_t seed = 0;

    bool exact() const {
        return !shots.has_value();
    }
    void validate() const;

    static NoiseConfig exact_mode() {
        return {};
    }
};

/// Independent stream seed derived from a master seed (splitmix64 finalizer).
uint64_t derive_seed(uint64_t master, uint64_t stream);

struct SampledCounts {
    std::vector<int64_t> accepted;
    int64_t rejected = 0;

    int64_t total() const;
};

/// Multinomial draw of `trials` events over the given pattern probabilities plus the rejected
/// remainder 1 − Σp. Throws std::invalid_argument on negative entries or Σp > 1 + 1e-9.
SampledCounts sample_counts(std::span<const double> probabilities, int64_t trials, uint64_t seed);

/// Coincidence counts from a measurement-stage configured run.
struct MeasurementCounts {
    std::vector<FockState> patterns;
    std::vector<int64_t> counts;
    int64_t trials = 0;
    RailMap rails;
};

MeasurementCounts sample_measurement(const MeasuredDistribution &dist, int64_t trials, uint64_t seed);

struct OutcomeEstimate {
    CloningOutcome value;
    /// Binomial standard errors of F1, F2 (per coincidence) and P_post (per trial).
    CloningOutcome standard_error;
    int64_t coincidences = 0;
    /// False when no coincidence was recorded; `value` is then all zeros.
    bool valid = false;
};

OutcomeEstimate estimate_outcome(const MeasurementCounts &counts);

/// Noisy or exact outcome for one state. Exact mode returns the noiseless measurement-path outcome.
OutcomeEstimate sampled_outcome(
    const Cloner &cloner, const UnitaryMatrix &variational, const QubitState &psi, const NoiseConfig &noise,
    uint64_t stream);

}  // namespace vqclone

#endif
