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

#include "vqclone/sampler.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace vqclone {

void NoiseConfig::validate() const {
    if (shots && *shots < 1) {
        throw std::invalid_argument("NoiseConfig: shots must be >= 1");
    }
}

uint64_t derive_seed(uint64_t master, uint64_t stream) {
    uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

int64_t SampledCounts::total() const {
    int64_t t = rejected;
    for (int64_t c : accepted) {
        t += c;
    }
    return t;
}

SampledCounts sample_counts(std::span<const double> probabilities, int64_t trials, uint64_t seed) {
    if (trials < 0) {
        throw std::invalid_argument("sample_counts: negative trial count");
    }
    double sum = 0;
    for (double p : probabilities) {
        if (!(p >= 0) || !std::isfinite(p)) {
            throw std::invalid_argument("sample_counts: probabilities must be finite and non-negative");
        }
        sum += p;
    }
    if (sum > 1 + 1e-9) {
        throw std::invalid_argument("sample_counts: probabilities sum to " + std::to_string(sum) + " > 1");
    }

    // Sequential conditional binomials: category k gets Bin(remaining, p_k / mass_left).
    std::mt19937_64 rng(seed);
    SampledCounts out;
    out.accepted.assign(probabilities.size(), 0);
    int64_t remaining = trials;
    double mass_left = 1;
    for (size_t k = 0; k < probabilities.size() && remaining > 0; k++) {
        const double p = probabilities[k];
        if (p <= 0) {
            continue;
        }
        const double q = std::clamp(p / mass_left, 0.0, 1.0);
        std::binomial_distribution<int64_t> draw(remaining, q);
        out.accepted[k] = draw(rng);
        remaining -= out.accepted[k];
        mass_left = std::max(mass_left - p, 0.0);
    }
    out.rejected = remaining;
    return out;
}

MeasurementCounts sample_measurement(const MeasuredDistribution &dist, int64_t trials, uint64_t seed) {
    SampledCounts drawn = sample_counts(dist.probabilities, trials, seed);
    return {dist.patterns, std::move(drawn.accepted), trials, dist.rails};
}

OutcomeEstimate estimate_outcome(const MeasurementCounts &counts) {
    if (counts.counts.size() != counts.patterns.size()) {
        throw std::invalid_argument("estimate_outcome: counts and patterns differ in length");
    }
    OutcomeEstimate est;
    int64_t hit1 = 0;
    int64_t hit2 = 0;
    for (size_t k = 0; k < counts.patterns.size(); k++) {
        est.coincidences += counts.counts[k];
        hit1 += counts.patterns[k][counts.rails.clone1.zero_mode] == 1 ? counts.counts[k] : 0;
        hit2 += counts.patterns[k][counts.rails.clone2.zero_mode] == 1 ? counts.counts[k] : 0;
    }
    if (est.coincidences == 0 || counts.trials <= 0) {
        return est;
    }
    const auto c = static_cast<double>(est.coincidences);
    const auto n = static_cast<double>(counts.trials);
    est.valid = true;
    est.value = {static_cast<double>(hit1) / c, static_cast<double>(hit2) / c, c / n};
    auto binomial_se = [](double p, double n) { return std::sqrt(p * (1 - p) / n); };
    est.standard_error = {
        binomial_se(est.value.f1, c), binomial_se(est.value.f2, c), binomial_se(est.value.p_post, n)};
    return est;
}

OutcomeEstimate sampled_outcome(
    const Cloner &cloner, const UnitaryMatrix &variational, const QubitState &psi, const NoiseConfig &noise,
    uint64_t stream) {
    if (noise.exact()) {
        OutcomeEstimate est;
        est.value = cloner.measure(variational, psi);
        est.valid = est.value.p_post >= kZeroSupport;
        return est;
    }
    const MeasuredDistribution dist = cloner.measured_distribution(variational, psi);
    return estimate_outcome(sample_measurement(dist, *noise.shots, derive_seed(noise.seed, stream)));
}

}  // namespace vqclone
