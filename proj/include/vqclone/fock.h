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

#ifndef VQCLONE_FOCK_H
#define VQCLONE_FOCK_H

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vqclone/mesh.h"

namespace vqclone {

/// Photon occupation numbers, one per mode.
struct FockState {
    std::vector<int> occupations;

    FockState() = default;
    explicit FockState(std::vector<int> occ);

    size_t mode_count() const {
        return occupations.size();
    }
    int photon_count() const;
    int operator[](size_t mode) const {
        return occupations[mode];
    }

    auto operator<=>(const FockState &) const = default;
};

std::string to_string(const FockState &s);

/// Permanent of a square complex matrix. Dimensions up to 3 use the explicit expansion;
/// larger ones use Ryser's formula with Gray-code subset ordering.
Complex permanent(const Eigen::MatrixXcd &m);

/// All n-photon patterns over m modes, C(n + m − 1, n) of them, in lexicographically
/// descending order of the occupation list: (n,0,...,0) first, (0,...,0,n) last.
std::vector<FockState> enumerate_patterns(int photons, size_t modes);

/// Dense amplitudes over every pattern of a fixed photon number and mode count,
/// indexed in enumerate_patterns order.
class FockAmplitudes {
   public:
    FockAmplitudes(int photons, size_t modes);

    int photon_count() const {
        return photons_;
    }
    size_t mode_count() const {
        return modes_;
    }
    size_t size() const {
        return patterns_.size();
    }
    const std::vector<FockState> &patterns() const {
        return patterns_;
    }
    const std::vector<Complex> &amplitudes() const {
        return amps_;
    }
    Complex &operator[](size_t k) {
        return amps_[k];
    }
    Complex operator[](size_t k) const {
        return amps_[k];
    }

    /// Throws std::out_of_range if the pattern has the wrong shape or photon number.
    size_t index_of(const FockState &pattern) const;
    Complex amplitude(const FockState &pattern) const {
        return amps_[index_of(pattern)];
    }
    double probability(const FockState &pattern) const {
        return std::norm(amplitude(pattern));
    }
    double norm_squared() const;

   private:
    int photons_;
    size_t modes_;
    std::vector<FockState> patterns_;
    std::vector<Complex> amps_;
};

void to_json(nlohmann::json &j, const FockAmplitudes &a);

/// Transition amplitudes ⟨T|Û|S⟩ = Per(U[T,S]) / √(Π s_i! Π t_j!) for every output pattern T,
/// where U[T,S] repeats row j t_j times and column i s_i times.
FockAmplitudes evolve(const FockState &input, const UnitaryMatrix &u);

struct PostselectionRule {
    std::function<bool(const FockState &)> accept;
    std::string description;

    bool operator()(const FockState &s) const {
        return accept(s);
    }

    static PostselectionRule accept_all();
    /// Exactly one photon in `group_a` and exactly one in `group_b`.
    static PostselectionRule coincidence(std::vector<size_t> group_a, std::vector<size_t> group_b);
    PostselectionRule negated() const;
};

struct PostselectionResult {
    /// Σ |amp|² over accepted patterns.
    double probability = 0;
    /// Accepted amplitudes renormalized by √probability. Empty when probability < kZeroSupport.
    std::optional<FockAmplitudes> state;

    bool zero_support() const {
        return !state.has_value();
    }
};

inline constexpr double kZeroSupport = 1e-12;

PostselectionResult postselect(const FockAmplitudes &state, const PostselectionRule &rule);

}  // namespace vqclone

#endif
