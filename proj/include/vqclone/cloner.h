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

#ifndef VQCLONE_CLONER_H
#define VQCLONE_CLONER_H

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vqclone/fock.h"
#include "vqclone/mesh.h"

namespace vqclone {

/// Optimal symmetric phase-covariant 1→2 fidelity, 1/2 + √(1/8).
inline constexpr double kOptimalPhaseCovariantFidelity = 0.5 + 0.35355339059327373;
/// Optimal universal 1→2 fidelity.
inline constexpr double kUniversalFidelityBound = 5.0 / 6.0;
/// Average fidelity of measure-and-prepare along a random equatorial basis.
inline constexpr double kSemiclassicalFidelity = 0.75;

/// cos θ |0⟩ + sin θ e^{iφ} |1⟩. No half angles: the equator sits at θ = π/4.
struct QubitState {
    double theta = 0;
    double phi = 0;

    Eigen::Vector2cd amplitudes() const;
    QubitState orthogonal() const;

    static QubitState equatorial(double phi);
};

using TrainingSet = std::vector<QubitState>;

/// The four X and Y eigenstates, φ ∈ {0, π/2, π, 3π/2}.
TrainingSet phase_covariant_training_set();

/// Equatorial states φ_k = 2πk/count.
TrainingSet equatorial_sweep(size_t count);

struct StatePair {
    std::string label;
    QubitState a;
    QubitState b;
};

/// The four state pairs shipped for state-dependent training.
std::vector<StatePair> default_state_pairs();

/// A dual-rail qubit: the photon sits in `zero_mode` for |0⟩ and `one_mode` for |1⟩.
struct RailPair {
    size_t zero_mode = 0;
    size_t one_mode = 0;

    bool operator==(const RailPair &) const = default;
};

struct RailMap {
    RailPair input;
    RailPair ancilla;
    RailPair clone1;
    RailPair clone2;

    /// input (1, 2), ancilla (3, 0), clone 1 (0, 1), clone 2 (2, 3) over modes 0..3.
    static RailMap defaults();

    RailMap with_clones_swapped() const;
    const RailPair &clone(int which) const;

    /// Throws std::invalid_argument if rails overlap, are not adjacent where a stage
    /// needs them to be, or the clone rails do not cover `mode_count` modes.
    void validate(size_t mode_count) const;

    bool operator==(const RailMap &) const = default;
};

using DensityMatrix2 = Eigen::Matrix2cd;

/// Throws std::invalid_argument unless ρ is Hermitian, trace-1 and PSD to within 1e-10.
void validate_density(const DensityMatrix2 &rho);

struct CloningOutcome {
    double f1 = 0;
    double f2 = 0;
    double p_post = 0;
};

/// ⟨ψ|ρ|ψ⟩, the fidelity with a pure target.
double fidelity(const DensityMatrix2 &rho, const QubitState &psi);

/// Reduced state of clone `which` (1 or 2) in its logical basis. Throws if `joint` has weight
/// outside the one-photon-per-clone support.
DensityMatrix2 reduced_clone(const FockAmplitudes &joint, int which, const RailMap &rails);

/// Tunable beamsplitter + phase shifter sending the photon injected in the input |0⟩ rail
/// to exactly cos θ |0⟩ + sin θ e^{iφ} |1⟩ on the input rails.
PrepPhases prep_phases(const QubitState &psi, const RailMap &rails = RailMap::defaults());

/// Per-clone rotations mapping ψ onto the clone's |0⟩ rail.
MeasPhases measurement_phases(const QubitState &psi, const RailMap &rails = RailMap::defaults());

struct CloneResult {
    /// Post-selected joint state; empty when the coincidence probability vanishes.
    std::optional<FockAmplitudes> joint;
    CloningOutcome outcome;
};

/// Probabilities of the coincidence patterns after the measurement stage.
/// Rejected events carry the remaining 1 − Σ probabilities.
struct MeasuredDistribution {
    std::vector<FockState> patterns;
    std::vector<double> probabilities;
    RailMap rails;

    double acceptance() const;
};

/// The cloning device: preparation, variational mesh, measurement and coincidence post-selection.
class Cloner {
   public:
    explicit Cloner(MeshSpec mesh = MeshSpec::clements(4), RailMap rails = RailMap::defaults());

    const MeshSpec &mesh() const {
        return mesh_;
    }
    const RailMap &rails() const {
        return rails_;
    }
    size_t phase_count() const {
        return mesh_.phase_count();
    }

    /// One photon in the input |0⟩ rail and one in the ancilla |0⟩ rail.
    FockState input_state() const;
    /// Exactly one photon in the clone-1 rails and one in the clone-2 rails.
    PostselectionRule coincidence_rule() const;

    UnitaryMatrix variational_unitary(const PhaseVector &params) const;

    /// Clone fidelities computed from the reduced density matrices. A vanishing coincidence
    /// probability reports P_post = 0 and F1 = F2 = 0.
    CloneResult run(const PhaseVector &params, const QubitState &psi) const;
    CloneResult run(const UnitaryMatrix &variational, const QubitState &psi) const;

    /// Fidelities read off as conditional success-rail probabilities behind the measurement stage.
    CloningOutcome measure(const PhaseVector &params, const QubitState &psi) const;
    CloningOutcome measure(const UnitaryMatrix &variational, const QubitState &psi) const;

    MeasuredDistribution measured_distribution(const UnitaryMatrix &variational, const QubitState &psi) const;

   private:
    MeshSpec mesh_;
    RailMap rails_;
    PostselectionRule rule_;
};

/// Σ_states (1 − F1)² + (1 − F2)² + (F1 − F2)².
double phase_covariant_terms(std::span<const CloningOutcome> outcomes);

/// Fidelity terms for both states plus λ[(1 − P_A)² + (1 − P_B)² + (P_A − P_B)²].
double state_dependent_terms(const CloningOutcome &a, const CloningOutcome &b, double lambda);

double cost_pc(const Cloner &cloner, const PhaseVector &params);
double cost_pc(const Cloner &cloner, const PhaseVector &params, const TrainingSet &states);
double cost_sd(const Cloner &cloner, const PhaseVector &params, const QubitState &a, const QubitState &b, double lambda);

struct DesignCheck {
    double quadrature = 0;
    double four_point = 0;
};

/// For a fixed clone ρ: trapezoidal average of (1 − ⟨ψ_φ|ρ|ψ_φ⟩)² over the equator against the
/// average over the four training states. Requires at least 100 quadrature points.
DesignCheck design_identity_check(const DensityMatrix2 &rho, size_t quadrature_points);

/// Same comparison through the full post-selected pipeline, where the clone depends on φ.
/// Diagnostic only; the two sides need not agree.
std::pair<DesignCheck, DesignCheck> pipeline_design_gap(
    const Cloner &cloner, const PhaseVector &params, size_t quadrature_points);

double semiclassical_baseline();

/// Measure-and-prepare simulation: a random equatorial input is measured in a random
/// equatorial basis (or in `fixed_basis_phi` when given) and two copies of the outcome state
/// are prepared. Returns the mean fidelity of one copy.
double semiclassical_monte_carlo(
    uint64_t trials, uint64_t seed, std::optional<double> fixed_basis_phi = std::nullopt,
    std::optional<double> fixed_input_phi = std::nullopt);

}  // namespace vqclone

#endif
