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

#ifndef VQCLONE_MESH_H
#define VQCLONE_MESH_H

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace vqclone {

using Complex = std::complex<double>;
using UnitaryMatrix = Eigen::MatrixXcd;
using Block2 = Eigen::Matrix2cd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle into [0, 2π).
double wrap_phase(double radians);

/// Max-abs entry of U†U − I.
double unitarity_error(const UnitaryMatrix &u);

/// Ordered phase-shifter settings in radians. Entries are stored reduced mod 2π.
class PhaseVector {
   public:
    PhaseVector() = default;
    explicit PhaseVector(std::span<const double> radians);
    PhaseVector(std::initializer_list<double> radians);

    size_t size() const {
        return values_.size();
    }
    double operator[](size_t k) const {
        return values_[k];
    }
    std::span<const double> values() const {
        return values_;
    }

   private:
    std::vector<double> values_;
};

/// Balanced (50:50) directional coupler, (1/√2)[[1, i], [i, 1]].
Block2 balanced_coupler();

/// Mach–Zehnder cell: external shifter on the upper input, coupler, internal shifter on
/// the upper arm, coupler. Equals i·e^{iθ/2} [[e^{iφ} sin(θ/2), cos(θ/2)], [e^{iφ} cos(θ/2), −sin(θ/2)]].
Block2 mzi_unitary(double internal_phase, double external_phase);

/// Embeds a 2×2 block acting on modes (lower_mode, lower_mode + 1) of an m-mode identity.
UnitaryMatrix embed(const Block2 &block, size_t lower_mode, size_t mode_count);

/// Applies `block` on rows (lower_mode, lower_mode + 1) of `u` in place, i.e. u ← embed(block)·u.
void apply_block_left(UnitaryMatrix &u, const Block2 &block, size_t lower_mode);

struct MziCell {
    size_t column = 0;
    size_t lower_mode = 0;
    /// Index of the internal (θ) and external (φ) phase in the PhaseVector.
    size_t internal_index = 0;
    size_t external_index = 0;

    bool operator==(const MziCell &) const = default;
};

struct FixedCoupler {
    size_t column = 0;
    size_t lower_mode = 0;

    bool operator==(const FixedCoupler &) const = default;
};

/// Layout of a programmable mesh. Elements are composed column by column, left to right
/// (column 0 acts first). Within a column no two elements may share a mode.
struct MeshSpec {
    size_t mode_count = 0;
    std::vector<MziCell> cells;
    std::vector<FixedCoupler> fixed_couplers;

    /// Number of tunable phases, i.e. 1 + the largest phase index bound by any cell.
    size_t phase_count() const;
    size_t column_count() const;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;

    /// Rectangular layout: even columns couple (0,1), (2,3), ...; odd columns (1,2), (3,4), ...
    /// with `mode_count` columns. Cell k binds phases (2k, 2k + 1).
    static MeshSpec clements(size_t mode_count);
    static MeshSpec single_mzi();

    bool operator==(const MeshSpec &) const = default;
};

void to_json(nlohmann::json &j, const MeshSpec &spec);
void from_json(const nlohmann::json &j, MeshSpec &spec);

/// Ordered product of embedded cell unitaries and fixed couplers.
UnitaryMatrix build_mesh(const MeshSpec &spec, const PhaseVector &params);

/// Preparation stage: an MZI on (lower_mode, lower_mode + 1) followed by a phase shifter on
/// lower_mode + 1.
struct PrepPhases {
    size_t lower_mode = 0;
    double internal_phase = 0;
    double external_phase = 0;
    double rail_phase = 0;
};

/// One projection rotation: a phase shifter on lower_mode + 1 followed by an MZI on the pair.
struct RailRotation {
    size_t lower_mode = 0;
    double rail_phase = 0;
    double internal_phase = 0;
    double external_phase = 0;
};

struct MeasPhases {
    std::vector<RailRotation> rotations;
};

UnitaryMatrix stage_unitary(const PrepPhases &prep, size_t mode_count);
UnitaryMatrix stage_unitary(const MeasPhases &meas, size_t mode_count);

/// The three stages of the device, kept separate for introspection.
struct DeviceUnitary {
    UnitaryMatrix prep;
    UnitaryMatrix variational;
    UnitaryMatrix measurement;

    /// measurement · variational · prep
    UnitaryMatrix total() const;
};

/// Throws std::invalid_argument if the stage dimensions disagree.
DeviceUnitary full_device(UnitaryMatrix prep, UnitaryMatrix variational, UnitaryMatrix measurement);
DeviceUnitary full_device(
    const PrepPhases &prep, const MeshSpec &spec, const PhaseVector &variational, const MeasPhases &meas);

}  // namespace vqclone

#endif
