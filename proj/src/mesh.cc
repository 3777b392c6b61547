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

#include "vqclone/mesh.h"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <stdexcept>

namespace vqclone {

double wrap_phase(double radians) {
    double r = std::fmod(radians, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    // fmod of a tiny negative value can round up to exactly 2π.
    if (r >= kTwoPi) {
        r = 0;
    }
    return r;
}

double unitarity_error(const UnitaryMatrix &u) {
    if (u.rows() != u.cols()) {
        throw std::invalid_argument("unitarity_error: matrix is not square");
    }
    UnitaryMatrix d = u.adjoint() * u - UnitaryMatrix::Identity(u.rows(), u.cols());
    return d.cwiseAbs().maxCoeff();
}

PhaseVector::PhaseVector(std::span<const double> radians) : values_(radians.size()) {
    std::transform(radians.begin(), radians.end(), values_.begin(), wrap_phase);
}

PhaseVector::PhaseVector(std::initializer_list<double> radians)
    : PhaseVector(std::span<const double>(radians.begin(), radians.size())) {
}

Block2 balanced_coupler() {
    const double s = 1.0 / std::sqrt(2.0);
    Block2 b;
    b << Complex(s, 0), Complex(0, s), Complex(0, s), Complex(s, 0);
    return b;
}

Block2 mzi_unitary(double internal_phase, double external_phase) {
    const double half = wrap_phase(internal_phase) / 2;
    const Complex ext = std::polar(1.0, wrap_phase(external_phase));
    const Complex pre = Complex(0, 1) * std::polar(1.0, half);
    const double s = std::sin(half);
    const double c = std::cos(half);
    Block2 u;
    u << pre * ext * s, pre * c, pre * ext * c, -pre * s;
    return u;
}

void apply_block_left(UnitaryMatrix &u, const Block2 &block, size_t lower_mode) {
    if (lower_mode + 1 >= static_cast<size_t>(u.rows())) {
        throw std::invalid_argument("apply_block_left: mode pair out of range");
    }
    auto rows = u.middleRows(static_cast<Eigen::Index>(lower_mode), 2);
    rows = (block * rows).eval();
}

UnitaryMatrix embed(const Block2 &block, size_t lower_mode, size_t mode_count) {
    if (mode_count < 2 || lower_mode + 1 >= mode_count) {
        throw std::invalid_argument(
            "embed: mode pair (" + std::to_string(lower_mode) + ", " + std::to_string(lower_mode + 1) +
            ") out of range for " + std::to_string(mode_count) + " modes");
    }
    UnitaryMatrix u = UnitaryMatrix::Identity(mode_count, mode_count);
    u.block(lower_mode, lower_mode, 2, 2) = block;
    return u;
}

size_t MeshSpec::phase_count() const {
    size_t n = 0;
    for (const auto &c : cells) {
        n = std::max({n, c.internal_index + 1, c.external_index + 1});
    }
    return n;
}

size_t MeshSpec::column_count() const {
    size_t n = 0;
    for (const auto &c : cells) {
        n = std::max(n, c.column + 1);
    }
    for (const auto &c : fixed_couplers) {
        n = std::max(n, c.column + 1);
    }
    return n;
}

void MeshSpec::validate() const {
    if (mode_count < 1) {
        throw std::invalid_argument("MeshSpec: mode_count must be positive");
    }
    std::set<std::pair<size_t, size_t>> used;  // (column, mode)
    auto claim = [&](size_t column, size_t lower, const char *what) {
        if (lower + 1 >= mode_count) {
            throw std::invalid_argument(
                std::string("MeshSpec: ") + what + " at column " + std::to_string(column) + " acts on modes (" +
                std::to_string(lower) + ", " + std::to_string(lower + 1) + ") outside [0, " +
                std::to_string(mode_count) + ")");
        }
        for (size_t m : {lower, lower + 1}) {
            if (!used.insert({column, m}).second) {
                throw std::invalid_argument(
                    std::string("MeshSpec: mode ") + std::to_string(m) + " used twice in column " +
                    std::to_string(column));
            }
        }
    };
    for (const auto &c : cells) {
        claim(c.column, c.lower_mode, "cell");
        if (c.internal_index == c.external_index) {
            throw std::invalid_argument("MeshSpec: a cell binds the same phase index twice");
        }
    }
    for (const auto &c : fixed_couplers) {
        claim(c.column, c.lower_mode, "fixed coupler");
    }
    std::vector<int> bound(phase_count(), 0);
    for (const auto &c : cells) {
        bound[c.internal_index]++;
        bound[c.external_index]++;
    }
    for (size_t k = 0; k < bound.size(); k++) {
        if (bound[k] != 1) {
            throw std::invalid_argument(
                "MeshSpec: phase index " + std::to_string(k) + " is bound " + std::to_string(bound[k]) +
                " times (expected exactly once)");
        }
    }
}

MeshSpec MeshSpec::clements(size_t mode_count) {
    MeshSpec spec;
    spec.mode_count = mode_count;
    size_t k = 0;
    for (size_t column = 0; column < mode_count; column++) {
        for (size_t lower = column % 2; lower + 1 < mode_count; lower += 2) {
            spec.cells.push_back({column, lower, 2 * k, 2 * k + 1});
            k++;
        }
    }
    return spec;
}

MeshSpec MeshSpec::single_mzi() {
    MeshSpec spec;
    spec.mode_count = 2;
    spec.cells.push_back({0, 0, 0, 1});
    return spec;
}

void to_json(nlohmann::json &j, const MeshSpec &spec) {
    j = nlohmann::json::object();
    j["mode_count"] = spec.mode_count;
    j["phase_count"] = spec.phase_count();
    j["cells"] = nlohmann::json::array();
    for (const auto &c : spec.cells) {
        j["cells"].push_back(
            {{"column", c.column},
             {"lower_mode", c.lower_mode},
             {"internal_phase", c.internal_index},
             {"external_phase", c.external_index}});
    }
    j["fixed_couplers"] = nlohmann::json::array();
    for (const auto &c : spec.fixed_couplers) {
        j["fixed_couplers"].push_back({{"column", c.column}, {"lower_mode", c.lower_mode}});
    }
}

void from_json(const nlohmann::json &j, MeshSpec &spec) {
    spec = MeshSpec{};
    spec.mode_count = j.at("mode_count").get<size_t>();
    for (const auto &c : j.at("cells")) {
        spec.cells.push_back(
            {c.at("column").get<size_t>(),
             c.at("lower_mode").get<size_t>(),
             c.at("internal_phase").get<size_t>(),
             c.at("external_phase").get<size_t>()});
    }
    if (j.contains("fixed_couplers")) {
        for (const auto &c : j.at("fixed_couplers")) {
            spec.fixed_couplers.push_back({c.at("column").get<size_t>(), c.at("lower_mode").get<size_t>()});
        }
    }
    spec.validate();
    if (j.contains("phase_count") && j.at("phase_count").get<size_t>() != spec.phase_count()) {
        throw std::invalid_argument("MeshSpec: declared phase_count does not match cell bindings");
    }
}

UnitaryMatrix build_mesh(const MeshSpec &spec, const PhaseVector &params) {
    if (params.size() != spec.phase_count()) {
        throw std::invalid_argument(
            "build_mesh: expected " + std::to_string(spec.phase_count()) + " phases, got " +
            std::to_string(params.size()));
    }
    UnitaryMatrix u = UnitaryMatrix::Identity(spec.mode_count, spec.mode_count);
    const Block2 coupler = balanced_coupler();
    const size_t columns = spec.column_count();
    for (size_t column = 0; column < columns; column++) {
        for (const auto &c : spec.cells) {
            if (c.column == column) {
                apply_block_left(u, mzi_unitary(params[c.internal_index], params[c.external_index]), c.lower_mode);
            }
        }
        for (const auto &c : spec.fixed_couplers) {
            if (c.column == column) {
                apply_block_left(u, coupler, c.lower_mode);
            }
        }
    }
    return u;
}

UnitaryMatrix stage_unitary(const PrepPhases &prep, size_t mode_count) {
    UnitaryMatrix u = embed(mzi_unitary(prep.internal_phase, prep.external_phase), prep.lower_mode, mode_count);
    u.row(static_cast<Eigen::Index>(prep.lower_mode + 1)) *= std::polar(1.0, prep.rail_phase);
    return u;
}

UnitaryMatrix stage_unitary(const MeasPhases &meas, size_t mode_count) {
    UnitaryMatrix u = UnitaryMatrix::Identity(mode_count, mode_count);
    for (const auto &r : meas.rotations) {
        if (r.lower_mode + 1 >= mode_count) {
            throw std::invalid_argument("stage_unitary: rotation pair out of range");
        }
        u.row(static_cast<Eigen::Index>(r.lower_mode + 1)) *= std::polar(1.0, r.rail_phase);
        apply_block_left(u, mzi_unitary(r.internal_phase, r.external_phase), r.lower_mode);
    }
    return u;
}

UnitaryMatrix DeviceUnitary::total() const {
    return measurement * variational * prep;
}

DeviceUnitary full_device(UnitaryMatrix prep, UnitaryMatrix variational, UnitaryMatrix measurement) {
    auto square = [](const UnitaryMatrix &u) { return u.rows() == u.cols(); };
    if (!square(prep) || !square(variational) || !square(measurement) || prep.rows() != variational.rows() ||
        variational.rows() != measurement.rows()) {
        throw std::invalid_argument(
            "full_device: stage dimensions disagree (prep " + std::to_string(prep.rows()) + "x" +
            std::to_string(prep.cols()) + ", variational " + std::to_string(variational.rows()) + "x" +
            std::to_string(variational.cols()) + ", measurement " + std::to_string(measurement.rows()) + "x" +
            std::to_string(measurement.cols()) + ")");
    }
    return {std::move(prep), std::move(variational), std::move(measurement)};
}

DeviceUnitary full_device(
    const PrepPhases &prep, const MeshSpec &spec, const PhaseVector &variational, const MeasPhases &meas) {
    return full_device(
        stage_unitary(prep, spec.mode_count), build_mesh(spec, variational), stage_unitary(meas, spec.mode_count));
}

}  // namespace vqclone
