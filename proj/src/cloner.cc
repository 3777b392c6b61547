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

#include "vqclone/cloner.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace vqclone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDensityTolerance = 1e-10;

double clamp_unit(double x) {
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

Eigen::Vector2cd QubitState::amplitudes() const {
    return {Complex(std::cos(theta), 0), std::sin(theta) * std::polar(1.0, phi)};
}

QubitState QubitState::orthogonal() const {
    return {theta + kPi / 2, phi};
}

QubitState QubitState::equatorial(double phi) {
    return {kPi / 4, phi};
}

TrainingSet phase_covariant_training_set() {
    return equatorial_sweep(4);
}

TrainingSet equatorial_sweep(size_t count) {
    TrainingSet out;
    out.reserve(count);
    for (size_t k = 0; k < count; k++) {
        out.push_back(QubitState::equatorial(kTwoPi * static_cast<double>(k) / static_cast<double>(count)));
    }
    return out;
}

std::vector<StatePair> default_state_pairs() {
    return {
        {"x-y", QubitState::equatorial(0), QubitState::equatorial(kPi / 2)},
        // Overlaps |<a|b>|: x-y 0.71, z-close 0.92, z-wide 0.38, generic 0.61.
        {"z-close", {0, 0}, {kPi / 8, 0}},
        {"z-wide", {0, 0}, {3 * kPi / 8, 0}},
        {"generic", {kPi / 6, kPi / 4}, {kPi / 3, 3 * kPi / 4}},
    };
}

RailMap RailMap::defaults() {
    return {{1, 2}, {3, 0}, {0, 1}, {2, 3}};
}

RailMap RailMap::with_clones_swapped() const {
    RailMap r = *this;
    std::swap(r.clone1, r.clone2);
    return r;
}

const RailPair &RailMap::clone(int which) const {
    if (which == 1) {
        return clone1;
    }
    if (which == 2) {
        return clone2;
    }
    throw std::invalid_argument("RailMap: clone index must be 1 or 2");
}

void RailMap::validate(size_t mode_count) const {
    auto check_pair = [&](const RailPair &p, const char *name, bool ordered) {
        if (p.zero_mode >= mode_count || p.one_mode >= mode_count) {
            throw std::invalid_argument(std::string("RailMap: ") + name + " rail out of range");
        }
        if (p.zero_mode == p.one_mode) {
            throw std::invalid_argument(std::string("RailMap: ") + name + " rails coincide");
        }
        if (ordered && p.one_mode != p.zero_mode + 1) {
            throw std::invalid_argument(
                std::string("RailMap: ") + name + " rails must be adjacent with |0> on the lower mode");
        }
    };
    check_pair(input, "input", true);
    check_pair(ancilla, "ancilla", false);
    check_pair(clone1, "clone 1", true);
    check_pair(clone2, "clone 2", true);
    std::set<size_t> injected{input.zero_mode, input.one_mode, ancilla.zero_mode, ancilla.one_mode};
    std::set<size_t> detected{clone1.zero_mode, clone1.one_mode, clone2.zero_mode, clone2.one_mode};
    if (injected.size() != 4 || detected.size() != 4) {
        throw std::invalid_argument("RailMap: rails within the input/ancilla or clone groups overlap");
    }
    if (mode_count != 4 || *detected.rbegin() != 3 || *injected.rbegin() != 3) {
        throw std::invalid_argument("RailMap: rails must cover exactly the 4 active modes");
    }
}

void validate_density(const DensityMatrix2 &rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    const double tr = rho.trace().real();
    if (std::abs(tr - 1) > kDensityTolerance) {
        throw std::invalid_argument("density matrix trace " + std::to_string(tr) + " != 1");
    }
    const double a = rho(0, 0).real();
    const double d = rho(1, 1).real();
    const double gap = std::sqrt((a - d) * (a - d) / 4 + std::norm(rho(0, 1)));
    if (tr / 2 - gap < -kDensityTolerance) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

double fidelity(const DensityMatrix2 &rho, const QubitState &psi) {
    validate_density(rho);
    const Eigen::Vector2cd v = psi.amplitudes();
    return clamp_unit((v.adjoint() * rho * v)(0, 0).real());
}

DensityMatrix2 reduced_clone(const FockAmplitudes &joint, int which, const RailMap &rails) {
    if (joint.photon_count() != 2 || joint.mode_count() != 4) {
        throw std::invalid_argument("reduced_clone: expected a two-photon four-mode state");
    }
    Eigen::Matrix2cd m;  // m(j, k): clone 1 in logical j, clone 2 in logical k
    double weight = 0;
    for (int j = 0; j < 2; j++) {
        for (int k = 0; k < 2; k++) {
            std::vector<int> occ(4, 0);
            occ[j ? rails.clone1.one_mode : rails.clone1.zero_mode] += 1;
            occ[k ? rails.clone2.one_mode : rails.clone2.zero_mode] += 1;
            m(j, k) = joint.amplitude(FockState(occ));
            weight += std::norm(m(j, k));
        }
    }
    if (std::abs(weight - 1) > 1e-9 || std::abs(joint.norm_squared() - weight) > 1e-9) {
        throw std::invalid_argument("reduced_clone: joint state is not supported on the coincidence patterns");
    }
    if (which == 1) {
        return m * m.adjoint();
    }
    if (which == 2) {
        return m.transpose() * m.conjugate();
    }
    throw std::invalid_argument("reduced_clone: clone index must be 1 or 2");
}

PrepPhases prep_phases(const QubitState &psi, const RailMap &rails) {
    PrepPhases prep;
    prep.lower_mode = rails.input.zero_mode;
    prep.internal_phase = wrap_phase(kPi - 2 * psi.theta);
    // Cancel the cell's global phase so the prepared amplitudes match ψ exactly.
    const Block2 bare = mzi_unitary(prep.internal_phase, 0);
    const Complex target0(std::cos(psi.theta), 0);
    const Complex target1(std::sin(psi.theta), 0);
    const Complex ratio = std::abs(bare(0, 0)) >= std::abs(bare(1, 0)) ? target0 / bare(0, 0) : target1 / bare(1, 0);
    prep.external_phase = wrap_phase(std::arg(ratio));
    prep.rail_phase = wrap_phase(psi.phi);
    return prep;
}

MeasPhases measurement_phases(const QubitState &psi, const RailMap &rails) {
    MeasPhases meas;
    for (const RailPair *pair : {&rails.clone1, &rails.clone2}) {
        meas.rotations.push_back({pair->zero_mode, wrap_phase(-psi.phi), wrap_phase(kPi - 2 * psi.theta), 0});
    }
    return meas;
}

double MeasuredDistribution::acceptance() const {
    double total = 0;
    for (double p : probabilities) {
        total += p;
    }
    return total;
}

Cloner::Cloner(MeshSpec mesh, RailMap rails) : mesh_(std::move(mesh)), rails_(rails) {
    mesh_.validate();
    rails_.validate(mesh_.mode_count);
    rule_ = PostselectionRule::coincidence(
        {rails_.clone1.zero_mode, rails_.clone1.one_mode}, {rails_.clone2.zero_mode, rails_.clone2.one_mode});
}

FockState Cloner::input_state() const {
    std::vector<int> occ(mesh_.mode_count, 0);
    occ[rails_.input.zero_mode] = 1;
    occ[rails_.ancilla.zero_mode] = 1;
    return FockState(std::move(occ));
}

PostselectionRule Cloner::coincidence_rule() const {
    return rule_;
}

UnitaryMatrix Cloner::variational_unitary(const PhaseVector &params) const {
    return build_mesh(mesh_, params);
}

CloneResult Cloner::run(const PhaseVector &params, const QubitState &psi) const {
    return run(variational_unitary(params), psi);
}

CloneResult Cloner::run(const UnitaryMatrix &variational, const QubitState &psi) const {
    const UnitaryMatrix u = variational * stage_unitary(prep_phases(psi, rails_), mesh_.mode_count);
    PostselectionResult post = postselect(evolve(input_state(), u), rule_);
    CloneResult result;
    if (post.zero_support()) {
        return result;
    }
    result.outcome.p_post = post.probability;
    result.outcome.f1 = fidelity(reduced_clone(*post.state, 1, rails_), psi);
    result.outcome.f2 = fidelity(reduced_clone(*post.state, 2, rails_), psi);
    result.joint = std::move(post.state);
    return result;
}

MeasuredDistribution Cloner::measured_distribution(const UnitaryMatrix &variational, const QubitState &psi) const {
    const DeviceUnitary device =
        full_device(stage_unitary(prep_phases(psi, rails_), mesh_.mode_count), variational,
                    stage_unitary(measurement_phases(psi, rails_), mesh_.mode_count));
    const FockAmplitudes out = evolve(input_state(), device.total());
    MeasuredDistribution dist;
    dist.rails = rails_;
    for (size_t k = 0; k < out.size(); k++) {
        if (rule_(out.patterns()[k])) {
            dist.patterns.push_back(out.patterns()[k]);
            dist.probabilities.push_back(std::norm(out[k]));
        }
    }
    return dist;
}

CloningOutcome Cloner::measure(const PhaseVector &params, const QubitState &psi) const {
    return measure(variational_unitary(params), psi);
}

CloningOutcome Cloner::measure(const UnitaryMatrix &variational, const QubitState &psi) const {
    const MeasuredDistribution dist = measured_distribution(variational, psi);
    const double p = dist.acceptance();
    if (p < kZeroSupport) {
        return {};
    }
    double hit1 = 0;
    double hit2 = 0;
    for (size_t k = 0; k < dist.patterns.size(); k++) {
        hit1 += dist.patterns[k][rails_.clone1.zero_mode] == 1 ? dist.probabilities[k] : 0;
        hit2 += dist.patterns[k][rails_.clone2.zero_mode] == 1 ? dist.probabilities[k] : 0;
    }
    return {clamp_unit(hit1 / p), clamp_unit(hit2 / p), clamp_unit(p)};
}

double phase_covariant_terms(std::span<const CloningOutcome> outcomes) {
    double total = 0;
    for (const auto &o : outcomes) {
        total += (1 - o.f1) * (1 - o.f1) + (1 - o.f2) * (1 - o.f2) + (o.f1 - o.f2) * (o.f1 - o.f2);
    }
    return total;
}

double state_dependent_terms(const CloningOutcome &a, const CloningOutcome &b, double lambda) {
    if (!(lambda >= 0)) {
        throw std::invalid_argument("state-dependent cost: lambda must be >= 0");
    }
    const CloningOutcome both[] = {a, b};
    const double regular = (1 - a.p_post) * (1 - a.p_post) + (1 - b.p_post) * (1 - b.p_post) +
                           (a.p_post - b.p_post) * (a.p_post - b.p_post);
    return phase_covariant_terms(both) + lambda * regular;
}

double cost_pc(const Cloner &cloner, const PhaseVector &params) {
    return cost_pc(cloner, params, phase_covariant_training_set());
}

double cost_pc(const Cloner &cloner, const PhaseVector &params, const TrainingSet &states) {
    const UnitaryMatrix u = cloner.variational_unitary(params);
    std::vector<CloningOutcome> outcomes;
    outcomes.reserve(states.size());
    for (const auto &psi : states) {
        outcomes.push_back(cloner.run(u, psi).outcome);
    }
    return phase_covariant_terms(outcomes);
}

double cost_sd(const Cloner &cloner, const PhaseVector &params, const QubitState &a, const QubitState &b, double lambda) {
    const UnitaryMatrix u = cloner.variational_unitary(params);
    return state_dependent_terms(cloner.run(u, a).outcome, cloner.run(u, b).outcome, lambda);
}

DesignCheck design_identity_check(const DensityMatrix2 &rho, size_t quadrature_points) {
    validate_density(rho);
    if (quadrature_points < 100) {
        throw std::invalid_argument("design_identity_check: need at least 100 quadrature points");
    }
    auto term = [&](const QubitState &psi) {
        const double f = fidelity(rho, psi);
        return (1 - f) * (1 - f);
    };
    DesignCheck out;
    // Trapezoid on a periodic integrand: equal weights on the uniform grid.
    for (const auto &psi : equatorial_sweep(quadrature_points)) {
        out.quadrature += term(psi);
    }
    out.quadrature /= static_cast<double>(quadrature_points);
    for (const auto &psi : phase_covariant_training_set()) {
        out.four_point += term(psi) / 4;
    }
    return out;
}

std::pair<DesignCheck, DesignCheck> pipeline_design_gap(
    const Cloner &cloner, const PhaseVector &params, size_t quadrature_points) {
    if (quadrature_points < 100) {
        throw std::invalid_argument("pipeline_design_gap: need at least 100 quadrature points");
    }
    const UnitaryMatrix u = cloner.variational_unitary(params);
    auto accumulate = [&](const TrainingSet &states, DesignCheck &c1, DesignCheck &c2, double DesignCheck::*field) {
        const double w = 1.0 / static_cast<double>(states.size());
        for (const auto &psi : states) {
            const CloningOutcome o = cloner.run(u, psi).outcome;
            c1.*field += w * (1 - o.f1) * (1 - o.f1);
            c2.*field += w * (1 - o.f2) * (1 - o.f2);
        }
    };
    std::pair<DesignCheck, DesignCheck> out;
    accumulate(equatorial_sweep(quadrature_points), out.first, out.second, &DesignCheck::quadrature);
    accumulate(phase_covariant_training_set(), out.first, out.second, &DesignCheck::four_point);
    return out;
}

double semiclassical_baseline() {
    return kSemiclassicalFidelity;
}

double semiclassical_monte_carlo(
    uint64_t trials, uint64_t seed, std::optional<double> fixed_basis_phi, std::optional<double> fixed_input_phi) {
    if (trials == 0) {
        throw std::invalid_argument("semiclassical_monte_carlo: need at least one trial");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0, kTwoPi);
    std::uniform_real_distribution<double> unit(0, 1);
    double total = 0;
    for (uint64_t t = 0; t < trials; t++) {
        const double input = fixed_input_phi ? *fixed_input_phi : angle(rng);
        const double basis = fixed_basis_phi ? *fixed_basis_phi : angle(rng);
        const Eigen::Vector2cd psi = QubitState::equatorial(input).amplitudes();
        const Eigen::Vector2cd along = QubitState::equatorial(basis).amplitudes();
        const Eigen::Vector2cd against = QubitState::equatorial(basis + kPi).amplitudes();
        const double p_along = std::norm(along.dot(psi));
        // Both copies are prepared in the observed basis state; each has fidelity |⟨ψ|outcome⟩|².
        const bool hit = unit(rng) < p_along;
        total += std::norm((hit ? along : against).dot(psi));
    }
    return total / static_cast<double>(trials);
}

}  // namespace vqclone
