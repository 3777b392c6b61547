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

#include <gtest/gtest.h>

#include <random>

#include "vqclone/optimizer.h"
#include "vqclone/oracles.h"

using namespace vqclone;

namespace {

constexpr double kPi = std::numbers::pi;

PhaseVector random_phases(std::mt19937_64 &rng, size_t n = 12) {
    std::uniform_real_distribution<double> angle(0, kTwoPi);
    std::vector<double> v(n);
    for (auto &x : v) x = angle(rng);
    return PhaseVector(v);
}

QubitState random_qubit(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> polar(0, kPi);
    std::uniform_real_distribution<double> azimuth(0, kTwoPi);
    return {polar(rng), azimuth(rng)};
}

// Amplitudes left on the input rails when only the photon to be cloned is injected.
Eigen::Vector2cd prepared_rail_amplitudes(const QubitState &psi) {
    const RailMap rails = RailMap::defaults();
    std::vector<int> occ(4, 0);
    occ[rails.input.zero_mode] = 1;
    const FockAmplitudes out = evolve(FockState(occ), stage_unitary(prep_phases(psi, rails), 4));
    auto single = [&](size_t mode) {
        std::vector<int> t(4, 0);
        t[mode] = 1;
        return out.amplitude(FockState(t));
    };
    EXPECT_NEAR(std::norm(single(rails.input.zero_mode)) + std::norm(single(rails.input.one_mode)), 1, 1e-12);
    return {single(rails.input.zero_mode), single(rails.input.one_mode)};
}

FockAmplitudes joint_from_logical(const Eigen::Matrix2cd &m) {
    const RailMap rails = RailMap::defaults();
    FockAmplitudes joint(2, 4);
    for (int j = 0; j < 2; j++) {
        for (int k = 0; k < 2; k++) {
            std::vector<int> occ(4, 0);
            occ[j ? rails.clone1.one_mode : rails.clone1.zero_mode]++;
            occ[k ? rails.clone2.one_mode : rails.clone2.zero_mode]++;
            joint[joint.index_of(FockState(occ))] = m(j, k);
        }
    }
    return joint;
}

}  // namespace

TEST(QubitState, amplitudes) {
    const auto v = QubitState{kPi / 4, kPi / 2}.amplitudes();
    EXPECT_NEAR(std::abs(v(0) - 1 / std::sqrt(2.0)), 0, 1e-15);
    EXPECT_NEAR(std::abs(v(1) - Complex(0, 1 / std::sqrt(2.0))), 0, 1e-15);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 20; i++) {
        const QubitState q = random_qubit(rng);
        EXPECT_NEAR(q.amplitudes().squaredNorm(), 1, 1e-15);
        EXPECT_NEAR(std::abs(q.amplitudes().dot(q.orthogonal().amplitudes())), 0, 1e-15);
    }
}

TEST(QubitState, training_set) {
    const TrainingSet set = phase_covariant_training_set();
    ASSERT_EQ(set.size(), 4u);
    for (size_t k = 0; k < 4; k++) {
        EXPECT_DOUBLE_EQ(set[k].theta, kPi / 4);
        EXPECT_NEAR(set[k].phi, k * kPi / 2, 1e-15);
    }
    EXPECT_EQ(default_state_pairs().size(), 4u);
}

TEST(RailMap, defaults_and_validation) {
    const RailMap r = RailMap::defaults();
    EXPECT_NO_THROW(r.validate(4));
    EXPECT_EQ(r.clone1, (RailPair{0, 1}));
    EXPECT_EQ(r.clone2, (RailPair{2, 3}));
    EXPECT_EQ(r.input, (RailPair{1, 2}));
    EXPECT_EQ(r.ancilla, (RailPair{3, 0}));
    RailMap bad = r;
    bad.clone2 = {1, 2};
    EXPECT_THROW(bad.validate(4), std::invalid_argument);
    bad = r;
    bad.ancilla = {1, 0};
    EXPECT_THROW(bad.validate(4), std::invalid_argument);
    EXPECT_THROW(r.validate(6), std::invalid_argument);
}

TEST(Prep, maps_injected_photon_to_psi) {
    auto v = prepared_rail_amplitudes({0, 0});
    EXPECT_LT(std::abs(v(0) - 1.0), 1e-12);
    EXPECT_LT(std::abs(v(1)), 1e-12);

    v = prepared_rail_amplitudes(QubitState::equatorial(0));
    EXPECT_LT(std::abs(v(0) - 1 / std::sqrt(2.0)), 1e-12);
    EXPECT_LT(std::abs(v(1) - 1 / std::sqrt(2.0)), 1e-12);

    v = prepared_rail_amplitudes({kPi / 4, kPi / 2});
    EXPECT_LT(std::abs(v(0) - 1 / std::sqrt(2.0)), 1e-12);
    EXPECT_LT(std::abs(v(1) - Complex(0, 1 / std::sqrt(2.0))), 1e-12);

    std::mt19937_64 rng(2);
    for (int i = 0; i < 50; i++) {
        const QubitState q = random_qubit(rng);
        EXPECT_LT((prepared_rail_amplitudes(q) - q.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Prep, leaves_ancilla_in_logical_zero) {
    const RailMap rails = RailMap::defaults();
    const UnitaryMatrix u = stage_unitary(prep_phases({0.3, 1.7}, rails), 4);
    EXPECT_LT(std::abs(u(rails.ancilla.zero_mode, rails.ancilla.zero_mode) - 1.0), 1e-15);
}

TEST(Measurement, rotates_psi_onto_zero_rail) {
    std::mt19937_64 rng(3);
    const RailMap rails = RailMap::defaults();
    for (int i = 0; i < 50; i++) {
        const QubitState q = random_qubit(rng);
        const UnitaryMatrix u = stage_unitary(measurement_phases(q, rails), 4);
        for (const RailPair &pair : {rails.clone1, rails.clone2}) {
            Eigen::VectorXcd in = Eigen::VectorXcd::Zero(4);
            in(pair.zero_mode) = q.amplitudes()(0);
            in(pair.one_mode) = q.amplitudes()(1);
            EXPECT_NEAR(std::norm((u * in)(pair.zero_mode)), 1, 1e-12);
        }
    }
    // |0> needs no rotation: the zero rail keeps the photon.
    const UnitaryMatrix u0 = stage_unitary(measurement_phases({0, 0}, rails), 4);
    EXPECT_NEAR(std::norm(u0(0, 0)), 1, 1e-15);
    EXPECT_NEAR(std::norm(u0(2, 2)), 1, 1e-15);
}

TEST(Fidelity, pure_and_mixed) {
    const QubitState psi{0.4, 1.1};
    const Eigen::Vector2cd v = psi.amplitudes();
    const Eigen::Vector2cd w = psi.orthogonal().amplitudes();
    EXPECT_NEAR(fidelity(v * v.adjoint(), psi), 1, 1e-15);
    const DensityMatrix2 bound = 5.0 / 6.0 * v * v.adjoint() + 1.0 / 6.0 * w * w.adjoint();
    EXPECT_NEAR(fidelity(bound, psi), 5.0 / 6.0, 1e-12);
    EXPECT_NEAR(fidelity(DensityMatrix2::Identity() / 2.0, psi), 0.5, 1e-15);
}

TEST(Fidelity, rejects_invalid_density) {
    DensityMatrix2 bad = DensityMatrix2::Identity();
    EXPECT_THROW(fidelity(bad, {0, 0}), std::invalid_argument);  // trace 2
    bad << 1.5, 0, 0, -0.5;
    EXPECT_THROW(fidelity(bad, {0, 0}), std::invalid_argument);  // negative eigenvalue
    bad << 0.5, 0.1, 0.2, 0.5;
    EXPECT_THROW(fidelity(bad, {0, 0}), std::invalid_argument);  // not Hermitian
}

TEST(ReducedClone, product_and_entangled) {
    Eigen::Matrix2cd product = Eigen::Matrix2cd::Zero();
    product(0, 1) = 1;  // clone 1 in |0>, clone 2 in |1>
    const FockAmplitudes joint = joint_from_logical(product);
    DensityMatrix2 zero = DensityMatrix2::Zero();
    zero(0, 0) = 1;
    DensityMatrix2 one = DensityMatrix2::Zero();
    one(1, 1) = 1;
    EXPECT_LT((reduced_clone(joint, 1, RailMap::defaults()) - zero).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((reduced_clone(joint, 2, RailMap::defaults()) - one).cwiseAbs().maxCoeff(), 1e-15);

    Eigen::Matrix2cd bell = Eigen::Matrix2cd::Identity() / std::sqrt(2.0);
    const FockAmplitudes ent = joint_from_logical(bell);
    for (int which : {1, 2}) {
        const DensityMatrix2 rho = reduced_clone(ent, which, RailMap::defaults());
        EXPECT_LT((rho - DensityMatrix2::Identity() / 2.0).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ReducedClone, rejects_state_outside_coincidence_support) {
    FockAmplitudes bunched(2, 4);
    bunched[bunched.index_of(FockState({2, 0, 0, 0}))] = 1;
    EXPECT_THROW(reduced_clone(bunched, 1, RailMap::defaults()), std::invalid_argument);
    EXPECT_THROW(reduced_clone(joint_from_logical(Eigen::Matrix2cd::Identity() / std::sqrt(2.0)), 3,
                               RailMap::defaults()),
                 std::invalid_argument);
}

TEST(Cloner, identity_variational_on_plus) {
    // Without the mesh the input photon stays on modes 1/2 and the ancilla on mode 3.
    // Patterns: (0,1,0,1) with probability 1/2 is a coincidence; (0,0,1,1) is not.
    // Clone 1 then holds its photon on mode 1 (logical |1>), clone 2 on mode 3 (logical |1>),
    // so both fidelities with |+> are 1/2.
    const Cloner cloner;
    const CloneResult r = cloner.run(UnitaryMatrix::Identity(4, 4), QubitState::equatorial(0));
    EXPECT_NEAR(r.outcome.p_post, 0.5, 1e-12);
    EXPECT_NEAR(r.outcome.f1, 0.5, 1e-12);
    EXPECT_NEAR(r.outcome.f2, 0.5, 1e-12);
    ASSERT_TRUE(r.joint.has_value());
    EXPECT_NEAR(r.joint->probability(FockState({0, 1, 0, 1})), 1, 1e-12);
    const DensityMatrix2 rho1 = reduced_clone(*r.joint, 1, cloner.rails());
    EXPECT_NEAR(rho1(1, 1).real(), 1, 1e-12);
}

TEST(Cloner, zero_support_fallback) {
    // A mesh that routes both photons into clone 2's rails never produces a coincidence.
    UnitaryMatrix swap = UnitaryMatrix::Zero(4, 4);
    swap(2, 1) = swap(1, 2) = swap(0, 0) = swap(3, 3) = 1;  // 1 ↔ 2
    const Cloner cloner;
    const CloneResult r = cloner.run(swap, {0, 0});
    EXPECT_FALSE(r.joint.has_value());
    EXPECT_EQ(r.outcome.p_post, 0);
    EXPECT_EQ(r.outcome.f1, 0);
    EXPECT_EQ(r.outcome.f2, 0);
    const CloningOutcome m = cloner.measure(swap, {0, 0});
    EXPECT_EQ(m.p_post, 0);
    EXPECT_EQ(m.f1, 0);
}

TEST(Cloner, ranges_and_clone_validity) {
    std::mt19937_64 rng(4);
    const Cloner cloner;
    for (int i = 0; i < 200; i++) {
        const PhaseVector p = random_phases(rng);
        const QubitState q = random_qubit(rng);
        const CloneResult r = cloner.run(p, q);
        for (double x : {r.outcome.f1, r.outcome.f2, r.outcome.p_post}) {
            EXPECT_GE(x, 0);
            EXPECT_LE(x, 1);
        }
        if (!r.joint) continue;
        for (int which : {1, 2}) {
            const DensityMatrix2 rho = reduced_clone(*r.joint, which, cloner.rails());
            EXPECT_NO_THROW(validate_density(rho));
            EXPECT_NEAR(rho.trace().real(), 1, 1e-10);
        }
    }
}

TEST(Cloner, measurement_path_matches_density_path) {
    std::mt19937_64 rng(5);
    const Cloner cloner;
    for (int i = 0; i < 100; i++) {
        const PhaseVector p = random_phases(rng);
        const QubitState q = random_qubit(rng);
        const CloningOutcome dens = cloner.run(p, q).outcome;
        const CloningOutcome meas = cloner.measure(p, q);
        EXPECT_NEAR(dens.f1, meas.f1, 1e-10);
        EXPECT_NEAR(dens.f2, meas.f2, 1e-10);
        EXPECT_NEAR(dens.p_post, meas.p_post, 1e-10);
    }
    // |+> specifically: the balanced rotation reproduces <+|ρ|+>.
    const PhaseVector p = random_phases(rng);
    const QubitState plus = QubitState::equatorial(0);
    const CloneResult r = cloner.run(p, plus);
    ASSERT_TRUE(r.joint);
    const Eigen::Vector2cd v = plus.amplitudes();
    const double direct = (v.adjoint() * reduced_clone(*r.joint, 1, cloner.rails()) * v)(0, 0).real();
    EXPECT_NEAR(cloner.measure(p, plus).f1, direct, 1e-10);
}

TEST(Cost, phase_covariant_terms) {
    const std::vector<CloningOutcome> perfect(4, {1, 1, 0.3});
    EXPECT_EQ(phase_covariant_terms(perfect), 0);
    const std::vector<CloningOutcome> bound(4, {5.0 / 6, 5.0 / 6, 0.3});
    EXPECT_NEAR(phase_covariant_terms(bound), 2.0 / 9.0, 1e-15);
}

TEST(Cost, state_dependent_terms) {
    EXPECT_EQ(state_dependent_terms({1, 1, 1}, {1, 1, 1}, 1.0), 0);
    const CloningOutcome a{0.9, 0.8, 0.3}, b{0.7, 0.95, 0.6};
    const double fid = 0.01 + 0.04 + 0.01 + 0.09 + 0.0025 + 0.0625;
    EXPECT_NEAR(state_dependent_terms(a, b, 0), fid, 1e-15);
    EXPECT_NEAR(state_dependent_terms(a, b, 2.0), fid + 2 * (0.49 + 0.16 + 0.09), 1e-15);
    EXPECT_THROW(state_dependent_terms(a, b, -1), std::invalid_argument);
}

TEST(Cost, sd_matches_hand_assembly) {
    std::mt19937_64 rng(6);
    const Cloner cloner;
    const PhaseVector p = random_phases(rng);
    const QubitState a{kPi / 4, 0}, b{kPi / 4, kPi / 2};
    const CloningOutcome oa = cloner.run(p, a).outcome;
    const CloningOutcome ob = cloner.run(p, b).outcome;
    auto sq = [](double x) { return x * x; };
    const double expected = sq(1 - oa.f1) + sq(1 - oa.f2) + sq(oa.f1 - oa.f2) + sq(1 - ob.f1) + sq(1 - ob.f2) +
                            sq(ob.f1 - ob.f2) + sq(1 - oa.p_post) + sq(1 - ob.p_post) + sq(oa.p_post - ob.p_post);
    EXPECT_NEAR(cost_sd(cloner, p, a, b, 1.0), expected, 1e-14);
}

TEST(Cost, pc_nonnegative_and_symmetric_under_clone_swap) {
    std::mt19937_64 rng(7);
    const Cloner cloner;
    const Cloner swapped(MeshSpec::clements(4), RailMap::defaults().with_clones_swapped());
    for (int i = 0; i < 50; i++) {
        const PhaseVector p = random_phases(rng);
        const double c = cost_pc(cloner, p);
        EXPECT_GE(c, 0);
        EXPECT_NEAR(c, cost_pc(swapped, p), 1e-12);
        const CloningOutcome o = cloner.run(p, QubitState::equatorial(1.0)).outcome;
        const CloningOutcome s = swapped.run(p, QubitState::equatorial(1.0)).outcome;
        EXPECT_NEAR(o.f1, s.f2, 1e-12);
        EXPECT_NEAR(o.f2, s.f1, 1e-12);
    }
}

TEST(Cost, pc_periodic_in_phases) {
    std::mt19937_64 rng(8);
    const Cloner cloner;
    const PhaseVector p = random_phases(rng);
    std::vector<double> shifted(p.values().begin(), p.values().end());
    for (size_t k = 0; k < shifted.size(); k++) shifted[k] += kTwoPi * static_cast<double>(k % 3) - kTwoPi;
    EXPECT_NEAR(cost_pc(cloner, p), cost_pc(cloner, PhaseVector(shifted)), 1e-12);
}

TEST(DesignIdentity, fixed_clone_cases) {
    DesignCheck c = design_identity_check(DensityMatrix2::Identity() / 2.0, 1000);
    EXPECT_NEAR(c.quadrature, 0.25, 1e-15);
    EXPECT_NEAR(c.four_point, 0.25, 1e-15);
    DensityMatrix2 zero = DensityMatrix2::Zero();
    zero(0, 0) = 1;
    c = design_identity_check(zero, 1000);
    EXPECT_NEAR(c.quadrature, 0.25, 1e-15);
    EXPECT_NEAR(c.four_point, 0.25, 1e-15);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; i++) {
        c = design_identity_check(oracle::random_density(rng), 10000);
        EXPECT_NEAR(c.quadrature, c.four_point, 1e-6);
    }
    EXPECT_THROW(design_identity_check(zero, 10), std::invalid_argument);
}

TEST(Semiclassical, baseline_and_monte_carlo) {
    EXPECT_EQ(semiclassical_baseline(), 0.75);
    EXPECT_NEAR(semiclassical_monte_carlo(1'000'000, 42), 0.75, 0.002);
    EXPECT_NEAR(semiclassical_monte_carlo(1000, 1, 1.234, 1.234), 1.0, 1e-12);
}

TEST(UniversalBound, octahedron_min_fidelity_never_exceeds_five_sixths) {
    // Min fidelity over the six Pauli eigenstates is bounded by the success-weighted average,
    // which the octahedron (a 2-design) carries over to the whole sphere, where 5/6 is optimal.
    const Cloner cloner;
    const TrainingSet octahedron{{0, 0},       {kPi / 2, 0},           QubitState::equatorial(0),
                                 QubitState::equatorial(kPi), QubitState::equatorial(kPi / 2),
                                 QubitState::equatorial(3 * kPi / 2)};
    auto min_fidelity = [&](const PhaseVector &p) {
        double m = 1;
        for (const auto &q : octahedron) {
            const CloningOutcome o = cloner.run(p, q).outcome;
            m = std::min({m, o.f1, o.f2});
        }
        return m;
    };
    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; i++) {
        EXPECT_LE(min_fidelity(random_phases(rng)), 5.0 / 6 + 1e-6);
    }
    NMConfig cfg;
    cfg.max_evaluations = 3000;
    cfg.seed = 3;
    const TrainResult universal = train(cloner, PhaseCovariantTask{octahedron}, cfg, NoiseConfig{}, 6, 1);
    const double trained = min_fidelity(PhaseVector(universal.best().best_point));
    EXPECT_LE(trained, 5.0 / 6 + 1e-6);

    NMConfig pc_cfg;
    pc_cfg.max_evaluations = 3000;
    const TrainResult pc = train(cloner, PhaseCovariantTask{}, pc_cfg, NoiseConfig{}, 4, 1);
    EXPECT_LE(min_fidelity(PhaseVector(pc.best().best_point)), 5.0 / 6 + 1e-6);
}

TEST(DesignIdentity, pipeline_gap_is_reported) {
    std::mt19937_64 rng(11);
    const Cloner cloner;
    const auto [c1, c2] = pipeline_design_gap(cloner, random_phases(rng), 200);
    for (const DesignCheck &c : {c1, c2}) {
        EXPECT_GE(c.quadrature, 0);
        EXPECT_GE(c.four_point, 0);
        EXPECT_LE(c.quadrature, 1);
    }
}
