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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "vqclone/optimizer.h"

namespace py = pybind11;
using namespace vqclone;

namespace {

PhaseVector phases(const std::vector<double> &v) {
    return PhaseVector(v);
}

MeshSpec mesh_from_json(const std::string &text) {
    MeshSpec m = nlohmann::json::parse(text).get<MeshSpec>();
    m.validate();
    return m;
}

py::dict trace_dict(const OptimizationTrace &t) {
    py::dict d;
    d["best_point"] = t.best_point;
    d["best_cost"] = t.best_cost;
    d["evaluations"] = t.evaluations();
    d["iterations"] = t.iterations;
    d["reboot_iterations"] = t.reboot_iterations;
    d["termination"] = to_string(t.termination);
    std::vector<double> costs, best;
    for (const auto &r : t.records) {
        costs.push_back(r.cost);
        best.push_back(r.best_cost);
    }
    d["costs"] = costs;
    d["best_costs"] = best;
    return d;
}

}  // namespace

PYBIND11_MODULE(_vqclone, m) {
    m.doc() = "Linear-optical cloner simulation core";

    py::class_<MeshSpec>(m, "MeshSpec")
        .def_static("clements", &MeshSpec::clements, py::arg("mode_count") = 4)
        .def_static("single_mzi", &MeshSpec::single_mzi)
        .def_static("from_json", &mesh_from_json)
        .def_readonly("mode_count", &MeshSpec::mode_count)
        .def_property_readonly("phase_count", &MeshSpec::phase_count)
        .def_property_readonly("column_count", &MeshSpec::column_count)
        .def("to_json", [](const MeshSpec &s) { return nlohmann::json(s).dump(); });

    m.def(
        "build_mesh", [](const MeshSpec &spec, const std::vector<double> &p) { return build_mesh(spec, phases(p)); },
        py::arg("spec"), py::arg("phases"));
    m.def("mzi_unitary", [](double internal, double external) { return Eigen::MatrixXcd(mzi_unitary(internal, external)); },
          py::arg("internal"), py::arg("external"));
    m.def("permanent", &permanent, py::arg("matrix"));
    m.def(
        "evolve",
        [](const std::vector<int> &occupations, const UnitaryMatrix &u) {
            const FockAmplitudes out = evolve(FockState(occupations), u);
            py::dict amps;
            for (size_t k = 0; k < out.size(); k++) {
                const auto &occ = out.patterns()[k].occupations;
                py::tuple key(occ.size());
                for (size_t i = 0; i < occ.size(); i++) key[i] = occ[i];
                amps[key] = out[k];
            }
            return amps;
        },
        py::arg("occupations"), py::arg("unitary"));

    py::class_<QubitState>(m, "QubitState")
        .def(py::init<double, double>(), py::arg("theta"), py::arg("phi"))
        .def_readwrite("theta", &QubitState::theta)
        .def_readwrite("phi", &QubitState::phi)
        .def("amplitudes", [](const QubitState &q) { return Eigen::VectorXcd(q.amplitudes()); })
        .def_static("equatorial", &QubitState::equatorial, py::arg("phi"))
        .def("__repr__", [](const QubitState &q) {
            return "QubitState(theta=" + std::to_string(q.theta) + ", phi=" + std::to_string(q.phi) + ")";
        });

    py::class_<CloningOutcome>(m, "CloningOutcome")
        .def_readonly("f1", &CloningOutcome::f1)
        .def_readonly("f2", &CloningOutcome::f2)
        .def_readonly("p_post", &CloningOutcome::p_post)
        .def("__repr__", [](const CloningOutcome &o) {
            return "CloningOutcome(f1=" + std::to_string(o.f1) + ", f2=" + std::to_string(o.f2) +
                   ", p_post=" + std::to_string(o.p_post) + ")";
        });

    py::class_<StatePair>(m, "StatePair")
        .def_readonly("label", &StatePair::label)
        .def_readonly("a", &StatePair::a)
        .def_readonly("b", &StatePair::b);
    m.def("default_state_pairs", &default_state_pairs);
    m.def("phase_covariant_training_set", &phase_covariant_training_set);

    py::class_<Cloner>(m, "Cloner")
        .def(py::init([](const MeshSpec &mesh) { return Cloner(mesh); }), py::arg("mesh") = MeshSpec::clements(4))
        .def_property_readonly("phase_count", &Cloner::phase_count)
        .def(
            "variational_unitary",
            [](const Cloner &c, const std::vector<double> &p) { return c.variational_unitary(phases(p)); },
            py::arg("phases"))
        .def(
            "run", [](const Cloner &c, const std::vector<double> &p, const QubitState &psi) {
                return c.run(phases(p), psi).outcome;
            },
            py::arg("phases"), py::arg("state"))
        .def(
            "measure", [](const Cloner &c, const std::vector<double> &p, const QubitState &psi) {
                return c.measure(phases(p), psi);
            },
            py::arg("phases"), py::arg("state"));

    m.def(
        "cost_pc", [](const Cloner &c, const std::vector<double> &p) { return cost_pc(c, phases(p)); },
        py::arg("cloner"), py::arg("phases"));
    m.def(
        "cost_sd",
        [](const Cloner &c, const std::vector<double> &p, const QubitState &a, const QubitState &b, double lambda) {
            return cost_sd(c, phases(p), a, b, lambda);
        },
        py::arg("cloner"), py::arg("phases"), py::arg("a"), py::arg("b"), py::arg("lam") = 1.0);
    m.def(
        "fidelity", [](const Eigen::Matrix2cd &rho, const QubitState &psi) { return fidelity(rho, psi); },
        py::arg("rho"), py::arg("state"));
    m.def(
        "design_identity_check",
        [](const Eigen::Matrix2cd &rho, size_t points) {
            const DesignCheck d = design_identity_check(rho, points);
            return std::make_pair(d.quadrature, d.four_point);
        },
        py::arg("rho"), py::arg("points") = 10000);

    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("stream"));
    m.def(
        "sample_counts",
        [](const std::vector<double> &p, int64_t trials, uint64_t seed) {
            const SampledCounts c = sample_counts(p, trials, seed);
            return std::make_pair(c.accepted, c.rejected);
        },
        py::arg("probabilities"), py::arg("trials"), py::arg("seed"));

    m.def(
        "nelder_mead",
        [](const std::function<double(std::vector<double>)> &f, std::vector<double> init, int64_t max_evaluations,
           bool reboot) {
            NMConfig cfg;
            cfg.max_evaluations = max_evaluations;
            cfg.reboot_enabled = reboot;
            const ScalarObjective wrapped = [&f](std::span<const double> x) {
                return f(std::vector<double>(x.begin(), x.end()));
            };
            return trace_dict(nelder_mead(wrapped, std::move(init), cfg));
        },
        py::arg("cost"), py::arg("init"), py::arg("max_evaluations") = 2500, py::arg("reboot") = true);

    m.def(
        "train",
        [](const Cloner &c, const std::string &task, std::optional<std::string> pair, double lam, size_t restarts,
           int64_t max_evaluations, uint64_t seed, std::optional<int64_t> shots, size_t threads) {
            Task t;
            if (task == "pc") {
                t = PhaseCovariantTask{};
            } else if (task == "sd") {
                if (!pair) throw std::invalid_argument("task 'sd' needs a state pair label");
                std::optional<StatePair> found;
                for (const auto &p : default_state_pairs()) {
                    if (p.label == *pair) found = p;
                }
                if (!found) throw std::invalid_argument("unknown state pair '" + *pair + "'");
                t = StateDependentTask{*found, lam};
            } else {
                throw std::invalid_argument("task must be 'pc' or 'sd'");
            }
            NMConfig cfg;
            cfg.max_evaluations = max_evaluations;
            cfg.seed = derive_seed(seed, 1);
            const NoiseConfig noise{shots, derive_seed(seed, 2)};
            TrainResult r;
            {
                py::gil_scoped_release release;
                r = train(c, t, cfg, noise, restarts, threads);
            }
            py::dict d = trace_dict(r.best());
            d["restart"] = r.best_index;
            py::list all;
            for (const auto &tr : r.traces) all.append(tr.best_cost);
            d["restart_best_costs"] = all;
            return d;
        },
        py::arg("cloner"), py::arg("task") = "pc", py::arg("pair") = py::none(), py::arg("lam") = 1.0,
        py::arg("restarts") = 20, py::arg("max_evaluations") = 2500, py::arg("seed") = 0,
        py::arg("shots") = py::none(), py::arg("threads") = 0);

    m.def(
        "validate_sweep",
        [](const Cloner &c, const std::vector<double> &p, size_t count, std::optional<int64_t> shots, uint64_t seed) {
            std::vector<std::tuple<double, double, double, double>> rows;
            for (const auto &r : validate_sweep(c, phases(p), count, NoiseConfig{shots, derive_seed(seed, 2)})) {
                rows.emplace_back(r.phi, r.outcome.f1, r.outcome.f2, r.outcome.p_post);
            }
            return rows;
        },
        py::arg("cloner"), py::arg("phases"), py::arg("count") = 50, py::arg("shots") = py::none(),
        py::arg("seed") = 0);

    m.attr("OPTIMAL_PHASE_COVARIANT_FIDELITY") = kOptimalPhaseCovariantFidelity;
    m.attr("UNIVERSAL_FIDELITY_BOUND") = kUniversalFidelityBound;
    m.attr("SEMICLASSICAL_FIDELITY") = kSemiclassicalFidelity;
}
