// Copyright 2026 The smplab Authors
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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "smplab/codes.h"
#include "smplab/experiment.h"
#include "smplab/oracle.h"
#include "smplab/protocols.h"
#include "smplab/transforms.h"

namespace py = pybind11;
using namespace smplab;

namespace {

py::dict report_to_dict(const ExperimentReport &r) {
    py::dict summary;
    for (const auto &[k, v] : r.summary) {
        summary[py::str(k)] = v;
    }
    py::dict assertions;
    for (const auto &a : r.assertions) {
        assertions[py::str(a.name)] = py::make_tuple(a.held, a.margin);
    }
    py::dict out;
    out["experiment"] = r.experiment;
    out["passed"] = r.passed();
    out["summary"] = summary;
    out["assertions"] = assertions;
    out["columns"] = r.csv_columns;
    out["rows"] = r.csv_rows;
    out["resolved"] = r.resolved;
    return out;
}

py::dict run(const std::string &experiment, const std::map<std::string, std::string> &params,
             std::optional<std::uint64_t> seed, std::optional<std::uint64_t> trials,
             const std::map<std::string, std::string> &tolerances) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    for (const auto &[k, v] : params) {
        apply_config_entry(cfg, k, v);
    }
    for (const auto &[k, v] : tolerances) {
        apply_config_entry(cfg, "tolerance." + k, v);
    }
    cfg.seed = seed;
    cfg.trials = trials;
    ExperimentReport r;
    {
        py::gil_scoped_release release;
        r = run_experiment(cfg);
    }
    return report_to_dict(r);
}

py::dict learn(const Matrix &rho, const std::vector<Matrix> &elements, double delta, unsigned r) {
    DensityMatrix state = DensityMatrix::from_matrix(rho);
    std::vector<MeasurementOperator> ops;
    for (const Matrix &e : elements) {
        ops.push_back(MeasurementOperator::from_matrix(e));
    }
    if (r == 0) {
        r = default_copies(state.num_qubits(), delta);
    }
    ObservableFamily family(std::move(ops), r);
    LearnResult res = learn_state_message(state, family, delta);
    LearnRecord sent = LearnRecord::deserialize(res.record.serialize());
    py::list entries;
    for (const LearnEntry &e : sent.entries) {
        entries.append(py::make_tuple(e.b, sent.p_tilde(e)));
    }
    py::list probabilities;
    py::list traces;
    for (const LearnStep &s : res.steps) {
        probabilities.append(s.p);
        traces.append(s.projection_trace);
    }
    py::dict out;
    out["r"] = r;
    out["entries"] = entries;
    out["encoded_bits"] = sent.encoded_bits();
    out["estimates"] = reconstruct_estimates(sent, family);
    out["probabilities"] = probabilities;
    out["projection_traces"] = traces;
    out["bad_count_bound"] = bad_count_bound(family.qubits() * r, delta);
    return out;
}

double equality_public_acceptance(unsigned n, unsigned k, std::uint64_t x, std::uint64_t y) {
    return exact_acceptance(equality_public(n, k), mask_to_bits(x, n), mask_to_bits(y, n));
}

}  // namespace

PYBIND11_MODULE(_smplab, m) {
    m.doc() = "Simultaneous message passing protocol simulator.";

    auto base = py::register_exception<SmplabError>(m, "SmplabError");
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
    py::register_exception<DegenerateProjection>(m, "DegenerateProjection", base.ptr());
    py::register_exception<PromiseViolation>(m, "PromiseViolation", base.ptr());
    py::register_exception<VerificationFailure>(m, "VerificationFailure", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    m.def("experiment_names", &experiment_names);
    m.def("experiment_defaults", &experiment_defaults, py::arg("name"));
    m.def("run_experiment", &run, py::arg("experiment"), py::arg("params") = std::map<std::string, std::string>{},
          py::arg("seed") = py::none(), py::arg("trials") = py::none(),
          py::arg("tolerances") = std::map<std::string, std::string>{},
          "Runs a registered experiment and returns its summary, assertions and table.");

    m.def("learn_state", &learn, py::arg("rho"), py::arg("elements"), py::arg("delta") = 0.1, py::arg("r") = 0,
          "Learning pass over a family of measurement operators, with the referee's reconstruction.");
    m.def("bad_count_bound", &bad_count_bound, py::arg("k"), py::arg("delta"));
    m.def("default_copies",
          [](unsigned q, double delta) { return default_copies(q, delta); }, py::arg("q"), py::arg("delta"));
    m.def("truncate_estimate", &truncate_estimate, py::arg("p"), py::arg("delta"));

    m.def("equality_public_acceptance", &equality_public_acceptance, py::arg("n"), py::arg("k"), py::arg("x"),
          py::arg("y"));
    m.def("hadamard_min_distance", [](unsigned n) { return min_distance_bruteforce(LinearCode::hadamard(n)); },
          py::arg("n"));
    m.def("equality_det_complexity", [](unsigned n) { return det_complexity_function(equality_function(n)).total(); },
          py::arg("n"));
}
