// Copyright 2026 The paulimit Authors
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


#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cli.h"
#include "paulimit/clifford.h"
#include "paulimit/device_sim.h"
#include "paulimit/errors.h"
#include "paulimit/estimation.h"
#include "paulimit/mitigation.h"
#include "paulimit/pauli_channel.h"
#include "paulimit/transforms.h"

namespace py = pybind11;
using namespace paulimit;

namespace {

using Vec = std::vector<double>;

py::array_t<double> to_array(const Vec &v) {
    py::array_t<double> out((py::ssize_t)v.size());
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::dict circuit_dict(const IdentityCircuit &c) {
    std::vector<std::vector<int>> layers;
    for (const auto &layer : c.layers) {
        std::vector<int> row;
        for (auto g : layer) {
            row.push_back(g.id);
        }
        layers.push_back(row);
    }
    std::vector<int> inverse;
    for (auto g : c.inverse_layer) {
        inverse.push_back(g.id);
    }
    py::dict d;
    d["n"] = c.num_qubits;
    d["depth"] = c.depth;
    d["layers"] = layers;
    d["inverse"] = inverse;
    d["seed"] = c.seed;
    return d;
}

py::dict row_dict(const ReportRow &row) {
    py::dict d;
    d["depth"] = row.depth;
    d["input"] = row.input ? py::cast(*row.input) : py::none();
    d["method"] = method_name(row.method);
    d["mean_jsd"] = row.mean_jsd;
    d["std_jsd"] = row.std_jsd;
    d["samples"] = row.samples;
    d["flags"] = row.flags;
    return d;
}

CliffordGate gate(int id) {
    if (id < 0 || id >= 24) {
        throw StructuralError("Clifford id must be in [0, 24)");
    }
    return CliffordGate{(uint8_t)id};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pauli-channel noise characterization and mitigation for identity circuits";
    py::register_exception<CoverageError>(m, "CoverageError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // transforms
    m.def("fwht", [](Vec v) { return to_array(fwht(v)); }, py::arg("v"), "Unnormalized Walsh-Hadamard transform.");
    m.def("fwht_inverse", [](Vec v) { return to_array(fwht_inverse(v)); }, py::arg("v"));
    m.def("xor_permute", [](Vec v, BasisIndex in) { return to_array(xor_permute(v, in)); }, py::arg("v"),
          py::arg("input"));
    m.def("simplex_project", [](Vec v) { return to_array(simplex_project(v)); }, py::arg("v"),
          "Euclidean projection onto the probability simplex.");

    // clifford
    m.def("compose", [](int g, int h) { return (int)compose(gate(g), gate(h)).id; }, py::arg("g"), py::arg("h"));
    m.def("inverse", [](int g) { return (int)inverse(gate(g)).id; }, py::arg("g"));
    m.def(
        "clifford_unitary",
        [](int g) {
            auto u = clifford_unitary(gate(g));
            Eigen::Matrix2cd out;
            out << u[0], u[1], u[2], u[3];
            return out;
        },
        py::arg("g"));
    m.def(
        "sample_identity_circuit",
        [](size_t n, size_t depth, uint64_t seed) { return circuit_dict(sample_identity_circuit(n, depth, seed)); },
        py::arg("n"), py::arg("depth"), py::arg("seed"));

    // device simulator
    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("num_qubits", &GroundTruth::num_qubits)
        .def_readonly("preset", &GroundTruth::preset)
        .def_property_readonly("rates", [](const GroundTruth &gt) { return to_array(gt.rates); })
        .def("rates_for", [](const GroundTruth &gt, BasisIndex in) { return to_array(gt.rates_for(in)); })
        .def("spam_diagonal", [](const GroundTruth &gt) { return to_array(gt.spam_diagonal()); })
        .def("exact_distribution",
             [](const GroundTruth &gt, size_t depth, BasisIndex in) {
                 return to_array(gt.exact_distribution(depth, in));
             },
             py::arg("depth"), py::arg("input"))
        .def("to_json", &GroundTruth::to_json, py::arg("seed") = 0)
        .def_static("from_json", &GroundTruth::from_json);
    m.def(
        "preset",
        [](size_t n, const std::string &spec, double readout, double prep) {
            auto gt = preset_from_string(n, spec);
            if (readout > 0) {
                gt.with_readout(readout);
            }
            if (prep > 0) {
                gt.with_prep_flip(prep);
            }
            gt.validate();
            return gt;
        },
        py::arg("n"), py::arg("spec"), py::arg("readout") = 0.0, py::arg("prep") = 0.0,
        "Planted device from a preset string such as 'iid_bitflip:0.02'.");

    py::class_<CountsRecord>(m, "CountsRecord")
        .def_readonly("depth", &CountsRecord::depth)
        .def_readonly("input", &CountsRecord::input)
        .def_readonly("seq", &CountsRecord::seq)
        .def_readonly("shots", &CountsRecord::shots)
        .def_property_readonly("counts",
                               [](const CountsRecord &r) {
                                   std::map<BasisIndex, uint64_t> out(r.counts.begin(), r.counts.end());
                                   return out;
                               })
        .def("distribution", [](const CountsRecord &r, size_t dim) { return to_array(r.distribution(dim)); });
    m.def(
        "generate_dataset",
        [](const GroundTruth &gt, std::vector<size_t> depths, size_t circuits, std::vector<BasisIndex> inputs,
           size_t shots, uint64_t seed, size_t workers) {
            py::gil_scoped_release release;
            return generate_dataset(gt, {depths, circuits, inputs, shots, seed, workers});
        },
        py::arg("truth"), py::arg("depths"), py::arg("circuits_per_depth"), py::arg("inputs"),
        py::arg("shots") = DEFAULT_SHOTS, py::arg("seed") = 0, py::arg("workers") = 1);
    m.def(
        "write_dataset",
        [](const std::string &path, const std::vector<CountsRecord> &records, size_t n) {
            std::ofstream out(path);
            if (!out) {
                throw std::runtime_error("cannot write " + path);
            }
            write_dataset(out, records, n);
        },
        py::arg("path"), py::arg("records"), py::arg("n"));
    m.def(
        "read_dataset",
        [](const std::string &path) {
            std::ifstream in(path);
            if (!in) {
                throw std::runtime_error("cannot read " + path);
            }
            size_t n = 0;
            auto records = read_dataset(in, &n);
            return py::make_tuple(records, n);
        },
        py::arg("path"), "Returns (records, n).");

    // noise model and estimation
    py::class_<NoiseModel>(m, "NoiseModel")
        .def_readonly("num_qubits", &NoiseModel::num_qubits)
        .def_property_readonly("inputs",
                               [](const NoiseModel &model) {
                                   std::vector<BasisIndex> out;
                                   for (const auto &[in, noise] : model.inputs) {
                                       out.push_back(in);
                                   }
                                   return out;
                               })
        .def("p", [](const NoiseModel &model, BasisIndex in) { return to_array(model.at(in).p); })
        .def("A", [](const NoiseModel &model, BasisIndex in) { return to_array(model.at(in).A); })
        .def("with_average_rates", &NoiseModel::with_average_rates)
        .def("to_json", [](const NoiseModel &model) { return model.to_json(); })
        .def_static("from_json", &NoiseModel::from_json);
    m.def(
        "estimate_model",
        [](const std::vector<CountsRecord> &records, size_t n, std::vector<BasisIndex> inputs,
           std::vector<size_t> training_depths, bool average_rates, size_t workers) {
            py::gil_scoped_release release;
            return estimate_model(records, n, inputs, {training_depths, average_rates, workers}).model;
        },
        py::arg("records"), py::arg("n"), py::arg("inputs"), py::arg("training_depths"),
        py::arg("average_rates") = false, py::arg("workers") = 1);
    m.def(
        "predict", [](const NoiseModel &model, size_t depth, BasisIndex in) { return to_array(predict(model, depth, in)); },
        py::arg("model"), py::arg("depth"), py::arg("input"));
    m.def(
        "build_Q",
        [](const NoiseModel &model, size_t depth) {
            auto Q = build_Q(model, depth);
            return py::make_tuple(Q.Q, Q.condition);
        },
        py::arg("model"), py::arg("depth"), "Returns (Q, condition).");
    m.def(
        "rb_fit",
        [](const std::map<size_t, double> &survival, size_t n) {
            auto fit = rb_fit(survival, n);
            py::dict d;
            d["A"] = fit.A;
            d["B"] = fit.B;
            d["alpha"] = fit.alpha;
            d["r"] = fit.r;
            d["degenerate"] = fit.degenerate;
            return d;
        },
        py::arg("survival"), py::arg("n"));

    // mitigation
    m.def("jsd", [](Vec p, Vec q) { return jsd(p, q); }, py::arg("p"), py::arg("q"));
    m.def(
        "mitigate",
        [](const Matrix &Q, Vec noisy) {
            return to_array(mitigate(MitigationMatrix{0, Q, estimate_condition(Q)}, noisy));
        },
        py::arg("Q"), py::arg("noisy"));
    m.def("mem_build", [](const std::vector<CountsRecord> &records, size_t n) { return mem_build(records, n).Q; },
          py::arg("records"), py::arg("n"));
    m.def(
        "evaluate",
        [](const std::vector<CountsRecord> &records, size_t n, const NoiseModel &model,
           std::vector<size_t> test_depths, std::vector<BasisIndex> inputs, std::vector<std::string> methods,
           size_t workers) {
            EvaluateOptions opts;
            opts.test_depths = test_depths;
            opts.inputs = inputs;
            opts.methods.clear();
            for (const auto &name : methods) {
                opts.methods.push_back(method_from_name(name));
            }
            opts.workers = workers;
            MitigationReport report;
            {
                py::gil_scoped_release release;
                report = evaluate(records, n, model, opts);
            }
            py::list rows;
            for (const auto &row : report.rows) {
                rows.append(row_dict(row));
            }
            return rows;
        },
        py::arg("records"), py::arg("n"), py::arg("model"), py::arg("test_depths"), py::arg("inputs"),
        py::arg("methods") = std::vector<std::string>{"unmitigated", "MEM", "proposed"}, py::arg("workers") = 1);

    m.def(
        "run_cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in process. Returns (exit_code, stdout, stderr).");
}
