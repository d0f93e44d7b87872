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

#include "paulimit/pauli_channel.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "paulimit/errors.h"

namespace paulimit {

namespace {

void require_unit_dc(std::span<const double> A) {
    if (A.empty() || std::abs(A[0] - 1.0) > 1e-12) {
        throw DomainError("SPAM diagonal must have A[0] == 1");
    }
}

// Integer power by squaring so that exact inputs (0, 1, -1) stay exact.
double ipow(double x, size_t m) {
    double result = 1.0;
    while (m) {
        if (m & 1) {
            result *= x;
        }
        x *= x;
        m >>= 1;
    }
    return result;
}

}  // namespace

Matrix build_M(std::span<const double> p) {
    size_t dim = p.size();
    qubits_for_length(dim);
    require_prob_dist(p, "error rates");
    Matrix M(dim, dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            M(i, j) = p[i ^ j];
        }
    }
    return M;
}

std::vector<double> spectral_power_apply(std::span<const double> p, size_t m, std::span<const double> v) {
    if (p.size() != v.size()) {
        throw StructuralError("rate vector and operand have different lengths");
    }
    if (m == 0) {
        qubits_for_length(v.size());
        return {v.begin(), v.end()};
    }
    auto eig = fwht(p);
    auto out = fwht(v);
    for (size_t k = 0; k < out.size(); k++) {
        out[k] *= ipow(eig[k], m);
    }
    fwht_inplace(out);
    double scale = 1.0 / (double)out.size();
    for (auto &x : out) {
        x *= scale;
    }
    return out;
}

Matrix build_N(std::span<const double> A) {
    size_t dim = A.size();
    qubits_for_length(dim);
    require_unit_dc(A);
    Matrix N(dim, dim);
    for (size_t j = 0; j < dim; j++) {
        auto col = apply_N(A, basis_vector(dim, j));
        for (size_t i = 0; i < dim; i++) {
            N(i, j) = col[i];
        }
    }
    return N;
}

std::vector<double> apply_N(std::span<const double> A, std::span<const double> v) {
    if (A.size() != v.size()) {
        throw StructuralError("SPAM diagonal and operand have different lengths");
    }
    auto out = fwht(v);
    for (size_t k = 0; k < out.size(); k++) {
        out[k] *= A[k];
    }
    return fwht_inverse(out);
}

std::vector<double> lambda_from_p(std::span<const double> p) {
    return fwht(p);
}

std::vector<double> p_from_lambda(std::span<const double> lambda) {
    return simplex_project(fwht_inverse(lambda));
}

const InputNoise &NoiseModel::at(BasisIndex in) const {
    auto it = inputs.find(in);
    if (it == inputs.end()) {
        std::stringstream msg;
        msg << "noise model has no entry for input " << in;
        throw CoverageError(msg.str());
    }
    return it->second;
}

void NoiseModel::validate() const {
    check_qubit_count(num_qubits);
    for (const auto &[in, noise] : inputs) {
        if (in >= dim()) {
            throw StructuralError("noise model input index out of range");
        }
        if (noise.p.size() != dim() || noise.A.size() != dim()) {
            throw StructuralError("noise model vectors must have length 2^n");
        }
        require_prob_dist(noise.p, "error rates");
        require_unit_dc(noise.A);
        for (double a : noise.A) {
            if (!std::isfinite(a)) {
                throw DomainError("SPAM diagonal has non-finite entries");
            }
        }
    }
}

NoiseModel NoiseModel::with_average_rates() const {
    auto avg = average_rates(*this);
    NoiseModel out = *this;
    for (auto &[in, noise] : out.inputs) {
        noise.p = avg;
    }
    return out;
}

std::string NoiseModel::to_json(const std::map<std::string, std::string> &meta) const {
    nlohmann::ordered_json j;
    j["n"] = num_qubits;
    nlohmann::ordered_json ins = nlohmann::ordered_json::object();
    for (const auto &[in, noise] : inputs) {
        nlohmann::ordered_json entry;
        entry["p"] = noise.p;
        entry["A"] = noise.A;
        ins[std::to_string(in)] = entry;
    }
    j["inputs"] = ins;
    if (!meta.empty()) {
        j["meta"] = meta;
    }
    return j.dump(2);
}

NoiseModel NoiseModel::from_json(const std::string &text) {
    NoiseModel model;
    try {
        auto j = nlohmann::json::parse(text);
        model.num_qubits = j.at("n").get<size_t>();
        for (const auto &[key, entry] : j.at("inputs").items()) {
            size_t pos = 0;
            BasisIndex in = std::stoull(key, &pos);
            if (pos != key.size()) {
                throw StructuralError("noise model input key '" + key + "' is not an integer");
            }
            model.inputs[in] = InputNoise{entry.at("p").get<std::vector<double>>(),
                                          entry.at("A").get<std::vector<double>>()};
        }
    } catch (const nlohmann::json::exception &e) {
        throw StructuralError(std::string("malformed noise model JSON: ") + e.what());
    } catch (const std::invalid_argument &) {
        throw StructuralError("noise model input keys must be integers");
    }
    model.validate();
    return model;
}

std::vector<double> predict(const NoiseModel &model, size_t m, BasisIndex in) {
    if (in >= model.dim()) {
        std::stringstream msg;
        msg << "input " << in << " out of range for n=" << model.num_qubits;
        throw StructuralError(msg.str());
    }
    const auto &noise = model.at(in);
    auto evolved = spectral_power_apply(noise.p, m, basis_vector(model.dim(), in));
    return simplex_project(apply_N(noise.A, evolved));
}

std::vector<double> average_rates(const NoiseModel &model) {
    if (!model.has_all_inputs()) {
        std::stringstream msg;
        msg << "average rates need all " << model.dim() << " inputs, model has " << model.inputs.size();
        throw DomainError(msg.str());
    }
    std::vector<double> avg(model.dim(), 0.0);
    for (const auto &[in, noise] : model.inputs) {
        for (size_t k = 0; k < avg.size(); k++) {
            avg[k] += noise.p[k];
        }
    }
    for (auto &x : avg) {
        x /= (double)model.inputs.size();
    }
    return simplex_project(avg);
}

double estimate_condition(const Matrix &Q) {
    Eigen::PartialPivLU<Matrix> lu(Q);
    double rcond = lu.rcond();
    if (!(rcond > 0) || !std::isfinite(rcond)) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / rcond;
}

MitigationMatrix build_Q(const NoiseModel &model, size_t m) {
    if (!model.has_all_inputs()) {
        std::stringstream msg;
        msg << "mitigation matrix needs all " << model.dim() << " inputs, model has " << model.inputs.size();
        throw CoverageError(msg.str());
    }
    MitigationMatrix out;
    out.depth = m;
    out.Q.resize(model.dim(), model.dim());
    for (BasisIndex in = 0; in < model.dim(); in++) {
        auto col = predict(model, m, in);
        for (size_t i = 0; i < col.size(); i++) {
            out.Q(i, in) = col[i];
        }
    }
    out.condition = estimate_condition(out.Q);
    return out;
}

}  // namespace paulimit
