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

#include "paulimit/device_sim.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "paulimit/errors.h"
#include "paulimit/parallel.h"
#include "paulimit/pauli_channel.h"
#include "paulimit/rng.h"

namespace paulimit {

namespace {

void check_probability(double x, const char *what) {
    if (!(x >= 0 && x < 0.5)) {
        std::stringstream msg;
        msg << what << " = " << x << " outside [0, 0.5)";
        throw DomainError(msg.str());
    }
}

std::vector<double> iid_rates(size_t num_qubits, double q) {
    std::vector<double> p{1.0};
    for (size_t k = 0; k < num_qubits; k++) {
        std::vector<double> next(p.size() * 2);
        for (size_t i = 0; i < p.size(); i++) {
            next[i] = p[i] * (1 - q);
            next[i + p.size()] = p[i] * q;
        }
        p = std::move(next);
    }
    return p;
}

GroundTruth base_truth(size_t num_qubits, const char *preset, std::vector<double> params) {
    check_qubit_count(num_qubits);
    GroundTruth gt;
    gt.num_qubits = num_qubits;
    gt.spam.resize(num_qubits);
    gt.preset = preset;
    gt.params = std::move(params);
    return gt;
}

}  // namespace

const std::vector<double> &GroundTruth::rates_for(BasisIndex in) const {
    auto it = input_rates.find(in);
    return it == input_rates.end() ? rates : it->second;
}

void GroundTruth::validate() const {
    check_qubit_count(num_qubits);
    if (rates.size() != dim()) {
        throw StructuralError("ground truth rates must have length 2^n");
    }
    require_prob_dist(rates, "ground truth rates");
    for (const auto &[in, p] : input_rates) {
        if (in >= dim() || p.size() != dim()) {
            throw StructuralError("ground truth per-input rates have the wrong shape");
        }
        require_prob_dist(p, "ground truth per-input rates");
    }
    if (spam.size() != num_qubits) {
        throw StructuralError("ground truth needs one SPAM entry per qubit");
    }
    for (const auto &s : spam) {
        check_probability(s.readout_0to1, "readout 0->1 probability");
        check_probability(s.readout_1to0, "readout 1->0 probability");
        check_probability(s.prep_flip, "preparation flip probability");
    }
}

std::vector<double> GroundTruth::spam_diagonal() const {
    std::vector<double> A(dim());
    for (size_t i = 0; i < dim(); i++) {
        double a = 1;
        for (size_t q = 0; q < num_qubits; q++) {
            if ((i >> q) & 1) {
                const auto &s = spam[q];
                a *= (1 - s.readout_0to1 - s.readout_1to0) * (1 - 2 * s.prep_flip);
            }
        }
        A[i] = a;
    }
    return A;
}

std::vector<double> GroundTruth::apply_spam(std::vector<double> v) const {
    if (v.size() != dim()) {
        throw StructuralError("SPAM operand must have length 2^n");
    }
    for (size_t q = 0; q < num_qubits; q++) {
        const auto &s = spam[q];
        // Column-stochastic 2x2: readout confusion times symmetric preparation flip.
        double c00 = 1 - s.readout_0to1, c01 = s.readout_1to0;
        double c10 = s.readout_0to1, c11 = 1 - s.readout_1to0;
        double f = s.prep_flip;
        double t00 = c00 * (1 - f) + c01 * f, t01 = c00 * f + c01 * (1 - f);
        double t10 = c10 * (1 - f) + c11 * f, t11 = c10 * f + c11 * (1 - f);
        size_t bit = (size_t)1 << q;
        for (size_t i = 0; i < v.size(); i++) {
            if (i & bit) {
                continue;
            }
            double x0 = v[i];
            double x1 = v[i | bit];
            v[i] = t00 * x0 + t01 * x1;
            v[i | bit] = t10 * x0 + t11 * x1;
        }
    }
    return v;
}

std::vector<double> GroundTruth::exact_distribution(size_t depth, BasisIndex in) const {
    auto evolved = spectral_power_apply(rates_for(in), depth, basis_vector(dim(), in));
    return simplex_project(apply_spam(std::move(evolved)));
}

GroundTruth &GroundTruth::with_readout(double eps) {
    check_probability(eps, "readout error");
    for (auto &s : spam) {
        s.readout_0to1 = eps;
        s.readout_1to0 = eps;
    }
    return *this;
}

GroundTruth &GroundTruth::with_prep_flip(double eps) {
    check_probability(eps, "preparation flip probability");
    for (auto &s : spam) {
        s.prep_flip = eps;
    }
    return *this;
}

std::string GroundTruth::to_json(uint64_t seed) const {
    nlohmann::ordered_json j;
    j["preset"] = preset;
    j["params"] = params;
    j["n"] = num_qubits;
    j["rates"] = rates;
    if (!input_rates.empty()) {
        nlohmann::ordered_json per = nlohmann::ordered_json::object();
        for (const auto &[in, p] : input_rates) {
            per[std::to_string(in)] = p;
        }
        j["input_rates"] = per;
    }
    auto spam_json = nlohmann::ordered_json::array();
    for (const auto &s : spam) {
        spam_json.push_back({{"readout_0to1", s.readout_0to1}, {"readout_1to0", s.readout_1to0}, {"prep_flip", s.prep_flip}});
    }
    j["spam"] = spam_json;
    j["seed"] = seed;
    return j.dump(2);
}

GroundTruth GroundTruth::from_json(const std::string &text) {
    GroundTruth gt;
    try {
        auto j = nlohmann::json::parse(text);
        gt.num_qubits = j.at("n").get<size_t>();
        gt.preset = j.value("preset", std::string());
        gt.params = j.value("params", std::vector<double>());
        gt.rates = j.at("rates").get<std::vector<double>>();
        if (j.contains("input_rates")) {
            for (const auto &[key, p] : j.at("input_rates").items()) {
                gt.input_rates[std::stoull(key)] = p.get<std::vector<double>>();
            }
        }
        for (const auto &s : j.at("spam")) {
            gt.spam.push_back({s.at("readout_0to1").get<double>(), s.at("readout_1to0").get<double>(),
                               s.at("prep_flip").get<double>()});
        }
    } catch (const nlohmann::json::exception &e) {
        throw StructuralError(std::string("malformed ground truth profile: ") + e.what());
    }
    gt.validate();
    return gt;
}

GroundTruth preset_iid_bitflip(size_t num_qubits, double q) {
    check_probability(q, "bit flip probability");
    auto gt = base_truth(num_qubits, "iid_bitflip", {q});
    gt.rates = iid_rates(num_qubits, q);
    return gt;
}

GroundTruth preset_depolarizing(size_t num_qubits, double alpha) {
    if (!(alpha >= 0 && alpha < 1)) {
        throw DomainError("depolarizing strength must lie in [0, 1)");
    }
    auto gt = base_truth(num_qubits, "depolarizing", {alpha});
    gt.rates = iid_rates(num_qubits, alpha / 2);
    return gt;
}

GroundTruth preset_correlated_pair(size_t num_qubits, double q, double q_corr, size_t i, size_t j) {
    check_probability(q, "bit flip probability");
    if (!(q_corr >= 0 && q_corr < 1)) {
        throw DomainError("correlated excess must lie in [0, 1)");
    }
    if (i >= num_qubits || j >= num_qubits || i == j) {
        throw DomainError("correlated pair needs two distinct qubits below n");
    }
    auto gt = base_truth(num_qubits, "correlated_pair", {q, q_corr, (double)i, (double)j});
    gt.rates = iid_rates(num_qubits, q);
    gt.rates[((size_t)1 << i) | ((size_t)1 << j)] += q_corr;
    for (auto &x : gt.rates) {
        x /= 1 + q_corr;
    }
    return gt;
}

GroundTruth preset_spam_only(size_t num_qubits, double eps) {
    auto gt = base_truth(num_qubits, "spam_only", {eps});
    gt.rates = basis_vector(gt.dim(), 0);
    gt.with_readout(eps);
    return gt;
}

GroundTruth preset_from_string(size_t num_qubits, const std::string &spec) {
    auto colon = spec.find(':');
    std::string name = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                size_t pos = 0;
                args.push_back(std::stod(item, &pos));
                if (pos != item.size()) {
                    throw std::invalid_argument(item);
                }
            } catch (const std::exception &) {
                throw DomainError("preset parameter '" + item + "' is not a number");
            }
        }
    }
    auto need = [&](size_t count) {
        if (args.size() != count) {
            std::stringstream msg;
            msg << "preset " << name << " takes " << count << " parameter(s), got " << args.size();
            throw DomainError(msg.str());
        }
    };
    if (name == "iid_bitflip") {
        need(1);
        return preset_iid_bitflip(num_qubits, args[0]);
    }
    if (name == "depolarizing") {
        need(1);
        return preset_depolarizing(num_qubits, args[0]);
    }
    if (name == "correlated_pair") {
        need(4);
        if (args[2] < 0 || args[3] < 0 || args[2] != std::floor(args[2]) || args[3] != std::floor(args[3])) {
            throw DomainError("correlated_pair qubit indices must be nonnegative integers");
        }
        return preset_correlated_pair(num_qubits, args[0], args[1], (size_t)args[2], (size_t)args[3]);
    }
    if (name == "spam_only") {
        need(1);
        return preset_spam_only(num_qubits, args[0]);
    }
    throw DomainError("unknown preset '" + name + "'");
}

std::vector<double> CountsRecord::distribution(size_t dim) const {
    std::vector<double> out(dim, 0.0);
    for (const auto &[outcome, count] : counts) {
        if (outcome >= dim) {
            throw StructuralError("counts outcome out of range");
        }
        out[outcome] = (double)count / (double)shots;
    }
    return out;
}

std::vector<std::pair<BasisIndex, uint64_t>> sample_counts(
    const std::vector<double> &dist, size_t shots, std::mt19937_64 &rng) {
    std::vector<double> cdf(dist.size());
    double acc = 0;
    for (size_t k = 0; k < dist.size(); k++) {
        acc += dist[k];
        cdf[k] = acc;
    }
    if (!(acc > 0)) {
        throw DomainError("cannot sample from an all-zero distribution");
    }
    size_t last_nonzero = dist.size() - 1;
    while (dist[last_nonzero] <= 0) {
        last_nonzero--;
    }
    std::vector<uint64_t> tally(dist.size(), 0);
    for (size_t s = 0; s < shots; s++) {
        double u = uniform_unit(rng) * acc;
        size_t k = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        // u can round up to acc itself.
        tally[std::min(k, last_nonzero)]++;
    }
    std::vector<std::pair<BasisIndex, uint64_t>> out;
    for (size_t k = 0; k < tally.size(); k++) {
        if (tally[k]) {
            out.emplace_back(k, tally[k]);
        }
    }
    return out;
}

CountsRecord execute(
    const GroundTruth &gt, const IdentityCircuit &circuit, BasisIndex in, size_t shots, std::mt19937_64 &rng) {
    if (circuit.num_qubits != gt.num_qubits) {
        throw StructuralError("circuit width does not match the device");
    }
    if (in >= gt.dim()) {
        throw StructuralError("input state out of range for the device");
    }
    if (shots < 1) {
        throw StructuralError("shots must be at least 1");
    }
    CountsRecord record;
    record.depth = circuit.depth;
    record.input = in;
    record.shots = shots;
    record.counts = sample_counts(gt.exact_distribution(circuit.depth, in), shots, rng);
    return record;
}

uint64_t circuit_seed(uint64_t seed, size_t depth, size_t seq, BasisIndex in) {
    return derive_seed(seed, {0, depth, seq, in});
}

namespace {

void check_spec(const DatasetSpec &spec) {
    if (spec.depths.empty() || spec.inputs.empty()) {
        throw DomainError("dataset needs at least one depth and one input");
    }
    if (spec.shots < 1) {
        throw DomainError("shots must be at least 1");
    }
}

}  // namespace

std::vector<CountsRecord> generate_dataset(const GroundTruth &gt, const DatasetSpec &spec) {
    gt.validate();
    check_spec(spec);
    for (auto in : spec.inputs) {
        if (in >= gt.dim()) {
            throw StructuralError("dataset input out of range for the device");
        }
    }
    size_t per_depth = spec.circuits_per_depth * spec.inputs.size();
    std::vector<CountsRecord> records(spec.depths.size() * per_depth);
    // Exact distributions are shared by every circuit at the same (depth, input).
    std::vector<std::vector<double>> exact(spec.depths.size() * spec.inputs.size());
    parallel_for(exact.size(), spec.workers, [&](size_t k) {
        exact[k] = gt.exact_distribution(spec.depths[k / spec.inputs.size()], spec.inputs[k % spec.inputs.size()]);
    });
    parallel_for(records.size(), spec.workers, [&](size_t k) {
        size_t d = k / per_depth;
        size_t seq = (k % per_depth) / spec.inputs.size();
        size_t i = k % spec.inputs.size();
        size_t depth = spec.depths[d];
        BasisIndex in = spec.inputs[i];
        std::mt19937_64 rng(derive_seed(spec.seed, {1, depth, seq, in}));
        auto &record = records[k];
        record.depth = depth;
        record.input = in;
        record.seq = seq;
        record.shots = spec.shots;
        record.counts = sample_counts(exact[d * spec.inputs.size() + i], spec.shots, rng);
    });
    return records;
}

std::vector<IdentityCircuit> dataset_circuits(size_t num_qubits, const DatasetSpec &spec) {
    check_spec(spec);
    std::vector<IdentityCircuit> out;
    out.reserve(spec.depths.size() * spec.circuits_per_depth * spec.inputs.size());
    for (auto depth : spec.depths) {
        for (size_t seq = 0; seq < spec.circuits_per_depth; seq++) {
            for (auto in : spec.inputs) {
                out.push_back(sample_identity_circuit(num_qubits, depth, circuit_seed(spec.seed, depth, seq, in)));
            }
        }
    }
    return out;
}

std::string to_bitstring(BasisIndex value, size_t num_qubits) {
    std::string out(num_qubits, '0');
    for (size_t q = 0; q < num_qubits; q++) {
        if ((value >> q) & 1) {
            out[num_qubits - 1 - q] = '1';
        }
    }
    return out;
}

BasisIndex from_bitstring(const std::string &bits) {
    if (bits.empty() || bits.size() > 63) {
        throw StructuralError("bitstring must have between 1 and 63 characters");
    }
    BasisIndex value = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw StructuralError("bitstring '" + bits + "' contains characters other than 0 and 1");
        }
        value = (value << 1) | (BasisIndex)(c == '1');
    }
    return value;
}

std::string record_to_json_line(const CountsRecord &record, size_t num_qubits) {
    nlohmann::ordered_json j;
    j["depth"] = record.depth;
    j["input"] = to_bitstring(record.input, num_qubits);
    j["seq"] = record.seq;
    j["shots"] = record.shots;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto &[outcome, count] : record.counts) {
        counts[to_bitstring(outcome, num_qubits)] = count;
    }
    j["counts"] = counts;
    return j.dump();
}

CountsRecord record_from_json_line(const std::string &line, size_t *num_qubits) {
    CountsRecord record;
    try {
        auto j = nlohmann::json::parse(line);
        record.depth = j.at("depth").get<size_t>();
        std::string input = j.at("input").get<std::string>();
        record.input = from_bitstring(input);
        size_t width = input.size();
        record.seq = j.at("seq").get<size_t>();
        record.shots = j.at("shots").get<size_t>();
        uint64_t total = 0;
        for (const auto &[key, value] : j.at("counts").items()) {
            if (key.size() != width) {
                throw StructuralError("outcome '" + key + "' width differs from input width");
            }
            uint64_t count = value.get<uint64_t>();
            total += count;
            if (count) {
                record.counts.emplace_back(from_bitstring(key), count);
            }
        }
        std::sort(record.counts.begin(), record.counts.end());
        if (total != record.shots) {
            throw StructuralError("counts do not sum to shots");
        }
        if (num_qubits) {
            *num_qubits = width;
        }
    } catch (const nlohmann::json::exception &e) {
        throw StructuralError(std::string("malformed dataset line: ") + e.what());
    }
    return record;
}

void write_dataset(std::ostream &out, const std::vector<CountsRecord> &records, size_t num_qubits) {
    for (const auto &record : records) {
        out << record_to_json_line(record, num_qubits) << '\n';
    }
}

std::vector<CountsRecord> read_dataset(std::istream &in, size_t *num_qubits) {
    std::vector<CountsRecord> records;
    std::string line;
    size_t width = 0;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        line_number++;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        size_t w = 0;
        try {
            records.push_back(record_from_json_line(line, &w));
        } catch (const StructuralError &e) {
            std::stringstream msg;
            msg << "line " << line_number << ": " << e.what();
            throw StructuralError(msg.str());
        }
        if (width && w != width) {
            throw StructuralError("dataset mixes bitstring widths");
        }
        width = w;
    }
    if (num_qubits) {
        *num_qubits = width;
    }
    return records;
}

}  // namespace paulimit
