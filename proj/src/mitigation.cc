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

#include "paulimit/mitigation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "paulimit/errors.h"
#include "paulimit/estimation.h"
#include "paulimit/parallel.h"

namespace paulimit {

double jsd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw StructuralError("JSD operands have different lengths");
    }
    require_prob_dist(p, "JSD operand");
    require_prob_dist(q, "JSD operand");
    double total = 0;
    for (size_t k = 0; k < p.size(); k++) {
        double a = std::max(p[k], 0.0);
        double b = std::max(q[k], 0.0);
        double mid = 0.5 * (a + b);
        if (a > 0) {
            total += 0.5 * a * std::log2(a / mid);
        }
        if (b > 0) {
            total += 0.5 * b * std::log2(b / mid);
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

Mitigator::Mitigator(const MitigationMatrix &Q) : dim_((size_t)Q.Q.rows()) {
    if (Q.Q.rows() != Q.Q.cols() || Q.Q.rows() == 0) {
        throw StructuralError("mitigation matrix must be square and nonempty");
    }
    lu_.compute(Q.Q);
    condition_ = estimate_condition(Q.Q);
    pseudo_inverse_ = !(condition_ <= CONDITION_LIMIT);
    if (pseudo_inverse_) {
        cod_.compute(Q.Q);
    }
}

std::vector<double> Mitigator::mitigate(std::span<const double> noisy) const {
    if (noisy.size() != dim_) {
        throw StructuralError("noisy distribution length does not match the mitigation matrix");
    }
    Eigen::Map<const Eigen::VectorXd> rhs(noisy.data(), (Eigen::Index)noisy.size());
    Eigen::VectorXd x = pseudo_inverse_ ? Eigen::VectorXd(cod_.solve(rhs)) : Eigen::VectorXd(lu_.solve(rhs));
    if (!x.allFinite()) {
        throw NumericError("mitigation solve produced non-finite values");
    }
    return simplex_project(std::span<const double>(x.data(), (size_t)x.size()));
}

std::vector<double> mitigate(const MitigationMatrix &Q, std::span<const double> noisy) {
    return Mitigator(Q).mitigate(noisy);
}

MitigationMatrix mem_build(std::span<const CountsRecord> records, size_t num_qubits) {
    check_qubit_count(num_qubits);
    size_t dim = (size_t)1 << num_qubits;
    std::vector<CountsRecord> calibration;
    for (const auto &r : records) {
        if (r.depth == 0) {
            calibration.push_back(r);
        }
    }
    auto cells = aggregate_all(calibration, num_qubits);
    std::stringstream missing;
    size_t missing_count = 0;
    for (BasisIndex in = 0; in < dim; in++) {
        if (!cells.count({0, in})) {
            missing << (missing_count++ ? ", " : "") << to_bitstring(in, num_qubits);
        }
    }
    if (missing_count) {
        throw CoverageError("readout calibration is missing depth-0 records for input(s): " + missing.str());
    }
    MitigationMatrix out;
    out.depth = 0;
    out.Q.resize(dim, dim);
    for (BasisIndex in = 0; in < dim; in++) {
        const auto &q = cells.at({0, in}).q_hat;
        for (size_t i = 0; i < dim; i++) {
            out.Q(i, in) = q[i];
        }
    }
    out.condition = estimate_condition(out.Q);
    return out;
}

const char *method_name(Method method) {
    switch (method) {
        case Method::Unmitigated:
            return "unmitigated";
        case Method::Mem:
            return "MEM";
        case Method::Proposed:
            return "proposed";
        case Method::ProposedAverage:
            return "proposed_pavg";
    }
    return "?";
}

Method method_from_name(const std::string &name) {
    for (auto m : {Method::Unmitigated, Method::Mem, Method::Proposed, Method::ProposedAverage}) {
        if (name == method_name(m)) {
            return m;
        }
    }
    throw DomainError("unknown mitigation method '" + name + "'");
}

const ReportRow *MitigationReport::find(size_t depth, Method method) const {
    for (const auto &row : rows) {
        if (row.depth == depth && row.method == method && !row.input.has_value()) {
            return &row;
        }
    }
    return nullptr;
}

void MitigationReport::write_csv(std::ostream &out) const {
    out << "depth,input,method,mean_jsd,std_jsd,flags\n";
    char buf[64];
    for (const auto &row : rows) {
        out << row.depth << ',' << (row.input ? to_bitstring(*row.input, num_qubits) : std::string("all")) << ','
            << method_name(row.method) << ',';
        snprintf(buf, sizeof(buf), "%.10f,%.10f", row.mean_jsd, row.std_jsd);
        out << buf << ',' << row.flags << '\n';
    }
}

namespace {

struct Accumulator {
    double sum = 0;
    double sum_sq = 0;
    size_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        count++;
    }
    void merge(const Accumulator &o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    double mean() const {
        return count ? sum / (double)count : 0;
    }
    // Sample standard deviation.
    double stddev() const {
        if (count < 2) {
            return 0;
        }
        double m = mean();
        double var = (sum_sq - (double)count * m * m) / (double)(count - 1);
        return std::sqrt(std::max(var, 0.0));
    }
};

}  // namespace

MitigationReport evaluate(
    std::span<const CountsRecord> records, size_t num_qubits, const NoiseModel &model, const EvaluateOptions &options) {
    check_qubit_count(num_qubits);
    size_t dim = (size_t)1 << num_qubits;
    if (options.test_depths.empty() || options.inputs.empty() || options.methods.empty()) {
        throw DomainError("evaluation needs test depths, inputs and methods");
    }
    std::set<size_t> depths(options.test_depths.begin(), options.test_depths.end());
    std::set<BasisIndex> inputs(options.inputs.begin(), options.inputs.end());
    for (auto in : inputs) {
        if (in >= dim) {
            throw StructuralError("evaluation input out of range");
        }
    }
    std::vector<Method> methods;
    for (auto m : options.methods) {
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) {
            methods.push_back(m);
        }
    }
    auto uses = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };

    // Group the scored circuits by (depth, input).
    std::map<CellKey, std::vector<const CountsRecord *>> cells;
    for (const auto &r : records) {
        if (depths.count(r.depth) && inputs.count(r.input)) {
            cells[{r.depth, r.input}].push_back(&r);
        }
    }
    std::stringstream missing;
    size_t missing_count = 0;
    for (auto m : depths) {
        for (auto in : inputs) {
            if (!cells.count({m, in})) {
                missing << (missing_count++ ? ", " : "") << "(depth=" << m << ", input=" << to_bitstring(in, num_qubits)
                        << ")";
            }
        }
    }
    if (missing_count) {
        throw CoverageError("dataset is missing " + std::to_string(missing_count) + " cell(s): " + missing.str());
    }

    if (model.num_qubits != num_qubits && (uses(Method::Proposed) || uses(Method::ProposedAverage))) {
        throw StructuralError("noise model and dataset have different qubit counts");
    }
    std::optional<Mitigator> mem;
    if (uses(Method::Mem)) {
        mem.emplace(mem_build(records, num_qubits));
    }
    NoiseModel averaged;
    if (uses(Method::ProposedAverage)) {
        averaged = model.with_average_rates();
    }

    MitigationReport report;
    report.num_qubits = num_qubits;
    for (auto depth : depths) {
        std::optional<Mitigator> proposed, proposed_avg;
        if (uses(Method::Proposed)) {
            proposed.emplace(build_Q(model, depth));
        }
        if (uses(Method::ProposedAverage)) {
            proposed_avg.emplace(build_Q(averaged, depth));
        }
        auto flags_for = [&](Method m) -> std::string {
            const Mitigator *mit = m == Method::Mem                ? (mem ? &*mem : nullptr)
                                   : m == Method::Proposed        ? (proposed ? &*proposed : nullptr)
                                   : m == Method::ProposedAverage ? (proposed_avg ? &*proposed_avg : nullptr)
                                                                  : nullptr;
            return mit && mit->uses_pseudo_inverse() ? "pinv" : "";
        };

        std::vector<std::vector<Accumulator>> per_input(inputs.size(), std::vector<Accumulator>(methods.size()));
        std::vector<BasisIndex> ins(inputs.begin(), inputs.end());
        parallel_for(ins.size(), options.workers, [&](size_t k) {
            BasisIndex in = ins[k];
            auto ideal = basis_vector(dim, in);
            for (const auto *r : cells.at({depth, in})) {
                auto raw = r->distribution(dim);
                for (size_t j = 0; j < methods.size(); j++) {
                    std::vector<double> x;
                    switch (methods[j]) {
                        case Method::Unmitigated:
                            x = raw;
                            break;
                        case Method::Mem:
                            x = mem->mitigate(raw);
                            break;
                        case Method::Proposed:
                            x = proposed->mitigate(raw);
                            break;
                        case Method::ProposedAverage:
                            x = proposed_avg->mitigate(raw);
                            break;
                    }
                    per_input[k][j].add(jsd(ideal, x));
                }
            }
        });

        std::vector<Accumulator> all(methods.size());
        for (size_t k = 0; k < ins.size(); k++) {
            for (size_t j = 0; j < methods.size(); j++) {
                const auto &acc = per_input[k][j];
                report.rows.push_back({depth, ins[k], methods[j], acc.mean(), acc.stddev(), acc.count,
                                       flags_for(methods[j])});
                all[j].merge(acc);
            }
        }
        for (size_t j = 0; j < methods.size(); j++) {
            report.rows.push_back(
                {depth, std::nullopt, methods[j], all[j].mean(), all[j].stddev(), all[j].count, flags_for(methods[j])});
        }
    }
    return report;
}

}  // namespace paulimit
