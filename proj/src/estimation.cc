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

#include "paulimit/estimation.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "paulimit/errors.h"
#include "paulimit/parallel.h"

namespace paulimit {

DepthAverage aggregate(std::span<const CountsRecord> records, size_t depth, BasisIndex in, size_t num_qubits) {
    check_qubit_count(num_qubits);
    size_t dim = (size_t)1 << num_qubits;
    DepthAverage avg{depth, in, std::vector<double>(dim, 0.0), 0};
    for (const auto &record : records) {
        if (record.depth != depth || record.input != in) {
            continue;
        }
        for (const auto &[outcome, count] : record.counts) {
            if (outcome >= dim) {
                throw StructuralError("counts outcome out of range");
            }
            avg.q_hat[outcome] += (double)count / (double)record.shots;
        }
        avg.circuits++;
    }
    if (avg.circuits == 0) {
        std::stringstream msg;
        msg << "no records at (depth=" << depth << ", input=" << to_bitstring(in, num_qubits) << ")";
        throw CoverageError(msg.str());
    }
    for (auto &x : avg.q_hat) {
        x /= (double)avg.circuits;
    }
    return avg;
}

std::map<CellKey, DepthAverage> aggregate_all(std::span<const CountsRecord> records, size_t num_qubits) {
    check_qubit_count(num_qubits);
    size_t dim = (size_t)1 << num_qubits;
    std::map<CellKey, DepthAverage> cells;
    for (const auto &record : records) {
        if (record.input >= dim) {
            throw StructuralError("record input out of range");
        }
        auto [it, inserted] = cells.try_emplace({record.depth, record.input});
        auto &avg = it->second;
        if (inserted) {
            avg.depth = record.depth;
            avg.input = record.input;
            avg.q_hat.assign(dim, 0.0);
        }
        for (const auto &[outcome, count] : record.counts) {
            if (outcome >= dim) {
                throw StructuralError("counts outcome out of range");
            }
            avg.q_hat[outcome] += (double)count / (double)record.shots;
        }
        avg.circuits++;
    }
    for (auto &[key, avg] : cells) {
        for (auto &x : avg.q_hat) {
            x /= (double)avg.circuits;
        }
    }
    return cells;
}

std::vector<double> spectralize(const DepthAverage &avg) {
    auto aligned = xor_permute(avg.q_hat, avg.input);
    fwht_inplace(aligned);
    // The DC coefficient is the total mass; pin it against accumulated rounding.
    aligned[0] = 1.0;
    return aligned;
}

namespace {

struct LineFit {
    double slope = 0;
    double intercept = 0;
};

LineFit ordinary_least_squares(const std::vector<double> &xs, const std::vector<double> &ys) {
    double n = (double)xs.size();
    double mx = 0, my = 0;
    for (size_t k = 0; k < xs.size(); k++) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t k = 0; k < xs.size(); k++) {
        sxx += (xs[k] - mx) * (xs[k] - mx);
        sxy += (xs[k] - mx) * (ys[k] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

}  // namespace

FitResult fit_decay(const std::map<size_t, std::vector<double>> &series, std::span<const size_t> training_depths) {
    std::set<size_t> depths(training_depths.begin(), training_depths.end());
    if (depths.size() < 2) {
        throw DomainError("decay fit needs at least two distinct training depths");
    }
    size_t dim = 0;
    for (auto m : depths) {
        auto it = series.find(m);
        if (it == series.end()) {
            std::stringstream msg;
            msg << "spectral series has no entry for training depth " << m;
            throw CoverageError(msg.str());
        }
        if (dim == 0) {
            dim = it->second.size();
            qubits_for_length(dim);
        } else if (it->second.size() != dim) {
            throw StructuralError("spectral series entries have different lengths");
        }
    }

    FitResult result;
    result.A.assign(dim, 0.0);
    result.lambda.assign(dim, LAMBDA_MIN);
    result.diagnostics.resize(dim);
    result.A[0] = 1;
    result.lambda[0] = 1;
    result.diagnostics[0].points_used = depths.size();

    for (size_t i = 1; i < dim; i++) {
        std::vector<double> xs, ys;
        double first_usable = 0;
        long sign_votes = 0;
        for (auto m : depths) {
            double v = series.at(m)[i];
            if (!(std::abs(v) > FIT_EPSILON)) {
                continue;
            }
            if (xs.empty()) {
                first_usable = v;
            }
            xs.push_back((double)m);
            ys.push_back(std::log(std::abs(v)));
            sign_votes += v > 0 ? 1 : -1;
        }
        auto &diag = result.diagnostics[i];
        diag.points_used = xs.size();
        if (xs.size() < 2) {
            diag.underdetermined = true;
            result.lambda[i] = LAMBDA_MIN;
            result.A[i] = first_usable;
            continue;
        }

        auto line = ordinary_least_squares(xs, ys);
        double log_lambda = line.slope;
        double intercept = line.intercept;
        double lambda = std::exp(log_lambda);
        double clamped = std::clamp(lambda, LAMBDA_MIN, LAMBDA_MAX);
        if (clamped != lambda) {
            log_lambda = std::log(clamped);
            intercept = 0;
            for (size_t k = 0; k < xs.size(); k++) {
                intercept += ys[k] - log_lambda * xs[k];
            }
            intercept /= (double)xs.size();
        }
        double sq = 0;
        for (size_t k = 0; k < xs.size(); k++) {
            double e = ys[k] - (intercept + log_lambda * xs[k]);
            sq += e * e;
        }
        diag.residual = std::sqrt(sq / (double)xs.size());
        result.lambda[i] = clamped;
        result.A[i] = (sign_votes >= 0 ? 1.0 : -1.0) * std::exp(intercept);
    }
    return result;
}

Estimate estimate_from_averages(
    const std::map<CellKey, std::vector<double>> &averages,
    size_t num_qubits,
    std::span<const BasisIndex> inputs,
    const EstimateOptions &options) {
    check_qubit_count(num_qubits);
    size_t dim = (size_t)1 << num_qubits;
    std::set<size_t> depths(options.training_depths.begin(), options.training_depths.end());
    if (depths.size() < 2) {
        throw DomainError("characterization needs at least two distinct training depths");
    }
    if (inputs.empty()) {
        throw DomainError("characterization needs at least one input");
    }

    std::stringstream missing;
    size_t missing_count = 0;
    for (auto in : inputs) {
        if (in >= dim) {
            throw StructuralError("requested input out of range");
        }
        for (auto m : depths) {
            if (!averages.count({m, in})) {
                missing << (missing_count++ ? ", " : "") << "(depth=" << m << ", input=" << to_bitstring(in, num_qubits)
                        << ")";
            }
        }
    }
    if (missing_count) {
        throw CoverageError("dataset is missing " + std::to_string(missing_count) + " cell(s): " + missing.str());
    }

    std::vector<BasisIndex> ins(inputs.begin(), inputs.end());
    std::vector<FitResult> fits(ins.size());
    parallel_for(ins.size(), options.workers, [&](size_t k) {
        BasisIndex in = ins[k];
        std::map<size_t, std::vector<double>> series;
        for (auto m : depths) {
            const auto &q = averages.at({m, in});
            if (q.size() != dim) {
                throw StructuralError("averaged distribution has the wrong length");
            }
            series[m] = spectralize(DepthAverage{m, in, q, 1});
        }
        std::vector<size_t> t(depths.begin(), depths.end());
        fits[k] = fit_decay(series, t);
    });

    Estimate est;
    est.model.num_qubits = num_qubits;
    for (size_t k = 0; k < ins.size(); k++) {
        est.model.inputs[ins[k]] = InputNoise{p_from_lambda(fits[k].lambda), fits[k].A};
        est.fits[ins[k]] = std::move(fits[k]);
    }
    if (options.average_rates) {
        est.model = est.model.with_average_rates();
    }
    return est;
}

Estimate estimate_model(
    std::span<const CountsRecord> records,
    size_t num_qubits,
    std::span<const BasisIndex> inputs,
    const EstimateOptions &options) {
    auto cells = aggregate_all(records, num_qubits);
    std::map<CellKey, std::vector<double>> averages;
    for (auto &[key, avg] : cells) {
        averages[key] = std::move(avg.q_hat);
    }
    return estimate_from_averages(averages, num_qubits, inputs, options);
}

double rb_average_gate_error(double alpha, size_t num_qubits) {
    double d = std::ldexp(1.0, (int)num_qubits);
    return (d - 1) * (1 - alpha) / d;
}

RbResult rb_fit(const std::map<size_t, double> &survival, size_t num_qubits) {
    check_qubit_count(num_qubits);
    if (survival.size() < 3) {
        throw DomainError("randomized benchmarking fit needs at least three depths");
    }
    std::vector<double> ms, qs;
    for (const auto &[m, q] : survival) {
        ms.push_back((double)m);
        qs.push_back(q);
    }
    auto [lo, hi] = std::minmax_element(qs.begin(), qs.end());
    RbResult result;
    if (*hi - *lo < 1e-12) {
        result.A = 0;
        result.B = *lo;
        result.alpha = 1;
        result.r = 0;
        result.degenerate = true;
        return result;
    }

    // Log-linear start with the fully mixed asymptote.
    double b0 = std::ldexp(1.0, -(int)num_qubits);
    std::vector<double> xs, ys;
    for (size_t k = 0; k < ms.size(); k++) {
        if (qs[k] - b0 > FIT_EPSILON) {
            xs.push_back(ms[k]);
            ys.push_back(std::log(qs[k] - b0));
        }
    }
    double A = qs.front() - b0, B = b0, alpha = 0.99;
    if (xs.size() >= 2) {
        auto line = ordinary_least_squares(xs, ys);
        alpha = std::clamp(std::exp(line.slope), 1e-6, 1.0);
        A = std::exp(line.intercept);
    }

    auto cost = [&](double a, double b, double al) {
        double s = 0;
        for (size_t k = 0; k < ms.size(); k++) {
            double e = a * std::pow(al, ms[k]) + b - qs[k];
            s += e * e;
        }
        return s;
    };

    double damping = 1e-3;
    double current = cost(A, B, alpha);
    for (int iter = 0; iter < 500; iter++) {
        Eigen::Matrix3d JtJ = Eigen::Matrix3d::Zero();
        Eigen::Vector3d Jtr = Eigen::Vector3d::Zero();
        for (size_t k = 0; k < ms.size(); k++) {
            double pw = std::pow(alpha, ms[k]);
            double dpw = ms[k] == 0 ? 0 : ms[k] * std::pow(alpha, ms[k] - 1);
            Eigen::Vector3d g(pw, 1.0, A * dpw);
            double e = A * pw + B - qs[k];
            JtJ += g * g.transpose();
            Jtr += g * e;
        }
        bool improved = false;
        for (int attempt = 0; attempt < 30; attempt++) {
            Eigen::Matrix3d lhs = JtJ;
            for (int d = 0; d < 3; d++) {
                lhs(d, d) += damping * std::max(JtJ(d, d), 1e-12);
            }
            Eigen::Vector3d step = lhs.ldlt().solve(-Jtr);
            double na = A + step(0), nb = B + step(1);
            double nal = std::clamp(alpha + step(2), 1e-9, 1.0);
            double c = cost(na, nb, nal);
            if (c < current) {
                bool converged = current - c < 1e-15 * (1 + current);
                A = na;
                B = nb;
                alpha = nal;
                current = c;
                damping = std::max(damping / 3, 1e-12);
                improved = !converged;
                break;
            }
            damping *= 4;
        }
        if (!improved) {
            break;
        }
    }

    result.A = A;
    result.B = B;
    result.alpha = alpha;
    result.r = rb_average_gate_error(alpha, num_qubits);
    return result;
}

std::map<size_t, double> survival_series(const std::map<CellKey, DepthAverage> &averages, BasisIndex in) {
    std::map<size_t, double> out;
    for (const auto &[key, avg] : averages) {
        if (key.second == in) {
            out[key.first] = avg.q_hat.at(in);
        }
    }
    return out;
}

}  // namespace paulimit
