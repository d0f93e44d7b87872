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

#ifndef _PAULIMIT_ESTIMATION_H
#define _PAULIMIT_ESTIMATION_H

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "paulimit/device_sim.h"
#include "paulimit/pauli_channel.h"

namespace paulimit {

/// Coefficients whose magnitude falls below this are left out of the log-domain fit.
constexpr double FIT_EPSILON = 1e-6;

/// Mean of the normalized counts of every circuit run at one (depth, input).
struct DepthAverage {
    size_t depth = 0;
    BasisIndex input = 0;
    std::vector<double> q_hat;
    size_t circuits = 0;
};

using CellKey = std::pair<size_t, BasisIndex>;  // (depth, input)

/// Averages the records at (depth, input). Throws CoverageError if there are none.
DepthAverage aggregate(std::span<const CountsRecord> records, size_t depth, BasisIndex in, size_t num_qubits);

/// Averages every (depth, input) cell present in one pass.
std::map<CellKey, DepthAverage> aggregate_all(std::span<const CountsRecord> records, size_t num_qubits);

/// Lambda(m) = W (q_hat permuted so the input maps to the all-zeros outcome).
std::vector<double> spectralize(const DepthAverage &avg);

struct CoefficientDiagnostics {
    size_t points_used = 0;
    /// RMS residual of the log-domain fit.
    double residual = 0;
    /// Fewer than two usable points; the coefficient was treated as fully decayed.
    bool underdetermined = false;
};

struct FitResult {
    std::vector<double> A;
    std::vector<double> lambda;
    std::vector<CoefficientDiagnostics> diagnostics;
};

/// Fits Lambda_i(m) = A_i lambda_i^m independently for every coefficient i >= 1.
///
/// Each fit is ordinary least squares of ln|Lambda_i(m)| against m over training depths with
/// |Lambda_i(m)| > FIT_EPSILON. lambda_i = exp(slope) is clamped to [LAMBDA_MIN, 1]; when the clamp
/// binds, the intercept is refit with the slope held at the clamped value. A_i carries the majority
/// sign of the usable samples. Coefficient 0 is pinned to A = lambda = 1.
FitResult fit_decay(const std::map<size_t, std::vector<double>> &series, std::span<const size_t> training_depths);

struct EstimateOptions {
    std::vector<size_t> training_depths;
    /// Replace every p_in by their mean after fitting.
    bool average_rates = false;
    size_t workers = 1;
};

struct Estimate {
    NoiseModel model;
    std::map<BasisIndex, FitResult> fits;
};

/// Full characterization from averaged distributions: spectralize, fit, invert, project.
Estimate estimate_from_averages(
    const std::map<CellKey, std::vector<double>> &averages,
    size_t num_qubits,
    std::span<const BasisIndex> inputs,
    const EstimateOptions &options);

/// Full characterization from raw counts. Throws CoverageError listing every missing (depth, input).
Estimate estimate_model(
    std::span<const CountsRecord> records,
    size_t num_qubits,
    std::span<const BasisIndex> inputs,
    const EstimateOptions &options);

/// Result of fitting q(m) = A alpha^m + B to a survival-probability decay.
struct RbResult {
    double A = 0;
    double B = 0;
    double alpha = 1;
    /// Average gate error (2^n - 1)(1 - alpha) / 2^n.
    double r = 0;
    /// The series was flat, so alpha is reported as 1.
    bool degenerate = false;
};

double rb_average_gate_error(double alpha, size_t num_qubits);

/// Levenberg-Marquardt fit of A alpha^m + B with alpha in (0, 1], started from a log-linear fit of
/// q - 1/2^n. Needs at least three depths.
RbResult rb_fit(const std::map<size_t, double> &survival, size_t num_qubits);

/// Probability of reading back the prepared input, per depth.
std::map<size_t, double> survival_series(const std::map<CellKey, DepthAverage> &averages, BasisIndex in);

}  // namespace paulimit

#endif
