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

#ifndef _PAULIMIT_PAULI_CHANNEL_H
#define _PAULIMIT_PAULI_CHANNEL_H

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "paulimit/transforms.h"

namespace paulimit {

using Matrix = Eigen::MatrixXd;

/// Bounds for fitted eigenvalues. Fit noise must not flip the sign of a decaying mode.
constexpr double LAMBDA_MIN = 1e-6;
constexpr double LAMBDA_MAX = 1.0;

/// M_ij = p[i ^ j]. Symmetric and column-stochastic; one application is one layer of average gate noise.
Matrix build_M(std::span<const double> p);

/// M^m v through the Walsh-Hadamard diagonalization of M. Never forms M.
///
/// M = W diag(Wp) W / 2^n, so M^m v = W^-1 ((Wp)^m * (W v)) with the power taken elementwise.
std::vector<double> spectral_power_apply(std::span<const double> p, size_t m, std::span<const double> v);

/// N = (1/2^n) W diag(A) W. Requires A[0] == 1 so the columns of N sum to one.
Matrix build_N(std::span<const double> A);

/// N v without forming N.
std::vector<double> apply_N(std::span<const double> A, std::span<const double> v);

/// lambda = W p.
std::vector<double> lambda_from_p(std::span<const double> p);

/// p = simplex_project(W^-1 lambda).
std::vector<double> p_from_lambda(std::span<const double> lambda);

/// Fitted noise for one basis input. p is indexed by flip pattern, A holds the SPAM intercepts.
struct InputNoise {
    std::vector<double> p;
    std::vector<double> A;

    bool operator==(const InputNoise &other) const = default;
};

/// Per-input error rates and SPAM diagonals; M and N are derived on demand.
struct NoiseModel {
    size_t num_qubits = 0;
    std::map<BasisIndex, InputNoise> inputs;

    size_t dim() const {
        return (size_t)1 << num_qubits;
    }
    bool has_all_inputs() const {
        return inputs.size() == dim();
    }
    const InputNoise &at(BasisIndex in) const;

    /// Throws StructuralError on shape problems and DomainError on invalid rates or A[0] != 1.
    void validate() const;

    /// Model with every p_in replaced by the mean rate vector; the A_in stay input specific.
    NoiseModel with_average_rates() const;

    /// {"n":..,"inputs":{"0":{"p":[..],"A":[..]},..}}. `meta` is embedded under "meta" when nonempty.
    std::string to_json(const std::map<std::string, std::string> &meta = {}) const;
    static NoiseModel from_json(const std::string &text);

    bool operator==(const NoiseModel &other) const = default;
};

/// Predicted average output distribution for depth-m identity circuits on input `in`.
///
/// simplex_project(N_in M_in^m e_in). The projection only matters when fitted A values make N slightly
/// non-stochastic.
std::vector<double> predict(const NoiseModel &model, size_t m, BasisIndex in);

/// Mean of the per-input rate vectors. Requires every basis input.
std::vector<double> average_rates(const NoiseModel &model);

struct MitigationMatrix {
    size_t depth = 0;
    Matrix Q;
    /// 1-norm condition number estimate of Q (infinity when Q is singular).
    double condition = 0;
};

/// Estimates the 1-norm condition number of a square matrix.
double estimate_condition(const Matrix &Q);

/// Column `in` of Q is predict(model, m, in).
MitigationMatrix build_Q(const NoiseModel &model, size_t m);

}  // namespace paulimit

#endif
