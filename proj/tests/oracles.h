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

// Brute-force reference computations used only by tests. Nothing here calls the spectral code paths.

#ifndef _PAULIMIT_TESTS_ORACLES_H
#define _PAULIMIT_TESTS_ORACLES_H

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <random>
#include <vector>

namespace paulimit_test {

using Dense = Eigen::MatrixXd;

/// W_ij = (-1)^popcount(i & j), straight from the definition.
inline Dense dense_walsh(size_t n) {
    size_t dim = (size_t)1 << n;
    Dense W(dim, dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            W(i, j) = (std::popcount(i & j) & 1) ? -1.0 : 1.0;
        }
    }
    return W;
}

inline std::vector<double> dense_apply(const Dense &A, const std::vector<double> &v) {
    std::vector<double> out(A.rows(), 0.0);
    for (Eigen::Index i = 0; i < A.rows(); i++) {
        for (Eigen::Index j = 0; j < A.cols(); j++) {
            out[i] += A(i, j) * v[j];
        }
    }
    return out;
}

/// M_ij = p[i ^ j] built by explicit loops.
inline Dense dense_xor_matrix(const std::vector<double> &p) {
    size_t dim = p.size();
    Dense M(dim, dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            M(i, j) = p[i ^ j];
        }
    }
    return M;
}

/// M^m by repeated multiplication.
inline Dense dense_power(const Dense &M, size_t m) {
    Dense out = Dense::Identity(M.rows(), M.cols());
    for (size_t k = 0; k < m; k++) {
        out = M * out;
    }
    return out;
}

/// (1/2^n) W diag(A) W formed densely.
inline Dense dense_spam(const std::vector<double> &A) {
    size_t n = (size_t)std::countr_zero(A.size());
    Dense W = dense_walsh(n);
    Dense D = Dense::Zero(A.size(), A.size());
    for (size_t k = 0; k < A.size(); k++) {
        D(k, k) = A[k];
    }
    return W * D * W / (double)A.size();
}

inline std::vector<double> random_vector(std::mt19937_64 &rng, size_t len) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> v(len);
    for (auto &x : v) {
        x = u(rng);
    }
    return v;
}

/// Uniform sample from the probability simplex (normalized exponentials).
inline std::vector<double> random_simplex(std::mt19937_64 &rng, size_t len) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(len);
    double total = 0;
    for (auto &x : v) {
        x = e(rng);
        total += x;
    }
    for (auto &x : v) {
        x /= total;
    }
    return v;
}

/// Point near the identity channel: (1 - t) e_0 + t * uniform-simplex sample. Keeps every W-coefficient
/// at least 1 - 2t, so log-domain fits stay well conditioned.
inline std::vector<double> random_near_identity(std::mt19937_64 &rng, size_t len, double t) {
    auto v = random_simplex(rng, len);
    for (auto &x : v) {
        x *= t;
    }
    v[0] += 1 - t;
    return v;
}

inline double l1_distance(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); k++) {
        s += std::abs(a[k] - b[k]);
    }
    return s;
}

inline double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); k++) {
        s = std::max(s, std::abs(a[k] - b[k]));
    }
    return s;
}

}  // namespace paulimit_test

#endif
