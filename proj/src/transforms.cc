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

#include "paulimit/transforms.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>

#include "paulimit/errors.h"

namespace paulimit {

size_t qubits_for_length(size_t len) {
    if (len == 0 || !std::has_single_bit(len)) {
        std::stringstream msg;
        msg << "vector length " << len << " is not a power of two";
        throw StructuralError(msg.str());
    }
    return (size_t)std::countr_zero(len);
}

void check_qubit_count(size_t n) {
    if (n < 1 || n > MAX_QUBITS) {
        std::stringstream msg;
        msg << "qubit count " << n << " outside supported range [1, " << MAX_QUBITS << "]";
        throw StructuralError(msg.str());
    }
}

void fwht_inplace(std::span<double> v) {
    size_t len = v.size();
    qubits_for_length(len);
    for (size_t half = 1; half < len; half <<= 1) {
        for (size_t block = 0; block < len; block += half << 1) {
            double *lo = v.data() + block;
            double *hi = lo + half;
            for (size_t k = 0; k < half; k++) {
                double a = lo[k];
                double b = hi[k];
                lo[k] = a + b;
                hi[k] = a - b;
            }
        }
    }
}

std::vector<double> fwht(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    fwht_inplace(out);
    return out;
}

std::vector<double> fwht_inverse(std::span<const double> v) {
    std::vector<double> out(v.begin(), v.end());
    fwht_inplace(out);
    double scale = 1.0 / (double)out.size();
    for (auto &x : out) {
        x *= scale;
    }
    return out;
}

std::vector<double> xor_permute(std::span<const double> v, BasisIndex in) {
    qubits_for_length(v.size());
    if (in >= v.size()) {
        std::stringstream msg;
        msg << "basis index " << in << " out of range for length " << v.size();
        throw StructuralError(msg.str());
    }
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); i++) {
        out[i] = v[i ^ in];
    }
    return out;
}

std::vector<double> simplex_project(std::span<const double> v) {
    if (v.empty()) {
        throw StructuralError("cannot project an empty vector onto the simplex");
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw DomainError("simplex projection requires finite entries");
        }
    }

    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0;
    double theta = 0;
    for (size_t j = 0; j < sorted.size(); j++) {
        cumulative += sorted[j];
        double candidate = (cumulative - 1.0) / (double)(j + 1);
        if (sorted[j] - candidate > 0) {
            theta = candidate;
        }
    }

    std::vector<double> out(v.size());
    double total = 0;
    for (size_t i = 0; i < v.size(); i++) {
        out[i] = std::max(v[i] - theta, 0.0);
        total += out[i];
    }
    // Clean up the last few ulps so the sum is 1 to machine precision.
    if (total > 0) {
        for (auto &x : out) {
            x /= total;
        }
    }
    return out;
}

bool is_prob_dist(std::span<const double> v, double tol) {
    if (v.empty()) {
        return false;
    }
    double total = 0;
    for (double x : v) {
        if (!std::isfinite(x) || x < -tol) {
            return false;
        }
        total += x;
    }
    return std::abs(total - 1.0) <= tol;
}

void require_prob_dist(std::span<const double> v, const char *what, double tol) {
    if (!is_prob_dist(v, tol)) {
        std::stringstream msg;
        msg << what << " is not a probability distribution (entries must be >= 0 and sum to 1)";
        throw DomainError(msg.str());
    }
}

std::vector<double> basis_vector(size_t len, BasisIndex index) {
    if (index >= len) {
        std::stringstream msg;
        msg << "basis index " << index << " out of range for length " << len;
        throw StructuralError(msg.str());
    }
    std::vector<double> out(len, 0.0);
    out[index] = 1.0;
    return out;
}

}  // namespace paulimit
