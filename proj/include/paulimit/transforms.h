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

#ifndef _PAULIMIT_TRANSFORMS_H
#define _PAULIMIT_TRANSFORMS_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace paulimit {

/// Index into a length-2^n vector, read as an n-bit pattern. Bit 0 is the rightmost displayed character.
using BasisIndex = uint64_t;

constexpr size_t MAX_QUBITS = 12;

/// Returns n such that len == 2^n, or throws StructuralError.
size_t qubits_for_length(size_t len);

/// Throws StructuralError unless 1 <= n <= MAX_QUBITS.
void check_qubit_count(size_t n);

/// Unnormalized Walsh-Hadamard transform in natural (Hadamard) order, in place.
///
/// Computes v <- W v with W_ij = (-1)^popcount(i & j). Iterative butterflies, O(n 2^n).
void fwht_inplace(std::span<double> v);

std::vector<double> fwht(std::span<const double> v);

/// (1/2^n) W v. Since W W = 2^n I this inverts fwht.
std::vector<double> fwht_inverse(std::span<const double> v);

/// out[i] = v[i ^ in]. Equivalent to applying the permutation matrix with a one wherever i ^ j == in.
std::vector<double> xor_permute(std::span<const double> v, BasisIndex in);

/// Euclidean projection onto the probability simplex (sort and threshold).
///
/// Works for any nonempty length; the result is nonnegative and sums to one.
std::vector<double> simplex_project(std::span<const double> v);

/// True when every entry is >= -tol and the entries sum to 1 within tol.
bool is_prob_dist(std::span<const double> v, double tol = 1e-9);

/// Throws DomainError naming `what` unless is_prob_dist(v, tol).
void require_prob_dist(std::span<const double> v, const char *what, double tol = 1e-9);

/// Point mass at `index` in a length-`len` vector.
std::vector<double> basis_vector(size_t len, BasisIndex index);

}  // namespace paulimit

#endif
