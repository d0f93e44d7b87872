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

#ifndef _PAULIMIT_CLIFFORD_H
#define _PAULIMIT_CLIFFORD_H

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace paulimit {

constexpr size_t NUM_CLIFFORDS = 24;

/// One of the 24 single-qubit Clifford unitaries, modulo global phase.
///
/// Ids follow a fixed enumeration: breadth-first closure of {H, S} starting from the identity,
/// each new element numbered on first appearance. That makes IDENTITY=0, H=1, S=2.
struct CliffordGate {
    uint8_t id = 0;

    static const CliffordGate IDENTITY;
    static const CliffordGate H;
    static const CliffordGate S;

    bool operator==(const CliffordGate &other) const = default;
};

using Unitary2 = std::array<std::complex<double>, 4>;  // row-major

/// Returns the canonical (phase-normalized) matrix for a gate.
const Unitary2 &clifford_unitary(CliffordGate g);

/// Group product g*h (apply h first, then g).
CliffordGate compose(CliffordGate g, CliffordGate h);

CliffordGate inverse(CliffordGate g);

/// m random layers of independent per-qubit gates, then one inverse gate per qubit.
struct IdentityCircuit {
    size_t num_qubits = 0;
    size_t depth = 0;
    /// layers[k][q] is the gate on qubit q in time step k.
    std::vector<std::vector<CliffordGate>> layers;
    std::vector<CliffordGate> inverse_layer;
    uint64_t seed = 0;

    /// Product of qubit q's gates in time order, inverse layer included. Identity for a valid circuit.
    CliffordGate net_gate(size_t qubit) const;

    /// {"n":..,"depth":..,"layers":[[..],..],"inverse":[..],"seed":..} on one line.
    std::string to_json_line() const;
    static IdentityCircuit from_json_line(const std::string &line);

    bool operator==(const IdentityCircuit &other) const = default;
};

/// Samples each of the m*n gates uniformly and appends the per-qubit inverse.
///
/// depth == 0 yields an empty circuit whose inverse layer is all identities.
IdentityCircuit sample_identity_circuit(size_t num_qubits, size_t depth, uint64_t seed);

}  // namespace paulimit

#endif
