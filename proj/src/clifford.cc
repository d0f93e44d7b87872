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

#include "paulimit/clifford.h"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "paulimit/errors.h"
#include "paulimit/rng.h"

namespace paulimit {

const CliffordGate CliffordGate::IDENTITY{0};
const CliffordGate CliffordGate::H{1};
const CliffordGate CliffordGate::S{2};

namespace {

using cd = std::complex<double>;

Unitary2 matmul(const Unitary2 &a, const Unitary2 &b) {
    return {
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    };
}

// Divides out the phase of the first entry with non-negligible magnitude.
Unitary2 normalize_phase(const Unitary2 &u) {
    for (const auto &x : u) {
        if (std::abs(x) > 1e-6) {
            cd phase = std::abs(x) / x;
            Unitary2 out;
            for (size_t k = 0; k < 4; k++) {
                out[k] = u[k] * phase;
            }
            return out;
        }
    }
    return u;
}

bool approx_equal(const Unitary2 &a, const Unitary2 &b) {
    for (size_t k = 0; k < 4; k++) {
        if (std::abs(a[k] - b[k]) > 1e-9) {
            return false;
        }
    }
    return true;
}

struct CliffordTables {
    std::vector<Unitary2> unitaries;
    std::array<std::array<uint8_t, NUM_CLIFFORDS>, NUM_CLIFFORDS> product{};
    std::array<uint8_t, NUM_CLIFFORDS> inverse{};

    size_t find(const Unitary2 &u) const {
        Unitary2 key = normalize_phase(u);
        for (size_t k = 0; k < unitaries.size(); k++) {
            if (approx_equal(unitaries[k], key)) {
                return k;
            }
        }
        return unitaries.size();
    }

    CliffordTables() {
        const double r = 1.0 / std::sqrt(2.0);
        const Unitary2 id{cd(1), cd(0), cd(0), cd(1)};
        const Unitary2 h{cd(r), cd(r), cd(r), cd(-r)};
        const Unitary2 s{cd(1), cd(0), cd(0), cd(0, 1)};
        const std::array<Unitary2, 2> generators{h, s};

        unitaries.push_back(id);
        for (size_t k = 0; k < unitaries.size(); k++) {
            for (const auto &gen : generators) {
                Unitary2 candidate = normalize_phase(matmul(gen, unitaries[k]));
                if (find(candidate) == unitaries.size()) {
                    unitaries.push_back(candidate);
                }
            }
        }
        if (unitaries.size() != NUM_CLIFFORDS) {
            throw std::logic_error("Clifford closure did not produce 24 elements");
        }

        for (size_t a = 0; a < NUM_CLIFFORDS; a++) {
            for (size_t b = 0; b < NUM_CLIFFORDS; b++) {
                size_t c = find(matmul(unitaries[a], unitaries[b]));
                if (c == NUM_CLIFFORDS) {
                    throw std::logic_error("Clifford table is not closed");
                }
                product[a][b] = (uint8_t)c;
                if (c == 0) {
                    inverse[a] = (uint8_t)b;
                }
            }
        }
    }
};

const CliffordTables &tables() {
    static const CliffordTables t;
    return t;
}

void check_gate(CliffordGate g) {
    if (g.id >= NUM_CLIFFORDS) {
        std::stringstream msg;
        msg << "Clifford id " << (int)g.id << " out of range [0, 24)";
        throw StructuralError(msg.str());
    }
}

}  // namespace

const Unitary2 &clifford_unitary(CliffordGate g) {
    check_gate(g);
    return tables().unitaries[g.id];
}

CliffordGate compose(CliffordGate g, CliffordGate h) {
    check_gate(g);
    check_gate(h);
    return {tables().product[g.id][h.id]};
}

CliffordGate inverse(CliffordGate g) {
    check_gate(g);
    return {tables().inverse[g.id]};
}

CliffordGate IdentityCircuit::net_gate(size_t qubit) const {
    if (qubit >= num_qubits) {
        throw StructuralError("qubit index out of range");
    }
    CliffordGate acc = CliffordGate::IDENTITY;
    for (const auto &layer : layers) {
        acc = compose(layer[qubit], acc);
    }
    return compose(inverse_layer[qubit], acc);
}

IdentityCircuit sample_identity_circuit(size_t num_qubits, size_t depth, uint64_t seed) {
    if (num_qubits < 1) {
        throw StructuralError("identity circuit needs at least one qubit");
    }
    std::mt19937_64 rng(seed);
    IdentityCircuit circuit;
    circuit.num_qubits = num_qubits;
    circuit.depth = depth;
    circuit.seed = seed;
    circuit.layers.resize(depth);
    std::vector<CliffordGate> net(num_qubits, CliffordGate::IDENTITY);
    for (auto &layer : circuit.layers) {
        layer.resize(num_qubits);
        for (size_t q = 0; q < num_qubits; q++) {
            layer[q] = CliffordGate{(uint8_t)uniform_index(rng, NUM_CLIFFORDS)};
            net[q] = compose(layer[q], net[q]);
        }
    }
    circuit.inverse_layer.resize(num_qubits);
    for (size_t q = 0; q < num_qubits; q++) {
        circuit.inverse_layer[q] = inverse(net[q]);
    }
    return circuit;
}

std::string IdentityCircuit::to_json_line() const {
    nlohmann::ordered_json j;
    j["n"] = num_qubits;
    j["depth"] = depth;
    auto layers_json = nlohmann::ordered_json::array();
    for (const auto &layer : layers) {
        auto row = nlohmann::ordered_json::array();
        for (auto g : layer) {
            row.push_back((int)g.id);
        }
        layers_json.push_back(row);
    }
    j["layers"] = layers_json;
    auto inv = nlohmann::ordered_json::array();
    for (auto g : inverse_layer) {
        inv.push_back((int)g.id);
    }
    j["inverse"] = inv;
    j["seed"] = seed;
    return j.dump();
}

IdentityCircuit IdentityCircuit::from_json_line(const std::string &line) {
    auto read_gate = [](const nlohmann::json &x) {
        int id = x.get<int>();
        if (id < 0 || id >= (int)NUM_CLIFFORDS) {
            throw StructuralError("Clifford id out of range in circuit line");
        }
        return CliffordGate{(uint8_t)id};
    };
    try {
        auto j = nlohmann::json::parse(line);
        IdentityCircuit c;
        c.num_qubits = j.at("n").get<size_t>();
        c.depth = j.at("depth").get<size_t>();
        c.seed = j.at("seed").get<uint64_t>();
        for (const auto &row : j.at("layers")) {
            std::vector<CliffordGate> layer;
            for (const auto &x : row) {
                layer.push_back(read_gate(x));
            }
            if (layer.size() != c.num_qubits) {
                throw StructuralError("circuit layer width does not match n");
            }
            c.layers.push_back(std::move(layer));
        }
        for (const auto &x : j.at("inverse")) {
            c.inverse_layer.push_back(read_gate(x));
        }
        if (c.layers.size() != c.depth || c.inverse_layer.size() != c.num_qubits) {
            throw StructuralError("circuit line has inconsistent depth or inverse layer");
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw StructuralError(std::string("malformed circuit line: ") + e.what());
    }
}

}  // namespace paulimit
