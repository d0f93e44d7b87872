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
#include <set>

#include "clifford_oracle.h"
#include "gtest/gtest.h"
#include "paulimit/errors.h"

using namespace paulimit;
using namespace paulimit_test;

TEST(clifford, named_elements) {
    EXPECT_TRUE(proportional(clifford_unitary(CliffordGate::IDENTITY), identity2()));
    EXPECT_TRUE(proportional(clifford_unitary(CliffordGate::H), hadamard2()));
    EXPECT_TRUE(proportional(clifford_unitary(CliffordGate::S), phase2()));
}

TEST(clifford, elements_are_the_distinct_group_members) {
    auto group = independent_clifford_group();
    ASSERT_EQ(group.size(), NUM_CLIFFORDS);
    for (uint8_t a = 0; a < NUM_CLIFFORDS; a++) {
        const auto &u = clifford_unitary({a});
        bool found = false;
        for (const auto &g : group) {
            found |= proportional(u, g);
        }
        EXPECT_TRUE(found) << (int)a;
        for (uint8_t b = 0; b < a; b++) {
            EXPECT_FALSE(proportional(u, clifford_unitary({b}))) << (int)a << " vs " << (int)b;
        }
    }
}

TEST(clifford, composition_table_matches_matrix_products) {
    for (uint8_t a = 0; a < NUM_CLIFFORDS; a++) {
        std::set<int> row, col;
        for (uint8_t b = 0; b < NUM_CLIFFORDS; b++) {
            auto c = compose({a}, {b});
            ASSERT_LT(c.id, NUM_CLIFFORDS);
            EXPECT_TRUE(proportional(clifford_unitary(c), mul2(clifford_unitary({a}), clifford_unitary({b}))));
            row.insert(c.id);
            col.insert(compose({b}, {a}).id);
        }
        EXPECT_EQ(row.size(), NUM_CLIFFORDS);
        EXPECT_EQ(col.size(), NUM_CLIFFORDS);
    }
}

TEST(clifford, identity_and_involutions) {
    for (uint8_t g = 0; g < NUM_CLIFFORDS; g++) {
        EXPECT_EQ(compose(CliffordGate::IDENTITY, {g}), CliffordGate{g});
        EXPECT_EQ(compose({g}, CliffordGate::IDENTITY), CliffordGate{g});
    }
    EXPECT_EQ(compose(CliffordGate::H, CliffordGate::H), CliffordGate::IDENTITY);
}

TEST(clifford, inverses) {
    EXPECT_EQ(inverse(CliffordGate::IDENTITY), CliffordGate::IDENTITY);
    EXPECT_EQ(compose(inverse(CliffordGate::S), CliffordGate::S), CliffordGate::IDENTITY);
    for (uint8_t g = 0; g < NUM_CLIFFORDS; g++) {
        EXPECT_EQ(compose({g}, inverse({g})), CliffordGate::IDENTITY);
        EXPECT_EQ(compose(inverse({g}), {g}), CliffordGate::IDENTITY);
        EXPECT_TRUE(proportional(mul2(clifford_unitary({g}), clifford_unitary(inverse({g}))), identity2()));
    }
    EXPECT_THROW(inverse({24}), StructuralError);
}

TEST(clifford, single_gate_circuit_is_identity) {
    auto c = sample_identity_circuit(1, 1, 99);
    ASSERT_EQ(c.layers.size(), 1u);
    EXPECT_TRUE(circuit_is_identity(c));
}

TEST(clifford, sampled_circuits_are_identities) {
    for (uint64_t seed = 0; seed < 200; seed++) {
        size_t n = 1 + seed % 5;
        size_t m = 1 + (seed * 37) % 100;
        auto c = sample_identity_circuit(n, m, seed);
        EXPECT_EQ(c.layers.size(), m);
        EXPECT_TRUE(circuit_is_identity(c)) << "seed " << seed;
        for (size_t q = 0; q < n; q++) {
            EXPECT_EQ(c.net_gate(q), CliffordGate::IDENTITY);
        }
    }
}

TEST(clifford, depth_zero_circuit) {
    auto c = sample_identity_circuit(3, 0, 5);
    EXPECT_TRUE(c.layers.empty());
    EXPECT_EQ(c.inverse_layer, std::vector<CliffordGate>(3, CliffordGate::IDENTITY));
}

TEST(clifford, sampling_is_deterministic) {
    EXPECT_EQ(sample_identity_circuit(4, 30, 123), sample_identity_circuit(4, 30, 123));
    EXPECT_NE(sample_identity_circuit(4, 30, 123), sample_identity_circuit(4, 30, 124));
}

TEST(clifford, sampling_is_uniform) {
    std::vector<size_t> freq(NUM_CLIFFORDS, 0);
    auto c = sample_identity_circuit(24, 1000, 7);  // 24,000 gates
    for (const auto &layer : c.layers) {
        for (auto g : layer) {
            freq[g.id]++;
        }
    }
    double expected = 24000.0 / 24;
    double sigma = std::sqrt(24000.0 * (1.0 / 24) * (23.0 / 24));
    for (size_t k = 0; k < NUM_CLIFFORDS; k++) {
        EXPECT_LT(std::abs((double)freq[k] - expected), 5 * sigma) << k;
    }
}

TEST(clifford, json_line_round_trip) {
    auto c = sample_identity_circuit(5, 3, 123);
    auto line = c.to_json_line();
    EXPECT_EQ(line.rfind("{\"n\":5,\"depth\":3,\"layers\":[[", 0), 0u);
    EXPECT_NE(line.find("\"seed\":123}"), std::string::npos);
    EXPECT_EQ(IdentityCircuit::from_json_line(line), c);
    EXPECT_THROW(IdentityCircuit::from_json_line("{\"n\":1}"), StructuralError);
    EXPECT_THROW(
        IdentityCircuit::from_json_line("{\"n\":1,\"depth\":1,\"layers\":[[30]],\"inverse\":[0],\"seed\":1}"),
        StructuralError);
}
