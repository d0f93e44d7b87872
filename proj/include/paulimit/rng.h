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

#ifndef _PAULIMIT_RNG_H
#define _PAULIMIT_RNG_H

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace paulimit {

// The standard distributions are implementation defined, so sampling goes through these helpers
// to keep datasets bit-identical across standard libraries.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Mixes a base seed with a sequence of coordinates into an independent stream seed.
inline uint64_t derive_seed(uint64_t base, std::initializer_list<uint64_t> coords) {
    uint64_t h = splitmix64(base);
    for (uint64_t c : coords) {
        h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64 &rng) {
    return (double)(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection, no modulo bias.
inline uint64_t uniform_index(std::mt19937_64 &rng, uint64_t bound) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    while (true) {
        uint64_t x = rng();
        if (x < limit) {
            return x % bound;
        }
    }
}

}  // namespace paulimit

#endif
