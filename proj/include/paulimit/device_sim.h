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

#ifndef _PAULIMIT_DEVICE_SIM_H
#define _PAULIMIT_DEVICE_SIM_H

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "paulimit/clifford.h"
#include "paulimit/transforms.h"

namespace paulimit {

constexpr size_t DEFAULT_SHOTS = 1024;
constexpr size_t DEFAULT_CIRCUITS_PER_DEPTH = 1000;

/// Readout confusion and preparation flip for one qubit. All probabilities in [0, 0.5).
struct QubitSpam {
    double readout_0to1 = 0;
    double readout_1to0 = 0;
    double prep_flip = 0;

    bool operator==(const QubitSpam &other) const = default;
};

/// Planted noise of the synthetic device.
///
/// The exact output of a depth-m identity circuit on input `in` is C (M*)^m e_in, where M* is the
/// xor-convolution by the true rates and C is the tensor product of the per-qubit SPAM channels
/// (readout confusion after preparation flip).
struct GroundTruth {
    size_t num_qubits = 0;
    std::vector<double> rates;
    /// Optional per-input overrides of `rates`.
    std::map<BasisIndex, std::vector<double>> input_rates;
    std::vector<QubitSpam> spam;
    /// Preset name and parameters, for provenance only.
    std::string preset;
    std::vector<double> params;

    size_t dim() const {
        return (size_t)1 << num_qubits;
    }
    const std::vector<double> &rates_for(BasisIndex in) const;

    /// Throws DomainError when rates are off the simplex or SPAM probabilities leave [0, 0.5).
    void validate() const;

    /// Diagonal of W C W^-1: A*_i is the product over set bits q of i of
    /// (1 - readout_0to1 - readout_1to0) * (1 - 2 prep_flip). Exact when the readout is symmetric.
    std::vector<double> spam_diagonal() const;

    /// Applies C to a vector in O(n 2^n).
    std::vector<double> apply_spam(std::vector<double> v) const;

    /// simplex_project(C (M*)^m e_in).
    std::vector<double> exact_distribution(size_t depth, BasisIndex in) const;

    /// Same readout confusion `eps` in both directions on every qubit.
    GroundTruth &with_readout(double eps);
    GroundTruth &with_prep_flip(double eps);

    /// Profile file: {"preset":..,"params":[..],"n":..,"rates":[..],"spam":[..],"seed":..}.
    std::string to_json(uint64_t seed) const;
    static GroundTruth from_json(const std::string &text);
};

/// Independent bit flips with probability q on every qubit: the n-fold tensor power of [1-q, q].
GroundTruth preset_iid_bitflip(size_t num_qubits, double q);

/// Per-qubit depolarizing channel (1-alpha) rho + alpha I/2, seen in the computational basis as a
/// bit flip with probability alpha/2.
GroundTruth preset_depolarizing(size_t num_qubits, double alpha);

/// iid_bitflip(q) plus excess mass q_corr on the pattern flipping exactly qubits i and j, renormalized.
GroundTruth preset_correlated_pair(size_t num_qubits, double q, double q_corr, size_t i, size_t j);

/// Noiseless gates with symmetric readout confusion eps on every qubit.
GroundTruth preset_spam_only(size_t num_qubits, double eps);

/// Parses "iid_bitflip:0.02", "depolarizing:0.05", "correlated_pair:0.05,0.02,0,1", "spam_only:0.03".
GroundTruth preset_from_string(size_t num_qubits, const std::string &spec);

/// One execution of one identity circuit on one input.
struct CountsRecord {
    size_t depth = 0;
    BasisIndex input = 0;
    size_t seq = 0;
    size_t shots = 0;
    /// Sorted by outcome; only nonzero counts are stored.
    std::vector<std::pair<BasisIndex, uint64_t>> counts;

    /// Normalized counts as a dense length-`dim` distribution.
    std::vector<double> distribution(size_t dim) const;

    bool operator==(const CountsRecord &other) const = default;
};

/// Draws `shots` outcomes from `dist` by inverse-CDF sampling.
std::vector<std::pair<BasisIndex, uint64_t>> sample_counts(
    const std::vector<double> &dist, size_t shots, std::mt19937_64 &rng);

/// Runs `circuit` on the device. The gate ids do not change the outcome distribution since the planted
/// noise is gate independent; the circuit is validated and carried for provenance.
CountsRecord execute(
    const GroundTruth &gt, const IdentityCircuit &circuit, BasisIndex in, size_t shots, std::mt19937_64 &rng);

struct DatasetSpec {
    std::vector<size_t> depths;
    size_t circuits_per_depth = DEFAULT_CIRCUITS_PER_DEPTH;
    std::vector<BasisIndex> inputs;
    size_t shots = DEFAULT_SHOTS;
    uint64_t seed = 0;
    size_t workers = 1;
};

/// Seed of circuit `seq` at (depth, input). Lets a dataset's circuits be regenerated from its metadata.
uint64_t circuit_seed(uint64_t seed, size_t depth, size_t seq, BasisIndex in);

/// K records per (depth, input), ordered by (depth, seq, input). Reproducible for a fixed seed.
std::vector<CountsRecord> generate_dataset(const GroundTruth &gt, const DatasetSpec &spec);

/// The circuits behind generate_dataset(gt, spec), in the same order.
std::vector<IdentityCircuit> dataset_circuits(size_t num_qubits, const DatasetSpec &spec);

/// n-character bitstring, most significant qubit first.
std::string to_bitstring(BasisIndex value, size_t num_qubits);
BasisIndex from_bitstring(const std::string &bits);

/// {"depth":m,"input":"00","seq":k,"shots":1024,"counts":{"00":931,..}}
std::string record_to_json_line(const CountsRecord &record, size_t num_qubits);
/// Parses one dataset line. Sets *num_qubits from the bitstring width.
CountsRecord record_from_json_line(const std::string &line, size_t *num_qubits);

void write_dataset(std::ostream &out, const std::vector<CountsRecord> &records, size_t num_qubits);
/// Reads a JSON-lines dataset; blank lines are skipped. Returns the qubit count via *num_qubits.
std::vector<CountsRecord> read_dataset(std::istream &in, size_t *num_qubits);

}  // namespace paulimit

#endif
