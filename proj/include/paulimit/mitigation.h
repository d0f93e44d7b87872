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

#ifndef _PAULIMIT_MITIGATION_H
#define _PAULIMIT_MITIGATION_H

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "paulimit/device_sim.h"
#include "paulimit/pauli_channel.h"

namespace paulimit {

/// Above this condition estimate the solve switches to a minimum-norm least-squares solution.
constexpr double CONDITION_LIMIT = 1e8;

/// Jensen-Shannon divergence with base-2 logarithms, so the value lies in [0, 1].
double jsd(std::span<const double> p, std::span<const double> q);

/// Factorizes a mitigation matrix once and solves Q x = noisy for many noisy outputs.
class Mitigator {
   public:
    explicit Mitigator(const MitigationMatrix &Q);

    /// simplex_project of the solution of Q x = noisy.
    std::vector<double> mitigate(std::span<const double> noisy) const;

    /// True when the condition estimate exceeded CONDITION_LIMIT and the pseudo-solution is used.
    bool uses_pseudo_inverse() const {
        return pseudo_inverse_;
    }
    double condition() const {
        return condition_;
    }

   private:
    size_t dim_;
    double condition_;
    bool pseudo_inverse_;
    Eigen::PartialPivLU<Matrix> lu_;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
};

std::vector<double> mitigate(const MitigationMatrix &Q, std::span<const double> noisy);

/// Readout calibration matrix from gate-free (depth 0) records: column `in` is the averaged
/// distribution observed after preparing `in`.
MitigationMatrix mem_build(std::span<const CountsRecord> records, size_t num_qubits);

enum class Method { Unmitigated, Mem, Proposed, ProposedAverage };

const char *method_name(Method method);
Method method_from_name(const std::string &name);

struct ReportRow {
    size_t depth = 0;
    /// nullopt for the row aggregated over every input.
    std::optional<BasisIndex> input;
    Method method = Method::Unmitigated;
    double mean_jsd = 0;
    double std_jsd = 0;
    size_t samples = 0;
    std::string flags;
};

struct MitigationReport {
    size_t num_qubits = 0;
    std::vector<ReportRow> rows;

    /// The aggregated (all inputs) row for a depth and method, or nullptr.
    const ReportRow *find(size_t depth, Method method) const;

    /// Header `depth,input,method,mean_jsd,std_jsd,flags`; aggregated rows use input "all".
    void write_csv(std::ostream &out) const;
};

struct EvaluateOptions {
    std::vector<size_t> test_depths;
    std::vector<BasisIndex> inputs;
    std::vector<Method> methods{Method::Unmitigated, Method::Mem, Method::Proposed};
    size_t workers = 1;
};

/// Scores every circuit at the test depths against its ideal output e_in.
///
/// Each circuit is mitigated on its own and the JSDs are then averaged, per input and over all inputs.
/// Method::Mem needs depth-0 records for every basis input; Method::Proposed needs a model with every
/// basis input; Method::ProposedAverage uses the same model with the rates averaged across inputs.
MitigationReport evaluate(
    std::span<const CountsRecord> records, size_t num_qubits, const NoiseModel &model, const EvaluateOptions &options);

}  // namespace paulimit

#endif
