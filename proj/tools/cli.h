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

#ifndef _PAULIMIT_TOOLS_CLI_H
#define _PAULIMIT_TOOLS_CLI_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "paulimit/transforms.h"

namespace paulimit::cli {

enum ExitCode : int {
    EXIT_OK = 0,
    EXIT_FAILURE_OTHER = 1,
    EXIT_CONFIG = 2,
    EXIT_COVERAGE = 3,
    EXIT_NUMERIC = 4,
};

/// "1..30", "1,20,40" or a mix such as "0,1..5,10". Sorted, duplicates dropped.
std::vector<size_t> parse_depths(const std::string &text);

/// "all", or a comma list where a token of exactly `num_qubits` binary digits is a bitstring and anything
/// else a decimal index.
std::vector<BasisIndex> parse_inputs(const std::string &text, size_t num_qubits);

/// 64-bit FNV-1a.
uint64_t fnv1a(std::string_view data);

/// Runs one command line; `args` excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace paulimit::cli

#endif
