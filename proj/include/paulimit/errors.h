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

#ifndef _PAULIMIT_ERRORS_H
#define _PAULIMIT_ERRORS_H

#include <stdexcept>
#include <string>

namespace paulimit {

/// Shape problems: wrong vector length, index out of range, mismatched dimensions.
struct StructuralError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Values outside the mathematical domain of an operation (e.g. rates not on the simplex).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A dataset does not contain the (depth, input) cells an operation needs.
struct CoverageError : DomainError {
    using DomainError::DomainError;
};

/// A linear solve that could not produce any answer.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace paulimit

#endif
