// Copyright 2026 The qspc Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qspc {

/// Input violates a documented precondition (bad depth, misordered grid, ...).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of the operation (e.g. |x| > 1).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A Fourier coefficient needed for a phase is exactly zero.
struct DegenerateCoefficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Depolarizing-corrected fidelity estimate is not positive.
struct FidelityCollapseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Returned bound would be negative: the small-angle expansion does not apply.
struct RegimeViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Least-squares normal equations are singular.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Confusion matrix is singular or not diagonally dominant.
struct InversionRejectedError : std::runtime_error {
    InversionRejectedError(const std::string &msg, double kappa) : std::runtime_error(msg), kappa(kappa) {
    }
    /// 1/min_i(2R_ii - 1); infinite or negative when dominance fails.
    double kappa;
};

}  // namespace qspc
