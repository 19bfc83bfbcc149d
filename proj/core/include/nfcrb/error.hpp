// SPDX-License-Identifier: Apache-2.0
//
// nfcrb - wideband compressed-domain Cramer-Rao bounds for near-field arrays
// Copyright (C) 2026 The nfcrb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace nfcrb {

// Invalid arguments are reported with std::invalid_argument throughout.

/// A factorization or inversion failed on a matrix that should be positive
/// definite. `subcarrier()` is the 1-based subcarrier index when known, else -1.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string &what, int subcarrier = -1)
        : std::runtime_error(what), subcarrier_(subcarrier) {}

    int subcarrier() const noexcept { return subcarrier_; }

private:
    int subcarrier_;
};

/// Angle Jacobian d(omega)/d(theta) vanishes (endfire arrival).
class JacobianSingularError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// An object was used before it held the data the operation needs.
class InvalidStateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Two results that must agree by construction disagree beyond tolerance.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nfcrb
