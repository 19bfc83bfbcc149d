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

#include "nfcrb/rng.hpp"

#include "nfcrb/linalg.hpp"

#include <cmath>

namespace nfcrb {

std::complex<double> GaussianStream::complex_normal() noexcept
{
    const double u1 = rng_.uniform();
    const double u2 = rng_.uniform();
    const double rho = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double phi = 2.0 * kPi * u2;
    return {rho * std::cos(phi), rho * std::sin(phi)};
}

std::complex<double> GaussianStream::circular(double variance) noexcept
{
    return complex_normal() * std::sqrt(variance / 2.0);
}

} // namespace nfcrb
