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

#include <complex>
#include <cstdint>

namespace nfcrb {

/// SplitMix64 (Steele, Lea, Flood 2014). The output sequence is fixed for a
/// given seed on every platform; combiner phases and snapshot draws depend on
/// that.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Top 53 bits scaled to [0, 1).
    double uniform() noexcept
    {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Standard normal pairs via Box-Muller over a SplitMix64 stream.
///
/// Each call to `complex_normal` consumes exactly two uniforms u1, u2 and
/// returns (rho cos(2 pi u2), rho sin(2 pi u2)) with rho = sqrt(-2 ln(1 - u1)).
/// The real part comes first. Using 1 - u1 keeps the logarithm finite.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) noexcept : rng_(seed) {}

    /// Real and imaginary parts are independent N(0, 1).
    std::complex<double> complex_normal() noexcept;

    /// CN(0, variance): each part scaled by sqrt(variance / 2).
    std::complex<double> circular(double variance) noexcept;

private:
    SplitMix64 rng_;
};

/// Domain separator XORed into user seeds for snapshot streams so that
/// snapshot draws never alias the combiner stream.
inline constexpr std::uint64_t kSnapshotStreamTag = 0x6A09E667F3BCC909ULL;

} // namespace nfcrb
