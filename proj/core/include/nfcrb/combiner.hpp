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

#include "nfcrb/linalg.hpp"

#include <cstdint>
#include <string>

namespace nfcrb {

enum class CombinerKind { RandomConstantModulus, Identity };

std::string to_string(CombinerKind kind);

/// Frequency-flat analog combiner W (M x N_RF), shared by every subcarrier.
/// Immutable after construction.
class Combiner {
public:
    /// W[m,n] = exp(j 2 pi u) / sqrt(M), with u drawn from SplitMix64(seed)
    /// in row-major order (m outer, n inner). Requires 1 <= N_RF <= M.
    static Combiner random(int M, int N_RF, std::uint64_t seed);

    /// W = I_M: the full-array reference.
    static Combiner identity(int M);

    CombinerKind kind() const { return kind_; }
    int M() const { return static_cast<int>(W_.rows()); }
    int n_rf() const { return static_cast<int>(W_.cols()); }
    std::uint64_t seed() const { return seed_; }

    const CMat &W() const { return W_; }
    const CMat &gram() const { return gram_; } ///< W^H W

    /// W^H a.
    CVec compress(const CVec &a) const;
    /// W^H A, column by column.
    CMat compress(const CMat &A) const;

    /// Identifies (kind, M, N_RF, seed); used as a cache key.
    std::uint64_t fingerprint() const;

private:
    Combiner(CombinerKind kind, std::uint64_t seed, CMat W);

    CombinerKind kind_;
    std::uint64_t seed_;
    CMat W_;
    CMat gram_;
};

} // namespace nfcrb
