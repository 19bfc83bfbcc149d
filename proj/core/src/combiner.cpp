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

#include "nfcrb/combiner.hpp"

#include "nfcrb/error.hpp"
#include "nfcrb/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace nfcrb {

std::string to_string(CombinerKind kind)
{
    switch (kind) {
    case CombinerKind::RandomConstantModulus: return "random";
    case CombinerKind::Identity: return "identity";
    }
    return "unknown";
}

Combiner::Combiner(CombinerKind kind, std::uint64_t seed, CMat W)
    : kind_(kind), seed_(seed), W_(std::move(W))
{
    gram_ = W_.adjoint() * W_;
    gram_ = (0.5 * (gram_ + gram_.adjoint())).eval();
    if (kind_ != CombinerKind::Identity && Eigen::LLT<CMat>(gram_).info() != Eigen::Success) {
        throw NumericalError("Combiner: W^H W is not positive definite");
    }
}

Combiner Combiner::random(int M, int N_RF, std::uint64_t seed)
{
    if (M < 1 || N_RF < 1 || N_RF > M) {
        throw std::invalid_argument("Combiner::random: require 1 <= N_RF <= M");
    }
    SplitMix64 rng(seed);
    const double scale = 1.0 / std::sqrt(static_cast<double>(M));
    CMat W(M, N_RF);
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < N_RF; ++n) {
            const double phase = 2.0 * kPi * rng.uniform();
            W(m, n) = std::polar(scale, phase);
        }
    }
    return Combiner(CombinerKind::RandomConstantModulus, seed, std::move(W));
}

Combiner Combiner::identity(int M)
{
    if (M < 1) {
        throw std::invalid_argument("Combiner::identity: M must be positive");
    }
    return Combiner(CombinerKind::Identity, 0, CMat::Identity(M, M));
}

CVec Combiner::compress(const CVec &a) const
{
    if (a.size() != W_.rows()) {
        throw std::invalid_argument("Combiner::compress: vector length must equal M");
    }
    if (kind_ == CombinerKind::Identity) {
        return a;
    }
    return W_.adjoint() * a;
}

CMat Combiner::compress(const CMat &A) const
{
    if (A.rows() != W_.rows()) {
        throw std::invalid_argument("Combiner::compress: row count must equal M");
    }
    if (kind_ == CombinerKind::Identity) {
        return A;
    }
    return W_.adjoint() * A;
}

std::uint64_t Combiner::fingerprint() const
{
    // splitmix finalizer over the packed identity fields
    std::uint64_t h = static_cast<std::uint64_t>(kind_) * 0x9E3779B97F4A7C15ULL;
    for (std::uint64_t v : {static_cast<std::uint64_t>(M()), static_cast<std::uint64_t>(n_rf()), seed_}) {
        SplitMix64 mix(h ^ v);
        h = mix.next();
    }
    return h;
}

} // namespace nfcrb
