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

#include "nfcrb/array_model.hpp"
#include "nfcrb/combiner.hpp"
#include "nfcrb/covariance.hpp"
#include "nfcrb/linalg.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace nfcrb {

/// [J]_ij = N Re tr(R^{-1} dR_i R^{-1} dR_j), symmetrized. Uses the explicit
/// derivative matrices in `model`; throws InvalidStateError if they are
/// missing and NumericalError if R is not positive definite.
RMat fim_subcarrier(const CovarianceModel &model, int N);

/// Same quantity without forming dR. Every derivative except the N_0 one is a
/// sum of rank-one terms in the compressed vectors d_l, W^H da/domega and
/// W^H da/dkappa, so the traces reduce to small Gram matrices. For W = I the
/// inverse comes from the Woodbury identity instead of a Cholesky factor.
RMat fim_subcarrier_structured(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                               double alpha, int N, int subcarrier = -1);

/// Thresholded eigen-pseudoinverse J^+ = V diag(1/s_i if s_i > eps) V^T with
/// eps = 1e-6 max(s). Tiny negative eigenvalues are clamped to zero first.
struct Pseudoinverse {
    RMat pinv;
    int rank = 0;
    RVec eigvals; ///< ascending, after clamping
    RMat eigvecs;
    double eps_sv = 0.0;
};

inline constexpr double kPinvRelativeTolerance = 1e-6;

Pseudoinverse fim_pseudoinverse(const RMat &J);

/// Memoizes per-subcarrier FIMs on (alpha, eta, combiner, array, N).
/// Thread-safe.
class FimCache {
public:
    template <typename Compute>
    RMat get_or_compute(double alpha, const ParamVector &eta, const Combiner &c,
                        const ArrayConfig &cfg, int N, Compute &&compute)
    {
        const Key key = make_key(alpha, eta, c, cfg, N);
        {
            std::lock_guard lock(mutex_);
            if (auto it = entries_.find(key); it != entries_.end()) {
                ++hits_;
                return it->second;
            }
        }
        RMat J = compute();
        std::lock_guard lock(mutex_);
        ++misses_;
        entries_.emplace(key, J);
        return J;
    }

    std::size_t hits() const;
    std::size_t misses() const;
    std::size_t size() const;

private:
    using Key = std::tuple<std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, int>;
    static Key make_key(double alpha, const ParamVector &eta, const Combiner &c,
                        const ArrayConfig &cfg, int N);

    mutable std::mutex mutex_;
    std::map<Key, RMat> entries_;
    std::size_t hits_ = 0;
    std::size_t misses_ = 0;
};

enum class FimRoute { Structured, Dense };

struct FimOptions {
    int workers = 1;
    FimCache *cache = nullptr;
    FimRoute route = FimRoute::Structured;
};

/// Per-subcarrier and aggregated Fisher information for one configuration.
struct FimBundle {
    std::vector<int> subcarriers; ///< 1-based grid indices, ascending
    std::vector<double> alphas;
    std::vector<RMat> J_k;
    RMat J_WB; ///< Kahan sum of J_k in ascending subcarrier order
    RMat J_NB; ///< evaluated at alpha = 1 exactly
    RMat J_DD; ///< Ks * J_NB
    int N = 0;
    Pseudoinverse wb; ///< of J_WB

    int Ks() const { return static_cast<int>(J_k.size()); }
};

FimBundle fim_wideband(const ArrayConfig &cfg, const OfdmGrid &grid, const Combiner &c,
                       const ParamVector &eta, int N, const FimOptions &opts = {});

/// Per-subcarrier FIM at one alpha via the selected route.
RMat fim_at(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta, double alpha, int N,
            FimRoute route, int subcarrier = -1);

/// beta_k = tr(J_k J_NB) / tr(J_NB J_NB), the least-squares scale of J_k onto
/// J_NB. Throws InvalidStateError when J_NB is zero.
RVec beta_diagnostic(const FimBundle &bundle);

} // namespace nfcrb
