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
#include "nfcrb/linalg.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace nfcrb {

/// Compressed covariance at one subcarrier,
///   R = sum_l p_l d_l d_l^H + N_0 W^H W,  d_l = W^H a_l(alpha),
/// and, once `covariance_derivatives` has run, dR/d eta_i for every entry of
/// the ParamVector layout.
struct CovarianceModel {
    CMat R;
    std::vector<CMat> dR; ///< empty until derivatives are filled
    double alpha = 1.0;
    std::vector<CVec> d_vecs;
    int subcarrier = -1; ///< 1-based, -1 when not tied to a grid

    int d() const { return static_cast<int>(d_vecs.size()); }
    bool has_derivatives() const { return !dR.empty(); }
};

CovarianceModel model_covariance(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                                 double alpha, int subcarrier = -1);

CovarianceModel model_covariance(const ArrayConfig &cfg, const Combiner &c, const PathSet &paths,
                                 double N0, double alpha);

/// Fills model.dR: omega_l and kappa_l blocks are
/// p_l (W^H da d_l^H + d_l (W^H da)^H), the p_l block is d_l d_l^H and the
/// N_0 entry is W^H W.
CovarianceModel covariance_derivatives(CovarianceModel model, const ArrayConfig &cfg,
                                       const Combiner &c, const ParamVector &eta);

/// model_covariance followed by covariance_derivatives.
CovarianceModel build_covariance(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                                 double alpha, int subcarrier = -1);

/// Cholesky factor of a model covariance. Construction throws NumericalError
/// (carrying the subcarrier index) if R is not positive definite.
class CovarianceFactor {
public:
    explicit CovarianceFactor(const CMat &R, int subcarrier = -1);

    CMat solve(const CMat &B) const { return llt_.solve(B); }
    CVec solve(const CVec &b) const { return llt_.solve(b); }
    double log_det() const;
    CMat inverse() const;

private:
    Eigen::LLT<CMat> llt_;
};

/// Relative Frobenius mismatch ||R(alpha, r) - R(1, r)||_F / ||R(1, r)||_F for
/// a single path at (theta, r). Evaluated in closed form from the compressed
/// steering vectors, so no M x M matrix is formed for W = I.
struct MismatchGrid {
    RVec alphas;
    RVec ranges; ///< m
    RMat delta;  ///< alphas.size() x ranges.size()
    double max_delta = 0.0;

    /// Largest delta over ranges at the alpha farthest from 1.
    double edge_max() const;
};

MismatchGrid mismatch_grid(const ArrayConfig &cfg, const Combiner &c, double theta_rad, double N0,
                           double power, std::span<const double> alpha_list,
                           std::span<const double> range_list);

/// Compressed snapshots y_k(n) = W^H (sum_l s_l a_l + w) per requested alpha.
struct SnapshotSet {
    std::vector<double> alphas;
    std::vector<CMat> Y;     ///< N_RF x N per subcarrier
    std::vector<CMat> R_hat; ///< (1/N) Y Y^H
    int N = 0;
};

/// Subcarrier i (0-based position in `alphas`) draws from a GaussianStream
/// seeded with (seed ^ kSnapshotStreamTag ^ i). Within a subcarrier the draw
/// order is: for each snapshot, one gain per path, then M noise samples.
SnapshotSet generate_snapshots(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                               std::span<const double> alphas, int N, std::uint64_t seed);

/// log det R + tr(R^{-1} R_hat).
double kl_objective(const CovarianceModel &model, const CMat &R_hat);

} // namespace nfcrb
