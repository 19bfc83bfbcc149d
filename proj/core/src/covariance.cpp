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

#include "nfcrb/covariance.hpp"

#include "nfcrb/error.hpp"
#include "nfcrb/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nfcrb {

namespace {

void check_dims(const ArrayConfig &cfg, const Combiner &c)
{
    if (c.M() != cfg.M) {
        throw std::invalid_argument("combiner row count " + std::to_string(c.M()) +
                                    " does not match array size " + std::to_string(cfg.M));
    }
}

CMat outer(const CVec &u, const CVec &v) { return u * v.adjoint(); }

} // namespace

CovarianceModel model_covariance(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                                 double alpha, int subcarrier)
{
    check_dims(cfg, c);
    if (!(eta.noise() > 0.0)) {
        throw std::invalid_argument("model_covariance: N_0 must be positive");
    }
    CovarianceModel model;
    model.alpha = alpha;
    model.subcarrier = subcarrier;
    model.R = eta.noise() * c.gram();
    model.d_vecs.reserve(static_cast<std::size_t>(eta.d()));
    for (int l = 0; l < eta.d(); ++l) {
        CVec dl = c.compress(steering_vector(cfg, eta.omega(l), eta.kappa(l), alpha));
        model.R.noalias() += eta.power(l) * outer(dl, dl);
        model.d_vecs.push_back(std::move(dl));
    }
    assert(hermitian_defect(model.R) < 1e-12);
    return model;
}

CovarianceModel model_covariance(const ArrayConfig &cfg, const Combiner &c, const PathSet &paths,
                                 double N0, double alpha)
{
    return model_covariance(cfg, c, ParamVector::from_paths(paths, N0), alpha);
}

CovarianceModel covariance_derivatives(CovarianceModel model, const ArrayConfig &cfg,
                                       const Combiner &c, const ParamVector &eta)
{
    check_dims(cfg, c);
    const int d = eta.d();
    if (model.d() != d) {
        throw std::invalid_argument("covariance_derivatives: path count differs from the model");
    }
    model.dR.assign(static_cast<std::size_t>(eta.size()), CMat());
    for (int l = 0; l < d; ++l) {
        const CVec &dl = model.d_vecs[static_cast<std::size_t>(l)];
        const auto da = steering_derivatives(cfg, eta.omega(l), eta.kappa(l), model.alpha);
        const CVec u_omega = c.compress(da.d_omega);
        const CVec u_kappa = c.compress(da.d_kappa);
        const double p = eta.power(l);
        model.dR[static_cast<std::size_t>(ParamVector::omega_index(d, l))] =
            p * (outer(u_omega, dl) + outer(dl, u_omega));
        model.dR[static_cast<std::size_t>(ParamVector::kappa_index(d, l))] =
            p * (outer(u_kappa, dl) + outer(dl, u_kappa));
        model.dR[static_cast<std::size_t>(ParamVector::power_index(d, l))] = outer(dl, dl);
    }
    model.dR[static_cast<std::size_t>(ParamVector::noise_index(d))] = c.gram();
    return model;
}

CovarianceModel build_covariance(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                                 double alpha, int subcarrier)
{
    return covariance_derivatives(model_covariance(cfg, c, eta, alpha, subcarrier), cfg, c, eta);
}

CovarianceFactor::CovarianceFactor(const CMat &R, int subcarrier) : llt_(R)
{
    if (llt_.info() != Eigen::Success) {
        std::string msg = "model covariance is not positive definite";
        if (subcarrier >= 0) {
            msg += " at subcarrier " + std::to_string(subcarrier);
        }
        throw NumericalError(msg, subcarrier);
    }
}

double CovarianceFactor::log_det() const
{
    const auto L = llt_.matrixLLT();
    double s = 0.0;
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
        s += std::log(L(i, i).real());
    }
    return 2.0 * s;
}

CMat CovarianceFactor::inverse() const
{
    const auto n = llt_.matrixLLT().rows();
    return llt_.solve(CMat::Identity(n, n));
}

double MismatchGrid::edge_max() const
{
    if (alphas.size() == 0) {
        return 0.0;
    }
    double far = 0.0;
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
        far = std::max(far, std::abs(alphas(i) - 1.0));
    }
    double best = 0.0;
    for (Eigen::Index i = 0; i < alphas.size(); ++i) {
        if (std::abs(alphas(i) - 1.0) == far) {
            best = std::max(best, delta.row(i).maxCoeff());
        }
    }
    return best;
}

MismatchGrid mismatch_grid(const ArrayConfig &cfg, const Combiner &c, double theta_rad, double N0,
                           double power, std::span<const double> alpha_list,
                           std::span<const double> range_list)
{
    bool has_unit = false;
    for (double a : alpha_list) {
        has_unit = has_unit || a == 1.0;
    }
    if (!has_unit) {
        throw std::invalid_argument("mismatch_grid: alpha list must contain alpha = 1");
    }
    for (double r : range_list) {
        if (!(r > 0.0)) {
            throw std::invalid_argument("mismatch_grid: ranges must be positive");
        }
    }

    check_dims(cfg, c);
    if (!(N0 > 0.0) || !(power >= 0.0)) {
        throw std::invalid_argument("mismatch_grid: need N0 > 0 and power >= 0");
    }

    MismatchGrid g;
    g.alphas = Eigen::Map<const RVec>(alpha_list.data(), static_cast<Eigen::Index>(alpha_list.size()));
    g.ranges = Eigen::Map<const RVec>(range_list.data(), static_cast<Eigen::Index>(range_list.size()));
    g.delta.resize(g.alphas.size(), g.ranges.size());

    // R(alpha) - R(1) = p (u u^H - v v^H) with u = W^H a(alpha), v = W^H a(1).
    // Writing s = u + v, t = u - v gives
    //   ||u u^H - v v^H||_F^2 = (|s|^2 |t|^2 + Re((s^H t)^2)) / 2,
    // which keeps small differences accurate. The reference norm expands as
    //   ||p v v^H + N0 G||_F^2 = p^2 |v|^4 + 2 p N0 v^H G v + N0^2 ||G||_F^2.
    const CMat &G = c.gram();
    const double g_norm2 = G.squaredNorm();
    const double omega = spatial_frequency(cfg, theta_rad);
    for (Eigen::Index j = 0; j < g.ranges.size(); ++j) {
        const double kappa = fresnel_curvature(cfg, theta_rad, g.ranges(j));
        const CVec v = c.compress(steering_vector(cfg, omega, kappa, 1.0));
        const double vv = v.squaredNorm();
        const double vGv = v.dot(G * v).real();
        const double ref = std::sqrt(power * power * vv * vv + 2.0 * power * N0 * vGv + N0 * N0 * g_norm2);
        for (Eigen::Index i = 0; i < g.alphas.size(); ++i) {
            if (g.alphas(i) == 1.0) {
                g.delta(i, j) = 0.0;
                continue;
            }
            const CVec u = c.compress(steering_vector(cfg, omega, kappa, g.alphas(i)));
            const CVec sum = u + v;
            const CVec diff = u - v;
            const cdouble st = sum.dot(diff);
            const double d2 = 0.5 * (sum.squaredNorm() * diff.squaredNorm() + (st * st).real());
            g.delta(i, j) = power * std::sqrt(std::max(d2, 0.0)) / ref;
        }
    }
    g.max_delta = g.delta.size() > 0 ? g.delta.maxCoeff() : 0.0;
    return g;
}

SnapshotSet generate_snapshots(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                               std::span<const double> alphas, int N, std::uint64_t seed)
{
    check_dims(cfg, c);
    if (N < 1) {
        throw std::invalid_argument("generate_snapshots: N must be >= 1");
    }
    SnapshotSet out;
    out.N = N;
    out.alphas.assign(alphas.begin(), alphas.end());
    const int d = eta.d();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        std::vector<CVec> steer;
        steer.reserve(static_cast<std::size_t>(d));
        for (int l = 0; l < d; ++l) {
            steer.push_back(steering_vector(cfg, eta.omega(l), eta.kappa(l), alphas[i]));
        }
        GaussianStream gauss(seed ^ kSnapshotStreamTag ^ static_cast<std::uint64_t>(i));
        CMat X(cfg.M, N);
        for (int n = 0; n < N; ++n) {
            CVec x = CVec::Zero(cfg.M);
            for (int l = 0; l < d; ++l) {
                x += gauss.circular(eta.power(l)) * steer[static_cast<std::size_t>(l)];
            }
            for (int m = 0; m < cfg.M; ++m) {
                x(m) += gauss.circular(eta.noise());
            }
            X.col(n) = x;
        }
        CMat Y = c.compress(X);
        CMat Rh = (Y * Y.adjoint()) / static_cast<double>(N);
        out.R_hat.push_back(0.5 * (Rh + Rh.adjoint()));
        out.Y.push_back(std::move(Y));
    }
    return out;
}

double kl_objective(const CovarianceModel &model, const CMat &R_hat)
{
    if (R_hat.rows() != model.R.rows() || R_hat.cols() != model.R.cols()) {
        throw std::invalid_argument("kl_objective: sample covariance has the wrong shape");
    }
    const CovarianceFactor factor(model.R, model.subcarrier);
    return factor.log_det() + factor.solve(R_hat).trace().real();
}

} // namespace nfcrb
