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

#include "nfcrb/array_model.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace nfcrb {

namespace {

void require_finite(double v, const char *name)
{
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(name) + " must be finite");
    }
}

} // namespace

ArrayConfig ArrayConfig::make(int M, double f_c)
{
    if (M < 2) {
        throw std::invalid_argument("ArrayConfig: M must be >= 2");
    }
    if (!std::isfinite(f_c) || f_c <= 0.0) {
        throw std::invalid_argument("ArrayConfig: carrier frequency must be positive");
    }
    ArrayConfig cfg;
    cfg.M = M;
    cfg.f_c = f_c;
    cfg.lambda_c = kSpeedOfLight / f_c;
    cfg.d_ant = cfg.lambda_c / 2.0;
    cfg.m_bar.resize(M);
    const double center = (M - 1) / 2.0;
    for (int m = 0; m < M; ++m) {
        cfg.m_bar(m) = m - center;
    }
    return cfg;
}

std::vector<double> OfdmGrid::selected_alphas() const
{
    std::vector<double> out;
    out.reserve(selected.size());
    for (int k : selected) {
        out.push_back(alpha(k));
    }
    return out;
}

namespace {

OfdmGrid make_grid(double f_c, double delta_f, int K, int Ks_max)
{
    OfdmGrid g;
    g.K = K;
    g.f_c = f_c;
    g.delta_f = delta_f;
    g.B_eff = K * delta_f;
    g.Ks_max = Ks_max;
    g.f_k.resize(K);
    g.alpha_k.resize(K);
    const double half = K / 2.0;
    for (int k = 1; k <= K; ++k) {
        const double offset = (k - half) * delta_f;
        g.f_k(k - 1) = f_c + offset;
        g.alpha_k(k - 1) = 1.0 + offset / f_c;
    }

    if (K % 2 == 0) {
        g.k_c = K / 2;
    } else {
        int best = 1;
        for (int k = 2; k <= K; ++k) {
            if (std::abs(g.alpha_k(k - 1) - 1.0) < std::abs(g.alpha_k(best - 1) - 1.0)) {
                best = k;
            }
        }
        g.k_c = best;
    }

    const int Ks = std::min(K, Ks_max);
    if (Ks == 1) {
        g.selected = {g.k_c};
    } else {
        // round-half-up of 1 + (i-1)(K-1)/(Ks-1), in exact integer arithmetic
        const std::int64_t den = 2 * static_cast<std::int64_t>(Ks - 1);
        for (int i = 1; i <= Ks; ++i) {
            const std::int64_t num = 2 * static_cast<std::int64_t>(i - 1) * (K - 1) + (Ks - 1);
            const int idx = 1 + static_cast<int>(num / den);
            if (g.selected.empty() || g.selected.back() != idx) {
                g.selected.push_back(idx);
            }
        }
    }
    return g;
}

} // namespace

OfdmGrid build_grid(double f_c, double delta_f, double B_target, int Ks_max)
{
    require_finite(f_c, "f_c");
    require_finite(delta_f, "delta_f");
    require_finite(B_target, "B_target");
    if (f_c <= 0.0 || delta_f <= 0.0) {
        throw std::invalid_argument("build_grid: f_c and delta_f must be positive");
    }
    if (Ks_max < 1) {
        throw std::invalid_argument("build_grid: Ks_max must be >= 1");
    }
    if (B_target < delta_f) {
        throw std::invalid_argument("build_grid: bandwidth must be at least one subcarrier spacing");
    }
    const double ratio = B_target / delta_f;
    if (ratio > static_cast<double>(std::numeric_limits<int>::max() / 2)) {
        throw std::invalid_argument("build_grid: subcarrier count overflows");
    }
    const int K = static_cast<int>(std::floor(ratio + 0.5));
    return make_grid(f_c, delta_f, K, Ks_max);
}

OfdmGrid narrowband_grid(double f_c, double delta_f)
{
    // K = 2 puts alpha exactly at 1 on subcarrier k = 1; only that one is used.
    OfdmGrid g = make_grid(f_c, delta_f, 2, 1);
    g.selected = {g.k_c};
    return g;
}

double spatial_frequency(const ArrayConfig &cfg, double theta_rad)
{
    return -cfg.angle_scale() * std::cos(theta_rad);
}

double fresnel_curvature(const ArrayConfig &cfg, double theta_rad, double range_m)
{
    if (std::isinf(range_m)) {
        return 0.0;
    }
    const double s = std::sin(theta_rad);
    return kPi * cfg.d_ant * cfg.d_ant / cfg.lambda_c * s * s / range_m;
}

PathSet PathSet::make(const ArrayConfig &cfg, std::span<const double> theta_rad,
                      std::span<const double> range_m, std::span<const double> power)
{
    const std::size_t d = theta_rad.size();
    if (d == 0) {
        throw std::invalid_argument("PathSet: at least one path required");
    }
    if (range_m.size() != d || power.size() != d) {
        throw std::invalid_argument("PathSet: theta, range and power lengths differ");
    }
    PathSet ps;
    const auto n = static_cast<Eigen::Index>(d);
    ps.theta.resize(n);
    ps.r.resize(n);
    ps.p.resize(n);
    ps.omega.resize(n);
    ps.kappa.resize(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto i = static_cast<std::size_t>(l);
        require_finite(theta_rad[i], "theta");
        if (std::isnan(range_m[i]) || range_m[i] <= 0.0) {
            throw std::invalid_argument("PathSet: range must be positive");
        }
        if (!std::isfinite(power[i]) || power[i] < 0.0) {
            throw std::invalid_argument("PathSet: power must be finite and non-negative");
        }
        ps.theta(l) = theta_rad[i];
        ps.r(l) = range_m[i];
        ps.p(l) = power[i];
        ps.omega(l) = spatial_frequency(cfg, theta_rad[i]);
        ps.kappa(l) = fresnel_curvature(cfg, theta_rad[i], range_m[i]);
    }
    return ps;
}

PathSet PathSet::single(const ArrayConfig &cfg, double theta_rad, double range_m, double power)
{
    const double t[] = {theta_rad};
    const double r[] = {range_m};
    const double p[] = {power};
    return make(cfg, t, r, p);
}

ParamVector::ParamVector(int d, RVec eta) : d_(d), eta_(std::move(eta))
{
    if (d < 1) {
        throw std::invalid_argument("ParamVector: d must be >= 1");
    }
    if (eta_.size() != 3 * d + 1) {
        throw std::invalid_argument("ParamVector: eta must have length 3d+1");
    }
    for (Eigen::Index i = 0; i < eta_.size(); ++i) {
        require_finite(eta_(i), "eta");
    }
}

ParamVector ParamVector::from_paths(const PathSet &paths, double N0)
{
    if (!std::isfinite(N0) || N0 <= 0.0) {
        throw std::invalid_argument("ParamVector: N_0 must be positive");
    }
    const int d = paths.d();
    RVec eta(3 * d + 1);
    eta.segment(0, d) = paths.omega;
    eta.segment(d, d) = paths.kappa;
    eta.segment(2 * d, d) = paths.p;
    eta(3 * d) = N0;
    return ParamVector(d, std::move(eta));
}

ParamVector ParamVector::perturbed(int i, double delta) const
{
    RVec e = eta_;
    e(i) += delta;
    return ParamVector(d_, std::move(e));
}

CVec steering_vector(const ArrayConfig &cfg, double omega, double kappa, double alpha)
{
    require_finite(omega, "omega");
    require_finite(kappa, "kappa");
    require_finite(alpha, "alpha");
    if (alpha <= 0.0) {
        throw std::invalid_argument("steering_vector: alpha must be positive");
    }
    CVec a(cfg.M);
    for (int m = 0; m < cfg.M; ++m) {
        const double mb = cfg.m_bar(m);
        const double phase = alpha * omega * mb - alpha * kappa * mb * mb;
        a(m) = cdouble(std::cos(phase), std::sin(phase));
    }
    return a;
}

SteeringDerivatives steering_derivatives(const ArrayConfig &cfg, double omega, double kappa,
                                         double alpha)
{
    const CVec a = steering_vector(cfg, omega, kappa, alpha);
    SteeringDerivatives out{CVec(cfg.M), CVec(cfg.M)};
    const cdouble j(0.0, 1.0);
    for (int m = 0; m < cfg.M; ++m) {
        const double mb = cfg.m_bar(m);
        out.d_omega(m) = j * (alpha * mb) * a(m);
        out.d_kappa(m) = -j * (alpha * mb * mb) * a(m);
    }
    return out;
}

} // namespace nfcrb
