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

#include "nfcrb/crb.hpp"

#include "nfcrb/error.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nfcrb {

std::string to_string(CrbVariant v)
{
    switch (v) {
    case CrbVariant::Wideband: return "wideband";
    case CrbVariant::Narrowband: return "narrowband";
    case CrbVariant::DataDiversity: return "data-diversity";
    case CrbVariant::FullArray: return "full-array";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRadToDeg = 180.0 / kPi;

double db_ratio(double num, double den)
{
    if (std::isinf(num) || std::isinf(den)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return 10.0 * std::log10(num / den);
}

void fill_std(PathCrb &p)
{
    p.theta_std_deg = std::sqrt(p.theta_var) * kRadToDeg;
    p.range_std_m = p.range_infinite ? kInf : std::sqrt(p.range_var);
}

} // namespace

CrbReport propagate_crb(const RMat &J_pinv, const PathSet &paths, const ArrayConfig &cfg,
                        CrbVariant variant, std::uint64_t fingerprint)
{
    const int d = paths.d();
    if (J_pinv.rows() != 3 * d + 1 || J_pinv.cols() != 3 * d + 1) {
        throw std::invalid_argument("propagate_crb: pseudoinverse size does not match 3d+1");
    }
    CrbReport rep;
    rep.variant = variant;
    rep.fingerprint = fingerprint;
    rep.paths.resize(static_cast<std::size_t>(d));
    for (int l = 0; l < d; ++l) {
        PathCrb &p = rep.paths[static_cast<std::size_t>(l)];
        const double sin_t = std::sin(paths.theta(l));
        if (std::abs(sin_t) < 1e-12) {
            throw JacobianSingularError("propagate_crb: angle Jacobian vanishes at endfire (path " +
                                        std::to_string(l + 1) + ")");
        }
        const double dw_dtheta = cfg.angle_scale() * sin_t;
        p.omega_var = J_pinv(l, l);
        p.kappa_var = J_pinv(d + l, d + l);
        p.theta_var = p.omega_var / (dw_dtheta * dw_dtheta);

        const double kappa = paths.kappa(l);
        if (kappa == 0.0) {
            p.range_infinite = true;
            p.range_var = kInf;
        } else {
            const double dk_dr = -kappa / paths.r(l);
            p.range_var = p.kappa_var / (dk_dr * dk_dr);
        }
        fill_std(p);
    }
    return rep;
}

Decomposition decompose(const CrbReport &narrowband, const CrbReport &wideband, int Ks)
{
    if (Ks < 1) {
        throw std::invalid_argument("decompose: Ks must be >= 1");
    }
    if (narrowband.paths.size() != wideband.paths.size()) {
        throw std::invalid_argument("decompose: reports have different path counts");
    }
    if (narrowband.fingerprint != wideband.fingerprint) {
        throw std::invalid_argument("decompose: reports come from different configurations");
    }
    Decomposition dec;
    dec.Ks = Ks;
    dec.delta_dd_db = 10.0 * std::log10(static_cast<double>(Ks));
    dec.dd.variant = CrbVariant::DataDiversity;
    dec.dd.Ks = Ks;
    dec.dd.fingerprint = narrowband.fingerprint;
    for (std::size_t l = 0; l < narrowband.paths.size(); ++l) {
        const PathCrb &nb = narrowband.paths[l];
        const PathCrb &wb = wideband.paths[l];
        PathCrb dd = nb;
        dd.omega_var /= Ks;
        dd.kappa_var /= Ks;
        dd.theta_var /= Ks;
        if (!dd.range_infinite) {
            dd.range_var /= Ks;
        }
        fill_std(dd);
        dec.dd.paths.push_back(dd);

        PathGains g;
        g.gd_theta_db = db_ratio(dd.theta_var, wb.theta_var);
        g.gd_r_db = db_ratio(dd.range_var, wb.range_var);
        g.total_theta_db = dec.delta_dd_db + g.gd_theta_db;
        g.total_r_db = dec.delta_dd_db + g.gd_r_db;
        dec.paths.push_back(g);
    }
    return dec;
}

double gd_scalar_bound(double bandwidth_hz, double f_c)
{
    if (!std::isfinite(bandwidth_hz) || bandwidth_hz < 0.0 || !std::isfinite(f_c) || f_c <= 0.0) {
        throw std::invalid_argument("gd_scalar_bound: need B >= 0 and f_c > 0");
    }
    const double x = bandwidth_hz / f_c;
    return 10.0 * std::log10(1.0 + x * x / 12.0);
}

std::vector<GapDb> compression_gap(const CrbReport &compressed, const CrbReport &full)
{
    if (compressed.paths.size() != full.paths.size()) {
        throw std::invalid_argument("compression_gap: reports have different path counts");
    }
    std::vector<GapDb> out;
    for (std::size_t l = 0; l < full.paths.size(); ++l) {
        GapDb g;
        g.theta_db = db_ratio(compressed.paths[l].theta_var, full.paths[l].theta_var);
        g.r_db = db_ratio(compressed.paths[l].range_var, full.paths[l].range_var);
        for (double v : {g.theta_db, g.r_db}) {
            if (v < kGapConsistencyToleranceDb) {
                throw ConsistencyError("compression_gap: compressed bound below full-array bound (" +
                                       std::to_string(v) + " dB)");
            }
        }
        out.push_back(g);
    }
    return out;
}

} // namespace nfcrb
