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
#include "nfcrb/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfcrb {

enum class CrbVariant { Wideband, Narrowband, DataDiversity, FullArray };

std::string to_string(CrbVariant v);

/// Marginal bounds for one path. Variances are in rad^2 / m^2, standard
/// deviations in degrees / metres. A zero curvature leaves range unobservable:
/// range_var is +inf and range_infinite is set.
struct PathCrb {
    double omega_var = 0.0;
    double kappa_var = 0.0;
    double theta_var = 0.0;
    double theta_std_deg = 0.0;
    double range_var = 0.0;
    double range_std_m = 0.0;
    bool range_infinite = false;
};

struct CrbReport {
    CrbVariant variant = CrbVariant::Wideband;
    int Ks = 1;
    std::vector<PathCrb> paths;
    /// Identifies the configuration the report was built from; 0 = unknown.
    std::uint64_t fingerprint = 0;
};

/// CRB_theta = [J+]_ll / (2 pi d_ant sin(theta) / lambda)^2,
/// CRB_r = [J+]_{d+l,d+l} / (kappa / r)^2.
/// Throws JacobianSingularError when sin(theta) = 0.
CrbReport propagate_crb(const RMat &J_pinv, const PathSet &paths, const ArrayConfig &cfg,
                        CrbVariant variant = CrbVariant::Wideband, std::uint64_t fingerprint = 0);

struct PathGains {
    double gd_theta_db = 0.0;
    double gd_r_db = 0.0;
    double total_theta_db = 0.0;
    double total_r_db = 0.0;
};

/// Split of the narrowband-to-wideband CRB improvement (dB on variances):
/// delta_dd = 10 log10(Ks), delta_gd = 10 log10(CRB_DD / CRB_WB) with
/// CRB_DD = CRB_NB / Ks, and delta_total = delta_dd + delta_gd.
struct Decomposition {
    int Ks = 1;
    double delta_dd_db = 0.0;
    CrbReport dd;
    std::vector<PathGains> paths;
};

/// Throws std::invalid_argument if the reports describe different
/// configurations or path counts.
Decomposition decompose(const CrbReport &narrowband, const CrbReport &wideband, int Ks);

/// 10 log10(1 + (B/f_c)^2 / 12). Reported as a diagnostic; the realized
/// geometric gain is not bounded by it.
double gd_scalar_bound(double bandwidth_hz, double f_c);

struct GapDb {
    double theta_db = 0.0;
    double r_db = 0.0;
};

/// 10 log10(CRB_comp / CRB_full) per path. Throws ConsistencyError when a gap
/// is below -0.01 dB.
std::vector<GapDb> compression_gap(const CrbReport &compressed, const CrbReport &full);

inline constexpr double kGapConsistencyToleranceDb = -0.01;

} // namespace nfcrb
