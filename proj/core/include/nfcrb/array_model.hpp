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

#include <span>
#include <vector>

namespace nfcrb {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Half-wavelength ULA at carrier f_c with centered element indices.
struct ArrayConfig {
    int M = 0;
    double f_c = 0.0;
    double lambda_c = 0.0;
    double d_ant = 0.0;
    RVec m_bar; ///< m - (M-1)/2 for m = 0..M-1

    /// Throws std::invalid_argument for M < 2 or a non-positive carrier.
    static ArrayConfig make(int M, double f_c);

    /// (M-1) d_ant. Diagnostic only.
    double aperture() const { return (M - 1) * d_ant; }

    /// d(omega)/d(theta) / sin(theta) = 2 pi d_ant / lambda_c.
    double angle_scale() const { return 2.0 * kPi * d_ant / lambda_c; }
};

/// OFDM subcarrier grid and the subset used for FIM evaluation.
///
/// Subcarriers are numbered k = 1..K with f_k = f_c + (k - K/2) delta_f.
/// `alpha_k(k - 1)` is the ratio for subcarrier k.
struct OfdmGrid {
    int K = 0;
    double f_c = 0.0;
    double delta_f = 0.0;
    double B_eff = 0.0;
    RVec f_k;
    RVec alpha_k;
    int Ks_max = 0;
    std::vector<int> selected; ///< 1-based, strictly increasing
    int k_c = 0;               ///< 1-based center subcarrier

    int Ks() const { return static_cast<int>(selected.size()); }
    double alpha(int k) const { return alpha_k(k - 1); }
    std::vector<double> selected_alphas() const;
};

/// K = round(B_target / delta_f); K_s = min(K, Ks_max) subcarriers spread
/// uniformly over 1..K with both band edges included.
OfdmGrid build_grid(double f_c, double delta_f, double B_target, int Ks_max = 512);

/// Single-subcarrier grid with alpha = 1 exactly (narrowband reduction).
OfdmGrid narrowband_grid(double f_c, double delta_f);

/// Per-path physical parameters plus the derived (omega, kappa).
struct PathSet {
    RVec theta; ///< rad
    RVec r;     ///< m; +inf is allowed and gives kappa = 0
    RVec p;     ///< linear power, >= 0
    RVec omega; ///< rad/element
    RVec kappa; ///< rad/element^2

    int d() const { return static_cast<int>(theta.size()); }

    static PathSet make(const ArrayConfig &cfg, std::span<const double> theta_rad,
                        std::span<const double> range_m, std::span<const double> power);
    static PathSet single(const ArrayConfig &cfg, double theta_rad, double range_m, double power = 1.0);
};

double spatial_frequency(const ArrayConfig &cfg, double theta_rad);
double fresnel_curvature(const ArrayConfig &cfg, double theta_rad, double range_m);

/// Stacked unknowns [omega(1..d); kappa(1..d); p(1..d); N_0].
class ParamVector {
public:
    ParamVector(int d, RVec eta);

    static ParamVector from_paths(const PathSet &paths, double N0);

    int d() const { return d_; }
    int size() const { return 3 * d_ + 1; }
    const RVec &eta() const { return eta_; }

    double omega(int l) const { return eta_(l); }
    double kappa(int l) const { return eta_(d_ + l); }
    double power(int l) const { return eta_(2 * d_ + l); }
    double noise() const { return eta_(3 * d_); }

    static int omega_index(int /*d*/, int l) { return l; }
    static int kappa_index(int d, int l) { return d + l; }
    static int power_index(int d, int l) { return 2 * d + l; }
    static int noise_index(int d) { return 3 * d; }

    /// Copy with coordinate `i` shifted by `delta`. No validation, so finite
    /// difference probes may step p or N_0 slightly.
    ParamVector perturbed(int i, double delta) const;

private:
    int d_;
    RVec eta_;
};

/// exp(j alpha omega m_bar - j alpha kappa m_bar^2), element-wise.
CVec steering_vector(const ArrayConfig &cfg, double omega, double kappa, double alpha);

struct SteeringDerivatives {
    CVec d_omega;
    CVec d_kappa;
};

/// d a / d omega = j alpha m_bar .* a;  d a / d kappa = -j alpha m_bar^2 .* a.
SteeringDerivatives steering_derivatives(const ArrayConfig &cfg, double omega, double kappa,
                                         double alpha);

} // namespace nfcrb
