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
#include "nfcrb/crb.hpp"
#include "nfcrb/fim.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace nfcrb {

/// Everything about an evaluation except the bandwidth and the combiner.
struct Scenario {
    ArrayConfig cfg;
    PathSet paths;
    double N0 = 0.1;
    int N = 64;
    double delta_f = 120e3;
    int Ks_max = 512;

    ParamVector eta() const { return ParamVector::from_paths(paths, N0); }
    OfdmGrid grid(double bandwidth_hz) const;
    std::uint64_t fingerprint(const Combiner &c) const;
};

/// N_0 = p_1 / 10^(snr_db / 10).
double noise_from_snr(double snr_db, double p1 = 1.0);

/// M = 256, f_c = 28 GHz, delta_f = 120 kHz, one unit-power path at 40 deg,
/// SNR 10 dB, N = 64, Ks_max = 512.
Scenario default_scenario(double range_m = 5.0, double theta_deg = 40.0);

struct OperatingPoint {
    double bandwidth_hz = 0.0;
    int K = 0;
    int Ks = 0;
    double B_eff_hz = 0.0;
    CrbReport wideband;
    CrbReport narrowband;
    Decomposition decomposition;
    double gd_scalar_bound_db = 0.0;
    FimBundle fim;
};

/// Wideband and narrowband bounds plus their decomposition at one bandwidth.
OperatingPoint evaluate_operating_point(const Scenario &s, const Combiner &c, double bandwidth_hz,
                                        const FimOptions &opts = {});

/// Wideband bound with W = I (labelled FullArray).
CrbReport full_array_wideband(const Scenario &s, double bandwidth_hz, const FimOptions &opts = {});

/// Evaluation on an explicit grid (e.g. a narrowband single-subcarrier grid).
OperatingPoint evaluate_on_grid(const Scenario &s, const Combiner &c, const OfdmGrid &grid,
                                const FimOptions &opts = {});

struct SeedStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

SeedStats seed_stats(std::span<const double> values);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }

/// seed, seed+1, ..., seed+count-1
std::vector<std::uint64_t> seed_sequence(std::uint64_t first, int count);

std::vector<double> log_space(double lo, double hi, int points);

} // namespace nfcrb
