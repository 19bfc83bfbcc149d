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

#include "nfcrb/experiment.hpp"

#include "nfcrb/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nfcrb {

OfdmGrid Scenario::grid(double bandwidth_hz) const
{
    return build_grid(cfg.f_c, delta_f, bandwidth_hz, Ks_max);
}

std::uint64_t Scenario::fingerprint(const Combiner &c) const
{
    std::uint64_t h = c.fingerprint();
    auto mix = [&h](std::uint64_t v) { h = SplitMix64(h ^ v).next(); };
    mix(static_cast<std::uint64_t>(cfg.M));
    mix(std::bit_cast<std::uint64_t>(cfg.f_c));
    mix(std::bit_cast<std::uint64_t>(N0));
    mix(static_cast<std::uint64_t>(N));
    for (Eigen::Index l = 0; l < paths.theta.size(); ++l) {
        mix(std::bit_cast<std::uint64_t>(paths.theta(l)));
        mix(std::bit_cast<std::uint64_t>(paths.r(l)));
        mix(std::bit_cast<std::uint64_t>(paths.p(l)));
    }
    return h;
}

double noise_from_snr(double snr_db, double p1)
{
    return p1 / std::pow(10.0, snr_db / 10.0);
}

Scenario default_scenario(double range_m, double theta_deg)
{
    Scenario s{ArrayConfig::make(256, 28e9), {}, noise_from_snr(10.0), 64, 120e3, 512};
    s.paths = PathSet::single(s.cfg, theta_deg * kPi / 180.0, range_m, 1.0);
    return s;
}

OperatingPoint evaluate_on_grid(const Scenario &s, const Combiner &c, const OfdmGrid &grid,
                                const FimOptions &opts)
{
    OperatingPoint op;
    op.bandwidth_hz = grid.B_eff;
    op.K = grid.K;
    op.Ks = grid.Ks();
    op.B_eff_hz = grid.B_eff;
    op.fim = fim_wideband(s.cfg, grid, c, s.eta(), s.N, opts);

    const std::uint64_t fp = s.fingerprint(c);
    const bool full = c.kind() == CombinerKind::Identity;
    op.wideband = propagate_crb(op.fim.wb.pinv, s.paths, s.cfg,
                                full ? CrbVariant::FullArray : CrbVariant::Wideband, fp);
    op.wideband.Ks = op.Ks;
    op.narrowband = propagate_crb(fim_pseudoinverse(op.fim.J_NB).pinv, s.paths, s.cfg,
                                  CrbVariant::Narrowband, fp);
    op.decomposition = decompose(op.narrowband, op.wideband, op.Ks);
    op.gd_scalar_bound_db = gd_scalar_bound(grid.B_eff, s.cfg.f_c);
    return op;
}

OperatingPoint evaluate_operating_point(const Scenario &s, const Combiner &c, double bandwidth_hz,
                                        const FimOptions &opts)
{
    OperatingPoint op = evaluate_on_grid(s, c, s.grid(bandwidth_hz), opts);
    op.bandwidth_hz = bandwidth_hz;
    return op;
}

CrbReport full_array_wideband(const Scenario &s, double bandwidth_hz, const FimOptions &opts)
{
    const Combiner full = Combiner::identity(s.cfg.M);
    const OfdmGrid grid = s.grid(bandwidth_hz);
    const FimBundle fim = fim_wideband(s.cfg, grid, full, s.eta(), s.N, opts);
    CrbReport rep = propagate_crb(fim.wb.pinv, s.paths, s.cfg, CrbVariant::FullArray, s.fingerprint(full));
    rep.Ks = grid.Ks();
    return rep;
}

SeedStats seed_stats(std::span<const double> values)
{
    if (values.empty()) {
        throw std::invalid_argument("seed_stats: no values");
    }
    SeedStats st;
    st.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    st.min = *lo;
    st.max = *hi;
    return st;
}

std::vector<std::uint64_t> seed_sequence(std::uint64_t first, int count)
{
    if (count < 1) {
        throw std::invalid_argument("seed_sequence: count must be >= 1");
    }
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(first + static_cast<std::uint64_t>(i));
    }
    return out;
}

std::vector<double> log_space(double lo, double hi, int points)
{
    if (!(lo > 0.0) || !(hi >= lo) || points < 1) {
        throw std::invalid_argument("log_space: need 0 < lo <= hi and points >= 1");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < points; ++i) {
        out.push_back(std::pow(10.0, a + (b - a) * i / (points - 1)));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace nfcrb
