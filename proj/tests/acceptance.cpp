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

// Acceptance criteria 1-9. Prints one "criterion N: PASS|FAIL" line per
// criterion followed by indented measurements, and exits non-zero if any of
// the requested criteria fails.
//
//   acceptance               all criteria
//   acceptance --criterion 4 one criterion

#include "nfcrb/covariance.hpp"
#include "nfcrb/experiment.hpp"
#include "nfcrb/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

using namespace nfcrb;

namespace {

constexpr int kSeeds = 10;
constexpr double kMHz = 1e6;

struct Report {
    bool ok = true;
    std::vector<std::string> lines;

    void note(const char *fmt, ...) __attribute__((format(printf, 2, 3)))
    {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        lines.emplace_back(buf);
    }

    // Records a sub-check and folds it into the verdict.
    void expect(bool pass, const char *fmt, ...) __attribute__((format(printf, 3, 4)))
    {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        lines.emplace_back(std::string(pass ? "ok   " : "MISS ") + buf);
        ok = ok && pass;
    }
};

std::vector<Combiner> combiners(int M, int n_rf)
{
    std::vector<Combiner> out;
    for (std::uint64_t seed : seed_sequence(1, kSeeds)) {
        out.push_back(Combiner::random(M, n_rf, seed));
    }
    return out;
}

double mean(const std::vector<double> &v)
{
    return seed_stats(v).mean;
}

// Seed average of standard deviations in the dB domain.
double db_mean_std(const std::vector<double> &stds)
{
    double acc = 0.0;
    for (double s : stds) {
        acc += 20.0 * std::log10(s);
    }
    return std::pow(10.0, acc / static_cast<double>(stds.size()) / 20.0);
}

std::vector<OperatingPoint> seed_points(const Scenario &s, double B, int n_rf = 16)
{
    std::vector<OperatingPoint> out;
    for (const Combiner &c : combiners(s.cfg.M, n_rf)) {
        out.push_back(evaluate_operating_point(s, c, B));
    }
    return out;
}

void criterion_1(Report &r)
{
    const Scenario s = default_scenario();
    const OperatingPoint op = evaluate_operating_point(s, Combiner::random(256, 16, 1), 400e6);
    const double oracle = 27.0926996097583076;
    const double dd = op.decomposition.delta_dd_db;
    r.note("K = %d, Ks = %d, delta_dd = %.12f dB", op.K, op.Ks, dd);
    r.expect(op.Ks == 512, "Ks = 512");
    r.expect(std::abs(dd - 27.0927) <= 1e-6, "|delta_dd - 27.0927| = %.3e <= 1e-6", std::abs(dd - 27.0927));
    r.expect(std::abs(dd - oracle) <= 1e-12, "|delta_dd - 10 log10 512| = %.3e", std::abs(dd - oracle));
}

void criterion_2(Report &r)
{
    const Scenario s = default_scenario();
    const double Bs[] = {100e6, 400e6, 800e6};
    const double target[] = {0.08, 0.70, 0.93};
    for (int b = 0; b < 3; ++b) {
        std::vector<double> gd;
        for (const OperatingPoint &op : seed_points(s, Bs[b])) {
            gd.push_back(op.decomposition.paths[0].gd_r_db);
        }
        const SeedStats st = seed_stats(gd);
        const OperatingPoint full_op = evaluate_operating_point(s, Combiner::identity(256), Bs[b]);
        r.expect(std::abs(st.mean - target[b]) <= 0.15,
                 "B = %4.0f MHz: delta_gd(r) seed mean %.4f dB [%.4f, %.4f], target %.2f +- 0.15",
                 Bs[b] / kMHz, st.mean, st.min, st.max, target[b]);
        r.note("       full array (W = I): delta_gd(r) = %.4f dB", full_op.decomposition.paths[0].gd_r_db);
    }
}

void criterion_3(Report &r)
{
    const Scenario s = default_scenario();
    const auto pts = seed_points(s, 400e6);
    std::vector<double> nb, wb;
    double worst_chain = 0.0;
    for (const OperatingPoint &op : pts) {
        const double n = op.narrowband.paths[0].range_std_m;
        nb.push_back(n);
        wb.push_back(op.wideband.paths[0].range_std_m);
        const double dd = op.decomposition.dd.paths[0].range_std_m;
        worst_chain = std::max(worst_chain, std::abs(dd - n / std::sqrt(512.0)) / (n / std::sqrt(512.0)));
    }
    const double nb_mean = db_mean_std(nb);
    const double wb_mean = db_mean_std(wb);
    const double nb_db = 20.0 * std::log10(nb_mean / 11.948e-3);
    const double wb_db = 20.0 * std::log10(wb_mean / 487.12e-6);
    r.expect(std::abs(nb_db) <= 1.5, "sqrt CRB_r NB seed mean %.4f mm vs 11.948 mm: %+.3f dB (+-1.5)",
             nb_mean * 1e3, nb_db);
    r.expect(std::abs(wb_db) <= 1.5, "sqrt CRB_r WB seed mean %.2f um vs 487.12 um: %+.3f dB (+-1.5)",
             wb_mean * 1e6, wb_db);
    r.note("     linear means: NB %.4f mm, WB %.2f um", mean(nb) * 1e3, mean(wb) * 1e6);
    r.expect(worst_chain <= 1e-9, "DD chain sqrt CRB_DD = sqrt CRB_NB / sqrt 512: worst rel. error %.3e",
             worst_chain);
}

void criterion_4(Report &r)
{
    const Scenario s = default_scenario();
    const auto ranges = log_space(1.0, 100.0, 60);
    const double Bs[] = {100e6, 400e6, 800e6};
    const double target[] = {0.64, 1.77, 1.94};
    for (int b = 0; b < 3; ++b) {
        const OfdmGrid g = s.grid(Bs[b]);
        std::vector<double> alphas = g.selected_alphas();
        if (std::find(alphas.begin(), alphas.end(), 1.0) == alphas.end()) {
            alphas.push_back(1.0);
        }
        std::vector<double> edge, grid_max;
        for (const Combiner &c : combiners(256, 16)) {
            const MismatchGrid m = mismatch_grid(s.cfg, c, s.paths.theta(0), s.N0, 1.0, alphas, ranges);
            edge.push_back(m.edge_max());
            grid_max.push_back(m.max_delta);
        }
        const MismatchGrid full =
            mismatch_grid(s.cfg, Combiner::identity(256), s.paths.theta(0), s.N0, 1.0, alphas, ranges);
        r.expect(std::abs(grid_max.front() - target[b]) <= 0.10,
                 "B = %4.0f MHz: max over the (alpha, r) grid (seed 1) %.1f%%, target %.0f%% +- 10 pp",
                 Bs[b] / kMHz, 100 * grid_max.front(), 100 * target[b]);
        const SeedStats st = seed_stats(grid_max);
        r.note("       whole grid, seeds 1-%d: mean %.1f%% [%.1f%%, %.1f%%]; full array %.1f%%", kSeeds,
               100 * st.mean, 100 * st.min, 100 * st.max, 100 * full.max_delta);
        r.note("       band edge only: seed 1 %.1f%%, seed mean %.1f%%; full array %.1f%%", 100 * edge.front(),
               100 * mean(edge), 100 * full.edge_max());
    }
}

void criterion_5(Report &r)
{
    const Scenario s = default_scenario();
    const CrbReport full = full_array_wideband(s, 400e6);
    const int nrf[] = {4, 8, 16, 32, 64};
    std::vector<double> gaps;
    for (int n : nrf) {
        std::vector<double> g;
        for (const OperatingPoint &op : seed_points(s, 400e6, n)) {
            g.push_back(compression_gap(op.wideband, full)[0].r_db);
        }
        gaps.push_back(mean(g));
        r.note("N_RF = %2d: gap(r) seed mean %.3f dB [%.3f, %.3f]", n, mean(g), seed_stats(g).min,
               seed_stats(g).max);
    }
    r.expect(std::abs(gaps[2] - 12.6) <= 1.5, "gap(16) = %.3f dB, target 12.6 +- 1.5", gaps[2]);
    r.expect(std::abs(gaps[3] - 9.4) <= 1.5, "gap(32) = %.3f dB, target 9.4 +- 1.5", gaps[3]);
    bool mono = true;
    for (std::size_t i = 1; i < gaps.size(); ++i) {
        mono = mono && gaps[i] <= gaps[i - 1];
    }
    r.expect(mono, "gap non-increasing over N_RF = 4, 8, 16, 32, 64");
}

void criterion_6(Report &r)
{
    const CheckResult c = check_derivatives(default_scenario(), 16, 1, 24, false);
    r.expect(c.passed && c.value < 1e-6, "max relative Frobenius error %.3e < 1e-6 (%s)", c.value,
             c.detail.c_str());
}

void criterion_7(Report &r)
{
    const Scenario s = default_scenario();
    const auto Bs = log_space(50e6, 800e6, 16);
    double worst_loewner = std::numeric_limits<double>::infinity();
    double worst_wb_nb = -std::numeric_limits<double>::infinity();
    double worst_comp_full = std::numeric_limits<double>::infinity();
    double worst_add = 0.0;
    double worst_gd_theta = 0.0, worst_gd_theta_B = 0.0;
    double worst_seed1 = 0.0, worst_full = 0.0;
    for (double B : Bs) {
        const auto pts = seed_points(s, B);
        const CrbReport full = full_array_wideband(s, B);
        std::vector<double> gd_theta;
        for (const OperatingPoint &op : pts) {
            const double scale = op.fim.J_WB.norm();
            for (const RMat &Jk : op.fim.J_k) {
                worst_loewner = std::min(worst_loewner, min_eigenvalue(RMat(op.fim.J_WB - Jk)) / scale);
            }
            const PathCrb &wb = op.wideband.paths[0];
            const PathCrb &nb = op.narrowband.paths[0];
            const PathCrb &fa = full.paths[0];
            for (auto [w, n] : {std::pair{wb.theta_var, nb.theta_var}, std::pair{wb.range_var, nb.range_var},
                                std::pair{wb.omega_var, nb.omega_var}, std::pair{wb.kappa_var, nb.kappa_var}}) {
                worst_wb_nb = std::max(worst_wb_nb, w / n);
            }
            for (auto [c, f] : {std::pair{wb.theta_var, fa.theta_var}, std::pair{wb.range_var, fa.range_var}}) {
                worst_comp_full = std::min(worst_comp_full, c / f);
            }
            const PathGains &g = op.decomposition.paths[0];
            const double total_r = to_db(nb.range_var / wb.range_var);
            const double total_t = to_db(nb.theta_var / wb.theta_var);
            worst_add = std::max({worst_add, std::abs(total_r - (op.decomposition.delta_dd_db + g.gd_r_db)),
                                  std::abs(total_t - (op.decomposition.delta_dd_db + g.gd_theta_db)),
                                  std::abs(g.total_r_db - (op.decomposition.delta_dd_db + g.gd_r_db))});
            gd_theta.push_back(g.gd_theta_db);
        }
        const double m = mean(gd_theta);
        if (std::abs(m) > std::abs(worst_gd_theta)) {
            worst_gd_theta = m;
            worst_gd_theta_B = B;
        }
        worst_seed1 = std::max(worst_seed1, std::abs(gd_theta.front()));
        const OperatingPoint fop = evaluate_operating_point(s, Combiner::identity(256), B);
        worst_full = std::max(worst_full, std::abs(fop.decomposition.paths[0].gd_theta_db));
    }
    r.expect(worst_loewner >= -1e-8, "J_WB - J_k: min eigenvalue / ||J_WB|| = %.3e >= -1e-8", worst_loewner);
    r.expect(worst_wb_nb <= 1.0, "wideband / narrowband variance ratio max %.3e <= 1", worst_wb_nb);
    r.expect(worst_comp_full >= 1.0, "compressed / full-array variance ratio min %.4f >= 1", worst_comp_full);
    r.expect(worst_add <= 1e-9, "delta_total - (delta_dd + delta_gd): max %.3e dB <= 1e-9", worst_add);
    r.expect(std::abs(worst_gd_theta) < 0.1,
             "|delta_gd(theta)| seed mean over 50-800 MHz: max %.4f dB at %.0f MHz, bound 0.1",
             std::abs(worst_gd_theta), worst_gd_theta_B / kMHz);
    r.note("     seed 1 alone: max %.4f dB; full array (W = I): max %.4f dB", worst_seed1, worst_full);
}

void criterion_8(Report &r)
{
    const Scenario s = default_scenario();
    const Combiner c = Combiner::random(256, 16, 1);
    const MonteCarloResult mc = monte_carlo_convergence(s, c, 1.0, {64, 256, 1024, 4096}, 20, 1);
    for (std::size_t i = 0; i < mc.snapshots.size(); ++i) {
        r.note("N = %4d: mean relative error %.5f", mc.snapshots[i], mc.mean_error[i]);
    }
    r.expect(std::abs(mc.slope + 0.5) <= 0.1, "log-log slope %.4f, target -0.5 +- 0.1", mc.slope);

    const CovarianceModel m = model_covariance(s.cfg, c, s.eta(), 1.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(m.R, Eigen::EigenvaluesOnly);
    const double logdet = es.eigenvalues().array().log().sum();
    const double kl = kl_objective(m, m.R);
    const double err = std::abs(kl - (logdet + c.n_rf()));
    r.expect(err <= 1e-9, "kl_objective(R, R) - (log det R + N_RF) = %.3e", err);
}

void criterion_9(Report &r)
{
    const Scenario s = default_scenario();
    const Combiner c = Combiner::random(256, 16, 1);
    const OperatingPoint op = evaluate_on_grid(s, c, narrowband_grid(s.cfg.f_c, s.delta_f));
    const PathCrb &wb = op.wideband.paths[0];
    const PathCrb &nb = op.narrowband.paths[0];
    const double gain = op.decomposition.paths[0].total_r_db;
    r.expect(op.Ks == 1 && wb.range_var == nb.range_var && wb.theta_var == nb.theta_var && gain == 0.0,
             "single subcarrier at alpha = 1: CRB_WB == CRB_NB, total gain %.1f dB", gain);

    Scenario far = s;
    far.paths = PathSet::single(s.cfg, s.paths.theta(0), std::numeric_limits<double>::infinity());
    const OperatingPoint fo = evaluate_operating_point(far, c, 400e6);
    const PathCrb &fp = fo.wideband.paths[0];
    r.expect(fp.range_infinite && std::isinf(fp.range_var) && std::isfinite(fp.theta_var),
             "kappa = 0: range CRB = %g, flag %d, angle CRB finite (%.3e deg)", fp.range_var,
             fp.range_infinite ? 1 : 0, fp.theta_std_deg);
}

const std::vector<std::function<void(Report &)>> kCriteria = {
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9,
};

bool run(int n)
{
    Report r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        kCriteria[static_cast<std::size_t>(n - 1)](r);
    } catch (const std::exception &e) {
        r.expect(false, "exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s (%.2f s)\n", n, r.ok ? "PASS" : "FAIL", secs);
    for (const std::string &l : r.lines) {
        std::printf("    %s\n", l.c_str());
    }
    std::fflush(stdout);
    return r.ok;
}

} // namespace

int main(int argc, char **argv)
{
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            which.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]...\n");
            return 2;
        }
    }
    if (which.empty()) {
        for (int n = 1; n <= 9; ++n) {
            which.push_back(n);
        }
    }
    bool ok = true;
    for (int n : which) {
        if (n < 1 || n > 9) {
            std::fprintf(stderr, "unknown criterion %d\n", n);
            return 2;
        }
        ok = run(n) && ok;
    }
    return ok ? 0 : 1;
}
