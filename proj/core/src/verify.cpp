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

#include "nfcrb/verify.hpp"

#include "nfcrb/covariance.hpp"
#include "nfcrb/error.hpp"
#include "nfcrb/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nfcrb {

bool VerifyReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult &c) { return c.passed || !c.gating; });
}

namespace {

constexpr std::uint64_t kDerivativeStreamTag = 0xD1B54A32D192ED03ULL;

// Central-difference step per coordinate kind. Curvature multiplies m_bar^2,
// so its step is an order smaller.
double fd_step(const ParamVector &eta, int i)
{
    return (i >= eta.d() && i < 2 * eta.d()) ? 1e-7 : 1e-6;
}

double derivative_error(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                        double alpha, bool inject_fault)
{
    CovarianceModel model = build_covariance(cfg, c, eta, alpha);
    if (inject_fault) {
        model.dR[0] *= 1.0 + 1e-3;
    }
    double worst = 0.0;
    for (int i = 0; i < eta.size(); ++i) {
        const double h = fd_step(eta, i);
        const CMat Rp = model_covariance(cfg, c, eta.perturbed(i, h), alpha).R;
        const CMat Rm = model_covariance(cfg, c, eta.perturbed(i, -h), alpha).R;
        const CMat fd = (Rp - Rm) / (2.0 * h);
        worst = std::max(worst, relative_frobenius(model.dR[static_cast<std::size_t>(i)], fd));
    }
    return worst;
}

CheckResult make_check(std::string name, double value, double threshold, bool passed,
                       std::string detail = {})
{
    return CheckResult{std::move(name), passed, value, threshold, std::move(detail), true};
}

CheckResult make_diagnostic(std::string name, double value, double threshold, bool passed,
                            std::string detail)
{
    CheckResult c = make_check(std::move(name), value, threshold, passed, std::move(detail));
    c.gating = false;
    return c;
}

std::string beta_detail(const RVec &beta, double bandwidth_hz)
{
    std::ostringstream os;
    os << "beta in [" << beta.minCoeff() << ", " << beta.maxCoeff() << "] at B = " << bandwidth_hz / 1e6
       << " MHz";
    return os.str();
}

} // namespace


CheckResult check_moore_penrose_random(int instances, int n, std::uint64_t seed)
{
    SplitMix64 rng(seed ^ 0x9E3779B97F4A7C15ULL);
    double worst = 0.0;
    for (int t = 0; t < instances; ++t) {
        RMat A(n, n);
        for (Eigen::Index i = 0; i < A.size(); ++i) {
            A.data()[i] = 2.0 * rng.uniform() - 1.0;
        }
        const RMat J = A * A.transpose() + 0.1 * RMat::Identity(n, n);
        const Pseudoinverse pi = fim_pseudoinverse(J);
        worst = std::max({worst, relative_frobenius(RMat(pi.pinv * J * pi.pinv), pi.pinv),
                          relative_frobenius(RMat(J * pi.pinv * J), J)});
    }
    std::ostringstream os;
    os << instances << " random " << n << "x" << n << " PSD matrices";
    return make_check("moore_penrose_random", worst, 1e-8, worst <= 1e-8, os.str());
}

CheckResult check_derivatives(const Scenario &s, int N_RF, std::uint64_t seed, int configs,
                              bool inject_fault)
{
    SplitMix64 rng(seed ^ kDerivativeStreamTag);
    auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

    double worst = 0.0;
    int two_path = 0;
    for (int i = 0; i < configs; ++i) {
        const int M = 8 + static_cast<int>(rng.next() % 57); // 8..64
        const int n_rf = 2 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(std::min(M, 16) - 1));
        const int d = 1 + (i % 2);
        two_path += d == 2 ? 1 : 0;
        const ArrayConfig cfg = ArrayConfig::make(M, uniform(10e9, 100e9));
        std::vector<double> theta, range, power;
        for (int l = 0; l < d; ++l) {
            theta.push_back(uniform(20.0, 160.0) * kPi / 180.0);
            range.push_back(uniform(1.0, 50.0));
            power.push_back(uniform(0.5, 2.0));
        }
        const PathSet paths = PathSet::make(cfg, theta, range, power);
        const ParamVector eta = ParamVector::from_paths(paths, uniform(0.05, 0.5));
        const Combiner c = Combiner::random(M, n_rf, rng.next());
        worst = std::max(worst, derivative_error(cfg, c, eta, uniform(0.985, 1.015), inject_fault));
    }
    // the scenario itself at a band-edge ratio
    const Combiner c = Combiner::random(s.cfg.M, std::min(N_RF, s.cfg.M), seed);
    worst = std::max(worst, derivative_error(s.cfg, c, s.eta(), 1.0 + 400e6 / (2.0 * s.cfg.f_c), inject_fault));

    std::ostringstream os;
    os << configs << " random configurations (" << two_path << " with two paths) plus the scenario";
    return make_check("derivative_finite_difference", worst, 1e-6, worst < 1e-6, os.str());
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two matching points");
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log10(x[i]);
        const double ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MonteCarloResult monte_carlo_convergence(const Scenario &s, const Combiner &c, double alpha,
                                         const std::vector<int> &snapshots, int trials,
                                         std::uint64_t seed)
{
    if (trials < 1) {
        throw std::invalid_argument("monte_carlo_convergence: trials must be >= 1");
    }
    const ParamVector eta = s.eta();
    const CMat R = model_covariance(s.cfg, c, eta, alpha).R;
    const double alphas[] = {alpha};
    MonteCarloResult out;
    out.snapshots = snapshots;
    std::vector<double> xs;
    for (std::size_t j = 0; j < snapshots.size(); ++j) {
        double acc = 0.0;
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t trial_seed =
                SplitMix64(seed + 0x100000000ULL * (j + 1) + static_cast<std::uint64_t>(t)).next();
            const SnapshotSet snaps = generate_snapshots(s.cfg, c, eta, alphas, snapshots[j], trial_seed);
            acc += relative_frobenius(snaps.R_hat.front(), R);
        }
        out.mean_error.push_back(acc / trials);
        xs.push_back(static_cast<double>(snapshots[j]));
    }
    out.slope = loglog_slope(xs, out.mean_error);
    return out;
}

VerifyReport run_verification(const Scenario &s, const VerifyOptions &opts)
{
    VerifyReport rep;
    const Combiner comp = Combiner::random(s.cfg.M, std::min(opts.N_RF, s.cfg.M), opts.seed);
    const Combiner full = Combiner::identity(s.cfg.M);
    const ParamVector eta = s.eta();
    FimOptions fopts;
    fopts.workers = opts.workers;

    rep.checks.push_back(
        check_derivatives(s, opts.N_RF, opts.seed, opts.fd_configs, opts.inject_derivative_fault));

    // Hermitian symmetry and positive definiteness of the model covariance.
    {
        const OfdmGrid grid = s.grid(opts.bandwidth_hz);
        const double lmin_gram = min_eigenvalue(comp.gram());
        double herm = 0.0;
        double margin = std::numeric_limits<double>::infinity();
        for (double alpha : {grid.alpha(1), 1.0, grid.alpha(grid.K)}) {
            const CovarianceModel m = build_covariance(s.cfg, comp, eta, alpha);
            herm = std::max(herm, hermitian_defect(m.R));
            for (const CMat &dR : m.dR) {
                herm = std::max(herm, hermitian_defect(dR));
            }
            margin = std::min(margin, min_eigenvalue(m.R) - (s.N0 * lmin_gram - 1e-10));
        }
        rep.checks.push_back(make_check("covariance_hermitian", herm, 1e-12, herm <= 1e-12));
        rep.checks.push_back(make_check("covariance_positive_definite", margin, 0.0, margin >= 0.0,
                                        "lambda_min(R) - (N0 lambda_min(W^H W) - 1e-10)"));
    }

    // Structured and dense FIM routes, and FIM from finite-difference dR.
    {
        double route = 0.0;
        double fd = 0.0;
        for (double alpha : {1.0, 1.0 + opts.bandwidth_hz / (2.0 * s.cfg.f_c)}) {
            const RMat Jd = fim_at(s.cfg, comp, eta, alpha, s.N, FimRoute::Dense);
            const RMat Js = fim_at(s.cfg, comp, eta, alpha, s.N, FimRoute::Structured);
            route = std::max(route, relative_frobenius(Js, Jd));

            CovarianceModel m = model_covariance(s.cfg, comp, eta, alpha);
            m.dR.clear();
            for (int i = 0; i < eta.size(); ++i) {
                const double h = fd_step(eta, i);
                m.dR.push_back((model_covariance(s.cfg, comp, eta.perturbed(i, h), alpha).R -
                                model_covariance(s.cfg, comp, eta.perturbed(i, -h), alpha).R) /
                               (2.0 * h));
            }
            fd = std::max(fd, relative_frobenius(fim_subcarrier(m, s.N), Jd));
        }
        rep.checks.push_back(make_check("fim_routes_agree", route, 1e-9, route <= 1e-9,
                                        "structured vs dense Slepian-Bangs assembly"));
        rep.checks.push_back(make_check("fim_finite_difference", fd, 1e-5, fd <= 1e-5,
                                        "FIM from finite-difference dR vs analytic"));
    }

    const OperatingPoint op = evaluate_operating_point(s, comp, opts.bandwidth_hz, fopts);
    const FimBundle &b = op.fim;

    {
        const double scale = b.J_WB.norm();
        double sym = 0.0;
        double psd = std::numeric_limits<double>::infinity();
        double lowner = std::numeric_limits<double>::infinity();
        for (const RMat &Jk : b.J_k) {
            sym = std::max(sym, (Jk - Jk.transpose()).norm() / std::max(Jk.norm(), 1e-300));
            psd = std::min(psd, min_eigenvalue(Jk) / std::max(Jk.norm(), 1e-300));
            lowner = std::min(lowner, min_eigenvalue(RMat(b.J_WB - Jk)) / scale);
        }
        rep.checks.push_back(make_check("fim_symmetric", sym, 1e-10, sym <= 1e-10));
        rep.checks.push_back(make_check("fim_psd", psd, -1e-8, psd >= -1e-8,
                                        "min_k lambda_min(J_k) / ||J_k||"));
        rep.checks.push_back(make_check("wideband_dominates_subcarriers", lowner, -1e-8, lowner >= -1e-8,
                                        "min_k lambda_min(J_WB - J_k) / ||J_WB||"));
    }

    rep.checks.push_back(check_moore_penrose_random(20, 3 * s.paths.d() + 1, opts.seed));

    {
        // At the operating point the identities hold for the rank-r part of
        // J_WB; the discarded part is bounded by the threshold.
        const Pseudoinverse &pi = b.wb;
        const RMat &P = pi.pinv;
        const RMat &J = b.J_WB;
        RVec kept = pi.eigvals;
        for (Eigen::Index i = 0; i < kept.size(); ++i) {
            if (!(kept(i) > pi.eps_sv)) {
                kept(i) = 0.0;
            }
        }
        const RMat Jr = pi.eigvecs * kept.asDiagonal() * pi.eigvecs.transpose();
        const double e1 = relative_frobenius(RMat(P * J * P), P);
        const double e2 = relative_frobenius(RMat(J * P * J), Jr);
        const double dropped = (J - Jr).norm() / J.norm();
        const double bound = kPinvRelativeTolerance * std::sqrt(static_cast<double>(J.rows()));
        const double e = std::max(e1, e2);
        std::ostringstream os;
        os << "numerical rank " << pi.rank << " of " << J.rows() << ", discarded spectrum "
           << dropped << " of ||J_WB||";
        rep.checks.push_back(make_check("moore_penrose_operating_point", e, 1e-8,
                                        e <= 1e-8 && dropped <= bound, os.str()));
    }

    {
        const auto &nb = op.narrowband.paths.front();
        const auto &wb = op.wideband.paths.front();
        const auto &g = op.decomposition.paths.front();
        const double direct = to_db(nb.range_var / wb.range_var);
        const double direct_t = to_db(nb.theta_var / wb.theta_var);
        const double err = std::max(std::abs(g.total_r_db - direct), std::abs(g.total_theta_db - direct_t));
        rep.checks.push_back(make_check("decomposition_additive", err, 1e-9, err <= 1e-9,
                                        "|delta_dd + delta_gd - 10 log10(CRB_NB / CRB_WB)| in dB"));
        const double ratio = std::max(wb.range_var / nb.range_var, wb.theta_var / nb.theta_var);
        rep.checks.push_back(make_check("wideband_below_narrowband", ratio, 1.0 + 1e-9, ratio <= 1.0 + 1e-9,
                                        "max CRB_WB / CRB_NB"));
    }

    {
        const FimBundle fb = fim_wideband(s.cfg, s.grid(opts.bandwidth_hz), full, eta, s.N, fopts);
        const double lmin = min_eigenvalue(RMat(fb.J_WB - b.J_WB)) / fb.J_WB.norm();
        rep.checks.push_back(make_check("full_array_dominates_compressed", lmin, -1e-8, lmin >= -1e-8,
                                        "lambda_min(J_full - J_comp) / ||J_full||"));
        const CrbReport fr = propagate_crb(fb.wb.pinv, s.paths, s.cfg, CrbVariant::FullArray);
        const auto &cp = op.wideband.paths.front();
        const auto &fp = fr.paths.front();
        const double ratio = std::min(cp.range_var / fp.range_var, cp.theta_var / fp.theta_var);
        rep.checks.push_back(make_check("compressed_above_full_array", ratio, 1.0, ratio >= 1.0 - 1e-9,
                                        "min CRB_comp / CRB_full"));
    }

    {
        const OperatingPoint nb = evaluate_on_grid(s, comp, narrowband_grid(s.cfg.f_c, s.delta_f), fopts);
        const auto &w = nb.wideband.paths.front();
        const auto &n = nb.narrowband.paths.front();
        const double err = std::max({std::abs(w.range_var / n.range_var - 1.0),
                                     std::abs(w.theta_var / n.theta_var - 1.0),
                                     std::abs(nb.decomposition.delta_dd_db),
                                     std::abs(nb.decomposition.paths.front().gd_r_db)});
        rep.checks.push_back(make_check("narrowband_reduction", err, 1e-12, err <= 1e-12,
                                        "single subcarrier at alpha = 1"));
    }

    {
        Scenario far = s;
        far.paths = PathSet::single(s.cfg, s.paths.theta(0), std::numeric_limits<double>::infinity(), s.paths.p(0));
        bool ok = false;
        std::string detail;
        try {
            const OperatingPoint op_far = evaluate_on_grid(far, comp, narrowband_grid(s.cfg.f_c, s.delta_f), fopts);
            ok = op_far.wideband.paths.front().range_infinite &&
                 std::isinf(op_far.wideband.paths.front().range_var);
            detail = "range CRB reported as +inf";
        } catch (const std::exception &e) {
            detail = e.what();
        }
        rep.checks.push_back(make_check("far_field_range_sentinel", ok ? 1.0 : 0.0, 1.0, ok, detail));
    }

    {
        // With W = I every J_k shares the narrowband eigenstructure up to a
        // scale close to one. A random combiner breaks this: the compressed
        // gain |W^H a(alpha)|^2 itself varies with alpha, so the compressed
        // range is reported without gating.
        const OperatingPoint op_full = evaluate_operating_point(s, full, opts.beta_bandwidth_hz, fopts);
        const RVec beta = beta_diagnostic(op_full.fim);
        const double excess = std::max(0.7 - beta.minCoeff(), beta.maxCoeff() - 1.3);
        rep.checks.push_back(make_check("beta_range_full_array", excess, 0.0, excess <= 0.0,
                                        beta_detail(beta, opts.beta_bandwidth_hz)));
        const OperatingPoint op_comp = evaluate_operating_point(s, comp, opts.beta_bandwidth_hz, fopts);
        const RVec bc = beta_diagnostic(op_comp.fim);
        const double ec = std::max(0.7 - bc.minCoeff(), bc.maxCoeff() - 1.3);
        rep.checks.push_back(make_diagnostic("beta_range_compressed", ec, 0.0, ec <= 0.0,
                                             beta_detail(bc, opts.beta_bandwidth_hz)));
    }

    {
        const CovarianceModel m = model_covariance(s.cfg, comp, eta, 1.0);
        const double kl = kl_objective(m, m.R);
        const double expect = CovarianceFactor(m.R).log_det() + comp.n_rf();
        const double err = std::abs(kl - expect);
        rep.checks.push_back(make_check("kl_at_model", err, 1e-9, err <= 1e-9, "|L(R, R) - (log det R + N_RF)|"));
    }

    {
        const MonteCarloResult mc =
            monte_carlo_convergence(s, comp, 1.0, opts.mc_snapshots, opts.mc_trials, opts.seed);
        const double dev = std::abs(mc.slope + 0.5);
        std::ostringstream os;
        os << "log-log slope " << mc.slope << " over " << opts.mc_trials << " trials";
        rep.checks.push_back(make_check("sample_covariance_slope", mc.slope, -0.5, dev <= 0.1, os.str()));
    }

    return rep;
}

} // namespace nfcrb
