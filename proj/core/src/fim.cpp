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

#include "nfcrb/fim.hpp"

#include "nfcrb/error.hpp"
#include "nfcrb/parallel.hpp"
#include "nfcrb/rng.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace nfcrb {

RMat fim_subcarrier(const CovarianceModel &model, int N)
{
    if (!model.has_derivatives()) {
        throw InvalidStateError("fim_subcarrier: covariance derivatives have not been computed");
    }
    if (N < 1) {
        throw std::invalid_argument("fim_subcarrier: N must be >= 1");
    }
    const CovarianceFactor factor(model.R, model.subcarrier);
    const auto P = static_cast<Eigen::Index>(model.dR.size());
    std::vector<CMat> X;
    X.reserve(model.dR.size());
    for (const CMat &dR : model.dR) {
        X.push_back(factor.solve(dR));
    }
    RMat J(P, P);
    for (Eigen::Index i = 0; i < P; ++i) {
        for (Eigen::Index j = i; j < P; ++j) {
            const auto &Xi = X[static_cast<std::size_t>(i)];
            const auto &Xj = X[static_cast<std::size_t>(j)];
            // tr(Xi Xj) = sum_ab Xi(a,b) Xj(b,a)
            const double v = N * Xi.cwiseProduct(Xj.transpose()).sum().real();
            J(i, j) = v;
            J(j, i) = v;
        }
    }
    return 0.5 * (J + J.transpose());
}

namespace {

// coef * u_a u_b^H, with u the columns of the stacked compressed vectors.
struct RankOne {
    double coef;
    int a;
    int b;
};

std::vector<std::vector<RankOne>> derivative_terms(const ParamVector &eta)
{
    const int d = eta.d();
    std::vector<std::vector<RankOne>> terms(static_cast<std::size_t>(eta.size()));
    for (int l = 0; l < d; ++l) {
        const double p = eta.power(l);
        const int col_d = l;
        const int col_w = d + l;
        const int col_k = 2 * d + l;
        terms[static_cast<std::size_t>(ParamVector::omega_index(d, l))] = {{p, col_w, col_d}, {p, col_d, col_w}};
        terms[static_cast<std::size_t>(ParamVector::kappa_index(d, l))] = {{p, col_k, col_d}, {p, col_d, col_k}};
        terms[static_cast<std::size_t>(ParamVector::power_index(d, l))] = {{1.0, col_d, col_d}};
    }
    // noise entry: empty term list, handled as the W^H W derivative
    return terms;
}

} // namespace

RMat fim_subcarrier_structured(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta,
                               double alpha, int N, int subcarrier)
{
    if (c.M() != cfg.M) {
        throw std::invalid_argument("fim_subcarrier_structured: combiner does not match array");
    }
    if (N < 1) {
        throw std::invalid_argument("fim_subcarrier_structured: N must be >= 1");
    }
    if (!(eta.noise() > 0.0)) {
        throw std::invalid_argument("fim_subcarrier_structured: N_0 must be positive");
    }
    const int d = eta.d();
    const int n = c.n_rf();
    const double N0 = eta.noise();

    CMat A(cfg.M, 3 * d);
    for (int l = 0; l < d; ++l) {
        const auto da = steering_derivatives(cfg, eta.omega(l), eta.kappa(l), alpha);
        A.col(l) = steering_vector(cfg, eta.omega(l), eta.kappa(l), alpha);
        A.col(d + l) = da.d_omega;
        A.col(2 * d + l) = da.d_kappa;
    }
    const CMat U = c.compress(A);

    CMat Z;         // R^{-1} U
    CMat H;         // Z^H G Z
    double tr_gg;   // tr((R^{-1} G)^2)
    if (c.kind() == CombinerKind::Identity) {
        // R = N0 I + D P D^H  =>  R^{-1} = (I - D T D^H) / N0,  T = P (N0 I + D^H D P)^{-1}
        const CMat D = U.leftCols(d);
        const CMat DhD = D.adjoint() * D;
        const RVec p = eta.eta().segment(2 * d, d);
        const CMat S = N0 * CMat::Identity(d, d) + DhD * p.asDiagonal();
        const CMat T = p.asDiagonal() * S.partialPivLu().solve(CMat::Identity(d, d));
        Z = (U - D * (T * (D.adjoint() * U))) / N0;
        H = Z.adjoint() * Z;
        const CMat F = T * DhD;
        tr_gg = (static_cast<double>(n) - 2.0 * F.trace().real() + (F * F).trace().real()) / (N0 * N0);
    } else {
        CMat R = N0 * c.gram();
        for (int l = 0; l < d; ++l) {
            R.noalias() += eta.power(l) * U.col(l) * U.col(l).adjoint();
        }
        const CovarianceFactor factor(R, subcarrier);
        Z = factor.solve(U);
        H = Z.adjoint() * (c.gram() * Z);
        const CMat Y = factor.solve(c.gram());
        tr_gg = Y.cwiseProduct(Y.transpose()).sum().real();
    }
    const CMat Q = U.adjoint() * Z;

    const auto terms = derivative_terms(eta);
    const int P = eta.size();
    const int noise = ParamVector::noise_index(d);
    RMat J(P, P);
    for (int i = 0; i < P; ++i) {
        for (int j = i; j < P; ++j) {
            cdouble acc(0.0, 0.0);
            const auto &ti = terms[static_cast<std::size_t>(i)];
            const auto &tj = terms[static_cast<std::size_t>(j)];
            if (i == noise && j == noise) {
                acc = tr_gg;
            } else if (j == noise) {
                for (const auto &t : ti) {
                    acc += t.coef * H(t.b, t.a);
                }
            } else {
                // tr(R^-1 u_a u_b^H R^-1 u_c u_e^H) = Q(b,c) Q(e,a)
                for (const auto &t : ti) {
                    for (const auto &s : tj) {
                        acc += t.coef * s.coef * Q(t.b, s.a) * Q(s.b, t.a);
                    }
                }
            }
            J(i, j) = N * acc.real();
            J(j, i) = J(i, j);
        }
    }
    return J;
}

RMat fim_at(const ArrayConfig &cfg, const Combiner &c, const ParamVector &eta, double alpha, int N,
            FimRoute route, int subcarrier)
{
    if (route == FimRoute::Dense) {
        return fim_subcarrier(build_covariance(cfg, c, eta, alpha, subcarrier), N);
    }
    return fim_subcarrier_structured(cfg, c, eta, alpha, N, subcarrier);
}

Pseudoinverse fim_pseudoinverse(const RMat &J)
{
    if (J.rows() != J.cols()) {
        throw std::invalid_argument("fim_pseudoinverse: matrix must be square");
    }
    Pseudoinverse out;
    const RMat sym = 0.5 * (J + J.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(sym);
    if (es.info() != Eigen::Success) {
        throw NumericalError("fim_pseudoinverse: eigendecomposition failed");
    }
    out.eigvals = es.eigenvalues().cwiseMax(0.0);
    out.eigvecs = es.eigenvectors();
    const double smax = out.eigvals.size() > 0 ? out.eigvals.maxCoeff() : 0.0;
    out.eps_sv = kPinvRelativeTolerance * smax;
    RVec inv = RVec::Zero(out.eigvals.size());
    for (Eigen::Index i = 0; i < out.eigvals.size(); ++i) {
        if (smax > 0.0 && out.eigvals(i) > out.eps_sv) {
            inv(i) = 1.0 / out.eigvals(i);
            ++out.rank;
        }
    }
    out.pinv = out.eigvecs * inv.asDiagonal() * out.eigvecs.transpose();
    out.pinv = (0.5 * (out.pinv + out.pinv.transpose())).eval();
    return out;
}

std::size_t FimCache::hits() const
{
    std::lock_guard lock(mutex_);
    return hits_;
}

std::size_t FimCache::misses() const
{
    std::lock_guard lock(mutex_);
    return misses_;
}

std::size_t FimCache::size() const
{
    std::lock_guard lock(mutex_);
    return entries_.size();
}

FimCache::Key FimCache::make_key(double alpha, const ParamVector &eta, const Combiner &c,
                                 const ArrayConfig &cfg, int N)
{
    std::uint64_t h = static_cast<std::uint64_t>(eta.d());
    for (Eigen::Index i = 0; i < eta.eta().size(); ++i) {
        h = SplitMix64(h ^ std::bit_cast<std::uint64_t>(eta.eta()(i))).next();
    }
    const std::uint64_t array_key =
        SplitMix64(static_cast<std::uint64_t>(cfg.M) ^ std::bit_cast<std::uint64_t>(cfg.f_c)).next();
    return {std::bit_cast<std::uint64_t>(alpha), h, c.fingerprint(), array_key, N};
}

FimBundle fim_wideband(const ArrayConfig &cfg, const OfdmGrid &grid, const Combiner &c,
                       const ParamVector &eta, int N, const FimOptions &opts)
{
    if (grid.selected.empty()) {
        throw std::invalid_argument("fim_wideband: grid has no selected subcarriers");
    }
    FimBundle b;
    b.N = N;
    b.subcarriers = grid.selected;
    b.alphas = grid.selected_alphas();
    b.J_k.resize(b.alphas.size());

    auto eval = [&](double alpha, int subcarrier) {
        auto compute = [&] { return fim_at(cfg, c, eta, alpha, N, opts.route, subcarrier); };
        if (opts.cache != nullptr) {
            return opts.cache->get_or_compute(alpha, eta, c, cfg, N, compute);
        }
        return compute();
    };

    parallel_for(b.alphas.size(), opts.workers, [&](std::size_t i) {
        b.J_k[i] = eval(b.alphas[i], b.subcarriers[i]);
    });

    const int P = eta.size();
    KahanMatrixSum sum(P, P);
    for (const RMat &Jk : b.J_k) {
        sum.add(Jk);
    }
    b.J_WB = sum.value();
    b.J_NB = eval(1.0, grid.k_c);
    b.J_DD = static_cast<double>(b.Ks()) * b.J_NB;
    b.wb = fim_pseudoinverse(b.J_WB);
    return b;
}

RVec beta_diagnostic(const FimBundle &bundle)
{
    const double denom = (bundle.J_NB.array() * bundle.J_NB.array()).sum();
    if (!(denom > 0.0)) {
        throw InvalidStateError("beta_diagnostic: narrowband FIM is zero");
    }
    RVec beta(bundle.Ks());
    for (int k = 0; k < bundle.Ks(); ++k) {
        // tr(A B) for symmetric A, B is the element-wise inner product
        beta(k) = (bundle.J_k[static_cast<std::size_t>(k)].array() * bundle.J_NB.array()).sum() / denom;
    }
    return beta;
}

} // namespace nfcrb
