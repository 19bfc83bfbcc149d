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

#include <doctest.h>

#include "nfcrb/error.hpp"
#include "nfcrb/fim.hpp"
#include "nfcrb/parallel.hpp"
#include "nfcrb/rng.hpp"
#include "nfcrb/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

using namespace nfcrb;

namespace {

ParamVector two_paths(const ArrayConfig &cfg, double N0 = 0.1)
{
    const double th[] = {0.8, 1.7};
    const double r[] = {4.0, 9.0};
    const double p[] = {1.0, 0.6};
    return ParamVector::from_paths(PathSet::make(cfg, th, r, p), N0);
}

RMat random_psd(SplitMix64 &rng, int n, int rank, double ridge)
{
    RMat A(n, rank);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < rank; ++j) {
            A(i, j) = 2.0 * rng.uniform() - 1.0;
        }
    }
    return A * A.transpose() + ridge * RMat::Identity(n, n);
}

FimBundle bundle_of(std::vector<RMat> Jk, RMat J_NB)
{
    FimBundle b;
    b.J_k = std::move(Jk);
    b.J_NB = std::move(J_NB);
    return b;
}

} // namespace

TEST_CASE("Slepian-Bangs basics")
{
    const ArrayConfig cfg = ArrayConfig::make(16, 28e9);
    const Combiner c = Combiner::random(16, 5, 4);
    const ParamVector eta = ParamVector::from_paths(PathSet::single(cfg, 1.0, 3.0, 1.0), 0.2);

    SUBCASE("zero derivatives give zero information")
    {
        CovarianceModel m = build_covariance(cfg, c, eta, 1.0);
        for (CMat &d : m.dR) {
            d.setZero();
        }
        CHECK(fim_subcarrier(m, 64).norm() == 0.0);
    }
    SUBCASE("linear in the snapshot count")
    {
        const CovarianceModel m = build_covariance(cfg, c, eta, 1.0);
        const RMat J1 = fim_subcarrier(m, 1);
        CHECK((fim_subcarrier(m, 37) - 37.0 * J1).norm() <= 1e-12 * (37.0 * J1).norm());
    }
    SUBCASE("noise-only closed form")
    {
        // With p = 0 only the N_0 entry survives: N tr((R^-1 W^H W)^2) = N N_RF / N0^2.
        const ParamVector quiet = ParamVector::from_paths(PathSet::single(cfg, 1.0, 3.0, 0.0), 0.2);
        const RMat J = fim_subcarrier(build_covariance(cfg, c, quiet, 1.0), 64);
        CHECK(J(3, 3) == doctest::Approx(64.0 * 5 / 0.04).epsilon(1e-12));
        CHECK(J.block(0, 0, 2, 2).norm() < 1e-9 * J(3, 3));
        const RMat Js = fim_subcarrier_structured(cfg, c, quiet, 1.0, 64);
        CHECK(Js(3, 3) == doctest::Approx(64.0 * 5 / 0.04).epsilon(1e-12));
    }
    SUBCASE("missing derivatives")
    {
        const CovarianceModel m = model_covariance(cfg, c, eta, 1.0);
        CHECK_THROWS_AS(fim_subcarrier(m, 64), InvalidStateError);
        CHECK_THROWS_AS(fim_subcarrier(build_covariance(cfg, c, eta, 1.0), 0), std::invalid_argument);
    }
}

TEST_CASE("dense and structured routes agree")
{
    const ArrayConfig cfg = ArrayConfig::make(48, 28e9);
    const ParamVector one = ParamVector::from_paths(PathSet::single(cfg, 0.7, 5.0, 1.0), 0.1);
    const ParamVector two = two_paths(cfg);
    for (const Combiner &c : {Combiner::random(48, 12, 1), Combiner::identity(48)}) {
        for (const ParamVector &eta : {one, two}) {
            for (double alpha : {0.986, 1.0, 1.014}) {
                const RMat Jd = fim_at(cfg, c, eta, alpha, 64, FimRoute::Dense);
                const RMat Js = fim_at(cfg, c, eta, alpha, 64, FimRoute::Structured);
                CHECK(relative_frobenius(Js, Jd) < 1e-9);
                CHECK((Js - Js.transpose()).norm() == 0.0);
                CHECK(min_eigenvalue(Js) > -1e-9 * Js.norm());
            }
        }
    }
}

TEST_CASE("wideband aggregation")
{
    const ArrayConfig cfg = ArrayConfig::make(32, 28e9);
    const Combiner c = Combiner::random(32, 8, 2);
    const ParamVector eta = two_paths(cfg);

    SUBCASE("single alpha = 1 subcarrier collapses all three FIMs")
    {
        const FimBundle b = fim_wideband(cfg, narrowband_grid(28e9, 120e3), c, eta, 64);
        CHECK(b.Ks() == 1);
        CHECK((b.J_WB - b.J_NB).norm() == 0.0);
        CHECK((b.J_DD - b.J_NB).norm() == 0.0);
    }
    SUBCASE("sum, Loewner order and order independence")
    {
        const OfdmGrid grid = build_grid(28e9, 120e3, 400e6, 24);
        const FimBundle b = fim_wideband(cfg, grid, c, eta, 64);
        REQUIRE(b.Ks() == 24);
        CHECK(b.subcarriers == grid.selected);
        RMat rev = RMat::Zero(7, 7);
        for (int k = b.Ks() - 1; k >= 0; --k) {
            rev += b.J_k[static_cast<std::size_t>(k)];
        }
        CHECK(relative_frobenius(rev, b.J_WB) < 1e-13);
        for (const RMat &Jk : b.J_k) {
            CHECK(min_eigenvalue(RMat(b.J_WB - Jk)) > -1e-9 * b.J_WB.norm());
        }
        CHECK((b.J_DD - 24.0 * b.J_NB).norm() == 0.0);
        CHECK(relative_frobenius(b.J_NB, fim_at(cfg, c, eta, 1.0, 64, FimRoute::Dense)) < 1e-9);
        CHECK((b.wb.pinv - fim_pseudoinverse(b.J_WB).pinv).norm() == 0.0);
    }
    SUBCASE("path order permutes the FIM")
    {
        const double th[] = {1.7, 0.8};
        const double r[] = {9.0, 4.0};
        const double p[] = {0.6, 1.0};
        const ParamVector swapped = ParamVector::from_paths(PathSet::make(cfg, th, r, p), 0.1);
        const RMat J = fim_at(cfg, c, eta, 1.004, 64, FimRoute::Structured);
        const RMat Js = fim_at(cfg, c, swapped, 1.004, 64, FimRoute::Structured);
        const int perm[] = {1, 0, 3, 2, 5, 4, 6};
        RMat back(7, 7);
        for (int i = 0; i < 7; ++i) {
            for (int j = 0; j < 7; ++j) {
                back(i, j) = Js(perm[i], perm[j]);
            }
        }
        CHECK(relative_frobenius(back, J) < 1e-12);
    }
    SUBCASE("workers and cache do not change results")
    {
        const OfdmGrid grid = build_grid(28e9, 120e3, 100e6, 16);
        const FimBundle serial = fim_wideband(cfg, grid, c, eta, 64);
        FimOptions opts;
        opts.workers = 3;
        const FimBundle par = fim_wideband(cfg, grid, c, eta, 64, opts);
        CHECK((serial.J_WB - par.J_WB).norm() == 0.0);

        FimCache cache;
        opts.cache = &cache;
        const FimBundle first = fim_wideband(cfg, grid, c, eta, 64, opts);
        CHECK(cache.misses() == 17);
        CHECK(cache.hits() == 0);
        const FimBundle second = fim_wideband(cfg, grid, c, eta, 64, opts);
        CHECK(cache.hits() == 17);
        CHECK(cache.size() == 17);
        CHECK((first.J_WB - serial.J_WB).norm() == 0.0);
        CHECK((second.J_WB - serial.J_WB).norm() == 0.0);

        fim_wideband(cfg, grid, c, eta, 32, opts);
        CHECK(cache.size() == 34);
    }
}

TEST_CASE("parallel_for visits every index once")
{
    std::vector<std::atomic<int>> seen(101);
    parallel_for(seen.size(), 4, [&](std::size_t i) { seen[i].fetch_add(1); });
    CHECK(std::all_of(seen.begin(), seen.end(), [](const auto &v) { return v.load() == 1; }));
}

TEST_CASE("thresholded pseudoinverse")
{
    SUBCASE("identity")
    {
        const Pseudoinverse p = fim_pseudoinverse(RMat::Identity(4, 4));
        CHECK(p.rank == 4);
        CHECK((p.pinv - RMat::Identity(4, 4)).norm() < 1e-15);
    }
    SUBCASE("tiny eigenvalue is dropped")
    {
        RMat J = RMat::Zero(2, 2);
        J(0, 0) = 1.0;
        J(1, 1) = 1e-9;
        const Pseudoinverse p = fim_pseudoinverse(J);
        CHECK(p.rank == 1);
        CHECK(p.pinv(0, 0) == doctest::Approx(1.0));
        CHECK(p.pinv(1, 1) == 0.0);
        CHECK(p.eps_sv == doctest::Approx(1e-6));
    }
    SUBCASE("zero matrix")
    {
        const Pseudoinverse p = fim_pseudoinverse(RMat::Zero(3, 3));
        CHECK(p.rank == 0);
        CHECK(p.pinv.norm() == 0.0);
    }
    SUBCASE("negative round-off is clamped")
    {
        RMat J = RMat::Identity(3, 3);
        J(2, 2) = -1e-14;
        const Pseudoinverse p = fim_pseudoinverse(J);
        CHECK(p.eigvals(0) == 0.0);
        CHECK(p.rank == 2);
    }
    SUBCASE("Moore-Penrose identities on random instances")
    {
        SplitMix64 rng(12);
        for (int t = 0; t < 20; ++t) {
            const RMat J = random_psd(rng, 7, 7, 0.1);
            const RMat P = fim_pseudoinverse(J).pinv;
            CHECK(relative_frobenius(RMat(J * P * J), J) < 1e-10);
            CHECK(relative_frobenius(RMat(P * J * P), P) < 1e-10);
            CHECK(relative_frobenius(P, RMat(J.inverse())) < 1e-10);
        }
        const CheckResult r = check_moore_penrose_random(10, 7, 3);
        CHECK(r.passed);
    }
    SUBCASE("rank-deficient projection")
    {
        SplitMix64 rng(5);
        const RMat J = random_psd(rng, 6, 3, 0.0);
        const Pseudoinverse p = fim_pseudoinverse(J);
        CHECK(p.rank == 3);
        CHECK(relative_frobenius(RMat(J * p.pinv * J), J) < 1e-9);
    }
    SUBCASE("inverse is order-reversing on positive definite pairs")
    {
        SplitMix64 rng(8);
        for (int t = 0; t < 20; ++t) {
            const RMat A = random_psd(rng, 5, 5, 0.5);
            const RMat B = A + random_psd(rng, 5, 2, 0.0);
            const RMat diff = fim_pseudoinverse(A).pinv - fim_pseudoinverse(B).pinv;
            CHECK(min_eigenvalue(RMat(diff)) > -1e-10);
        }
    }
    CHECK_THROWS_AS(fim_pseudoinverse(RMat::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("beta diagnostic")
{
    RMat J = RMat::Zero(2, 2);
    J(0, 0) = 3.0;
    J(0, 1) = J(1, 0) = 1.0;
    J(1, 1) = 2.0;
    const RVec beta = beta_diagnostic(bundle_of({J, 2.0 * J, 0.5 * J}, J));
    REQUIRE(beta.size() == 3);
    CHECK(beta(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(beta(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(beta(2) == doctest::Approx(0.5).epsilon(1e-15));

    RMat other = RMat::Zero(2, 2);
    other(0, 1) = other(1, 0) = 1.0;
    CHECK(beta_diagnostic(bundle_of({other}, RMat::Identity(2, 2)))(0) == 0.0);

    CHECK_THROWS_AS(beta_diagnostic(bundle_of({J}, RMat::Zero(2, 2))), InvalidStateError);

    SUBCASE("full array stays near one at 100 MHz")
    {
        const ArrayConfig cfg = ArrayConfig::make(256, 28e9);
        const ParamVector eta = ParamVector::from_paths(PathSet::single(cfg, 40 * kPi / 180, 5.0), 0.1);
        const FimBundle b = fim_wideband(cfg, build_grid(28e9, 120e3, 100e6, 32), Combiner::identity(256), eta, 64);
        const RVec bt = beta_diagnostic(b);
        CHECK(bt.minCoeff() > 0.99);
        CHECK(bt.maxCoeff() < 1.01);
    }
}
