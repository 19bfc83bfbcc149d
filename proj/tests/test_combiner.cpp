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

#include "nfcrb/combiner.hpp"
#include "nfcrb/rng.hpp"

#include <cmath>

using namespace nfcrb;

TEST_CASE("reference phases for M = 4, N_RF = 2, seed 1")
{
    // Row-major draws of the seed-1 stream, top 53 bits over 2^53.
    const double u[8] = {0.5665615751722809, 0.7457817572627011, 0.9710027535867962, 0.4443592170557721,
                         0.44426470082635805, 0.762894391911761, 0.877348686764173, 0.5230671798509814};
    const Combiner c = Combiner::random(4, 2, 1);
    REQUIRE(c.M() == 4);
    REQUIRE(c.n_rf() == 2);
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 2; ++n) {
            const cdouble ref = 0.5 * std::exp(cdouble(0, 2 * kPi * u[2 * m + n]));
            CHECK(std::abs(c.W()(m, n) - ref) < 1e-15);
        }
    }
}

TEST_CASE("determinism and seed sensitivity")
{
    const Combiner a = Combiner::random(4, 2, 77);
    const Combiner b = Combiner::random(4, 2, 77);
    const Combiner c = Combiner::random(4, 2, 78);
    CHECK(a.W() == b.W());
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK((a.W() - c.W()).norm() > 0.1);
    CHECK(a.fingerprint() != c.fingerprint());
    CHECK(a.seed() == 77);
}

TEST_CASE("constant modulus and column normalization")
{
    const Combiner small = Combiner::random(4, 2, 3);
    CHECK((small.W().cwiseAbs().array() - 0.5).abs().maxCoeff() < 1e-15);

    const Combiner c = Combiner::random(256, 16, 1);
    CHECK((c.W().cwiseAbs().array() - 1.0 / 16.0).abs().maxCoeff() < 1e-15);
    CHECK(std::abs(c.gram().trace() - 16.0) < 1e-12);
    CHECK(hermitian_defect(c.gram()) == 0.0);
    CHECK((c.gram().diagonal().real().array() - 1.0).abs().maxCoeff() < 1e-13);
}

TEST_CASE("identity combiner")
{
    const Combiner c = Combiner::identity(8);
    CHECK(c.kind() == CombinerKind::Identity);
    CHECK(to_string(c.kind()) == "identity");
    CHECK(c.n_rf() == 8);
    CVec a(8);
    for (int m = 0; m < 8; ++m) {
        a(m) = cdouble(m, -m * 0.5);
    }
    CHECK(c.compress(a) == a);
    CHECK(c.gram() == CMat::Identity(8, 8));
}

TEST_CASE("compression against a naive loop")
{
    const Combiner c = Combiner::random(24, 5, 9);
    GaussianStream g(5);
    for (int t = 0; t < 5; ++t) {
        CVec a(24);
        for (int m = 0; m < 24; ++m) {
            a(m) = g.complex_normal();
        }
        const CVec y = c.compress(a);
        for (int n = 0; n < 5; ++n) {
            cdouble ref = 0.0;
            for (int m = 0; m < 24; ++m) {
                ref += std::conj(c.W()(m, n)) * a(m);
            }
            CHECK(std::abs(y(n) - ref) < 1e-14);
        }
        const double op_norm = Eigen::JacobiSVD<CMat>(c.W()).singularValues()(0);
        CHECK(y.norm() <= op_norm * a.norm() * (1 + 1e-12));
    }
    CHECK(c.compress(CVec(CVec::Zero(24))).norm() == 0.0);

    CMat A(24, 3);
    A.setRandom();
    CHECK((c.compress(A) - c.W().adjoint() * A).norm() < 1e-14);
}

TEST_CASE("combiner argument checks")
{
    CHECK_THROWS_AS(Combiner::random(4, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Combiner::random(4, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(Combiner::identity(0), std::invalid_argument);
    const Combiner c = Combiner::random(4, 2, 1);
    CHECK_THROWS_AS(c.compress(CVec(CVec::Ones(3))), std::invalid_argument);
}
