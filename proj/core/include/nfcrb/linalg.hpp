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

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>

namespace nfcrb {

using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// ||A - A^H||_F / max(||A||_F, 1)
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived> &A)
{
    const double scale = std::max(A.norm(), 1.0);
    return (A - A.adjoint()).norm() / scale;
}

inline double relative_frobenius(const CMat &A, const CMat &B)
{
    const double ref = B.norm();
    return ref > 0.0 ? (A - B).norm() / ref : (A - B).norm();
}

inline double relative_frobenius(const RMat &A, const RMat &B)
{
    const double ref = B.norm();
    return ref > 0.0 ? (A - B).norm() / ref : (A - B).norm();
}

/// Element-wise Kahan accumulator for real matrices. Summation order is the
/// order of `add` calls.
class KahanMatrixSum {
public:
    KahanMatrixSum(Eigen::Index rows, Eigen::Index cols)
        : sum_(RMat::Zero(rows, cols)), comp_(RMat::Zero(rows, cols)) {}

    void add(const RMat &term)
    {
        for (Eigen::Index j = 0; j < sum_.cols(); ++j) {
            for (Eigen::Index i = 0; i < sum_.rows(); ++i) {
                const double y = term(i, j) - comp_(i, j);
                const double t = sum_(i, j) + y;
                comp_(i, j) = (t - sum_(i, j)) - y;
                sum_(i, j) = t;
            }
        }
    }

    const RMat &value() const { return sum_; }

private:
    RMat sum_;
    RMat comp_;
};

/// Smallest eigenvalue of a real symmetric matrix.
inline double min_eigenvalue(const RMat &A)
{
    Eigen::SelfAdjointEigenSolver<RMat> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Smallest eigenvalue of a complex Hermitian matrix.
inline double min_eigenvalue(const CMat &A)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace nfcrb
