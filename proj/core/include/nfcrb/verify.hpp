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

#include "nfcrb/experiment.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfcrb {

struct VerifyOptions {
    double bandwidth_hz = 400e6;
    double beta_bandwidth_hz = 800e6;
    int N_RF = 16;
    std::uint64_t seed = 1;
    int workers = 1;
    int fd_configs = 20;
    int mc_trials = 20;
    std::vector<int> mc_snapshots{64, 256, 1024, 4096};
    /// Negative control: scales the first analytic derivative by (1 + 1e-3)
    /// before the finite-difference comparison.
    bool inject_derivative_fault = false;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;     ///< measured quantity
    double threshold = 0.0; ///< bound it was compared against
    std::string detail;
    /// Diagnostics are reported but do not decide all_passed().
    bool gating = true;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

VerifyReport run_verification(const Scenario &s, const VerifyOptions &opts = {});

// Individual checks, exposed for the test suites.

/// Max relative Frobenius error between analytic dR and central differences of
/// the model covariance, over `configs` random configurations (half with two
/// paths) plus the scenario's own configuration.
CheckResult check_derivatives(const Scenario &s, int N_RF, std::uint64_t seed, int configs,
                              bool inject_fault);

/// Relative Frobenius error of R_hat vs R for each N (averaged over trials) and
/// the least-squares log-log slope; `value` is the slope.
struct MonteCarloResult {
    std::vector<int> snapshots;
    std::vector<double> mean_error;
    double slope = 0.0;
};
MonteCarloResult monte_carlo_convergence(const Scenario &s, const Combiner &c, double alpha,
                                         const std::vector<int> &snapshots, int trials,
                                         std::uint64_t seed);

/// Both Moore-Penrose identities for the thresholded pseudoinverse on
/// `instances` random full-rank PSD matrices of size n; `value` is the worst
/// relative Frobenius residual.
CheckResult check_moore_penrose_random(int instances, int n, std::uint64_t seed);

/// Least-squares slope of log10(y) against log10(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

} // namespace nfcrb
