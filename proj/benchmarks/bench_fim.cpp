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

#include "nfcrb/covariance.hpp"
#include "nfcrb/experiment.hpp"
#include "nfcrb/fim.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace nfcrb;

namespace {

void BM_FimSubcarrierDense(benchmark::State &state)
{
    const Scenario s = default_scenario();
    const Combiner c = Combiner::random(s.cfg.M, static_cast<int>(state.range(0)), 1);
    const ParamVector eta = s.eta();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fim_at(s.cfg, c, eta, 1.003, s.N, FimRoute::Dense));
    }
}
BENCHMARK(BM_FimSubcarrierDense)->Arg(16)->Arg(64);

void BM_FimSubcarrierStructured(benchmark::State &state)
{
    const Scenario s = default_scenario();
    const Combiner c = Combiner::random(s.cfg.M, static_cast<int>(state.range(0)), 1);
    const ParamVector eta = s.eta();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fim_at(s.cfg, c, eta, 1.003, s.N, FimRoute::Structured));
    }
}
BENCHMARK(BM_FimSubcarrierStructured)->Arg(16)->Arg(64);

void BM_WidebandOperatingPoint(benchmark::State &state)
{
    const Scenario s = default_scenario();
    const Combiner c = Combiner::random(s.cfg.M, 16, 1);
    const double B = static_cast<double>(state.range(0)) * 1e6;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_operating_point(s, c, B));
    }
}
BENCHMARK(BM_WidebandOperatingPoint)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_FullArrayWideband(benchmark::State &state)
{
    const Scenario s = default_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(full_array_wideband(s, 400e6));
    }
}
BENCHMARK(BM_FullArrayWideband)->Unit(benchmark::kMillisecond);

void BM_MismatchGrid(benchmark::State &state)
{
    const Scenario s = default_scenario();
    const Combiner c = Combiner::random(s.cfg.M, 16, 1);
    const std::vector<double> alphas = s.grid(400e6).selected_alphas();
    std::vector<double> with_unit = alphas;
    with_unit.push_back(1.0);
    const std::vector<double> ranges = log_space(1.0, 100.0, 60);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mismatch_grid(s.cfg, c, s.paths.theta(0), s.N0, 1.0, with_unit, ranges));
    }
}
BENCHMARK(BM_MismatchGrid)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
