// SPDX-License-Identifier: Apache-2.0
//
// thzchan - terahertz line-of-sight channel synthesis and sweep post-processing
// Copyright (C) 2026 The thzchan authors
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

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "thzchan/thzchan.hpp"

using namespace thzchan;

namespace {

FrequencySweep los_sweep(std::size_t n, double distance_m)
{
    LosChannelSpec spec;
    spec.distance_m = distance_m;
    return los_frequency_response(spec, FrequencyGrid::from_spacing(240e9, 60e9 / static_cast<double>(n), n));
}

} // namespace

static void BM_LosFrequencyResponse(benchmark::State &state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto grid = FrequencyGrid::from_spacing(240e9, 60e9 / static_cast<double>(n), n);
    LosChannelSpec spec;
    spec.distance_m = 0.8;
    spec.tilt_deg = 15.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(los_frequency_response(spec, grid));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n));
}
BENCHMARK(BM_LosFrequencyResponse)->Arg(4096)->Arg(16384);

static void BM_SweepToDelay(benchmark::State &state)
{
    const auto sweep = los_sweep(static_cast<std::size_t>(state.range(0)), 0.8);
    const auto window = static_cast<WindowKind>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(sweep_to_delay(sweep, window));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SweepToDelay)
    ->Args({4096, static_cast<int>(WindowKind::Rectangular)})
    ->Args({4096, static_cast<int>(WindowKind::Hann)})
    ->Args({4095, static_cast<int>(WindowKind::Rectangular)});

static void BM_PaddedDelayAndPeak(benchmark::State &state)
{
    const auto sweep = los_sweep(4096, 1.2);
    const auto pad = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const auto profile = sweep_to_delay(sweep, WindowKind::Hann, pad);
        benchmark::DoNotOptimize(find_first_peak(profile, -10.0));
    }
}
BENCHMARK(BM_PaddedDelayAndPeak)->Arg(1)->Arg(4)->Arg(16);

// One least-squares fit per grid point across six distances.
static void BM_PerFrequencyFits(benchmark::State &state)
{
    const std::vector<double> distances{0.2, 0.4, 0.6, 0.8, 1.0, 1.2};
    std::vector<FrequencySweep> sweeps;
    for (double d : distances)
        sweeps.push_back(los_sweep(4096, d));
    for (auto _ : state) {
        std::vector<double> n_hat(4096);
        std::vector<PathLossPoint> pts(distances.size());
        for (std::size_t k = 0; k < n_hat.size(); ++k) {
            for (std::size_t i = 0; i < distances.size(); ++i)
                pts[i] = {distances[i], 10.0 * std::log10(std::norm(sweeps[i].samples()[k]))};
            n_hat[k] = fit_path_loss(pts, 0.1).n_hat;
        }
        benchmark::DoNotOptimize(aggregate_exponents(n_hat));
    }
}
BENCHMARK(BM_PerFrequencyFits)->Unit(benchmark::kMillisecond);

static void BM_SynthesizeTap(benchmark::State &state)
{
    TapSpec tap;
    tap.sigma_s = 1.0;
    tap.sigma_d = 0.3;
    tap.m_waves = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(synthesize_tap(tap, 270e9, seed++));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SynthesizeTap)->Arg(128)->Arg(4096);

static void BM_EnvelopeKs(benchmark::State &state)
{
    Rng rng(1);
    std::vector<double> r(static_cast<std::size_t>(state.range(0)));
    for (auto &v : r)
        v = std::hypot(rng.normal(), rng.normal());
    for (auto _ : state)
        benchmark::DoNotOptimize(envelope_ks_check(r, RiceDist{2.0, 2.0}));
}
BENCHMARK(BM_EnvelopeKs)->Arg(10'000);

BENCHMARK_MAIN();
