// Copyright 2026 The fedgdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Microbenchmarks for the trade-off curve algebra on the standard
// 10,001-knot grid.

#include <algorithm>
#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "fedgdp/tradeoff.h"

namespace fedgdp {
namespace {

void BM_MakeGaussianCurve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(MakeGaussianCurve(1.8));
  }
}
BENCHMARK(BM_MakeGaussianCurve);

void BM_CurveValue(benchmark::State& state) {
  const TradeoffCurve curve = MakeGaussianCurve(1.8);
  double alpha = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(curve.Value(alpha));
    alpha += 1e-4;
    if (alpha > 1.0) alpha = 0.0;
  }
}
BENCHMARK(BM_CurveValue);

void BM_InvertCurve(benchmark::State& state) {
  const TradeoffCurve curve = MakeGaussianCurve(1.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(InvertCurve(curve));
  }
}
BENCHMARK(BM_InvertCurve);

void BM_Convexify(benchmark::State& state) {
  // A non-convex blend that forces real hull work.
  const TradeoffCurve g = MakeGaussianCurve(1.2);
  std::vector<double> alphas = g.alphas();
  std::vector<double> betas = g.betas();
  for (size_t i = 0; i < betas.size(); i += 2) {
    betas[i] = std::min(1.0, betas[i] * 1.05);
  }
  const TradeoffCurve bumpy(alphas, betas);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Convexify(bumpy));
  }
}
BENCHMARK(BM_Convexify);

void BM_SubsampleOperator(benchmark::State& state) {
  const TradeoffCurve curve = MakeGaussianCurve(1.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(SubsampleOperator(curve, 0.35));
  }
}
BENCHMARK(BM_SubsampleOperator);

void BM_MixtureLowerBound(benchmark::State& state) {
  const TradeoffCurve curve = MakeGaussianCurve(1.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(MixtureLowerBound(curve, 0.35));
  }
}
BENCHMARK(BM_MixtureLowerBound);

void BM_GdpCompose(benchmark::State& state) {
  std::vector<double> mus(static_cast<size_t>(state.range(0)), 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(GdpCompose(mus));
  }
}
BENCHMARK(BM_GdpCompose)->Arg(10)->Arg(1000);

void BM_CltMu(benchmark::State& state) {
  const double c = (16.0 / 600.0) * std::sqrt(38.0 * 93.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(CltMu(c, 1.0));
  }
}
BENCHMARK(BM_CltMu);

}  // namespace
}  // namespace fedgdp

BENCHMARK_MAIN();
