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
// Microbenchmarks for the training path: per-sample gradients, private
// steps, and whole synchronization rounds.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "fedgdp/dataset.h"
#include "fedgdp/engine.h"
#include "fedgdp/model.h"
#include "fedgdp/partition.h"

namespace fedgdp {
namespace {

const LabeledDataset& Pool() {
  static const LabeledDataset pool = SynthDataset(10, 64, 200, 2.0, 7);
  return pool;  // 2000 examples, 64 features
}

ModelSpec LogisticSpec() {
  ModelSpec spec;
  spec.arch = ModelArch::kMultinomialLogistic;
  spec.input_dim = 64;
  spec.num_classes = 10;
  return spec;
}

ModelSpec MlpSpec() {
  ModelSpec spec;
  spec.arch = ModelArch::kOneHiddenMlp;
  spec.input_dim = 64;
  spec.num_classes = 10;
  spec.hidden_units = 100;
  return spec;
}

SyncConfig StepConfig() {
  SyncConfig config;
  config.batch_size = 16;
  config.noise_scale = 1.0;
  config.clip_norm = 1.0;
  config.local_iters = 10;
  return config;
}

void BM_PerSampleGradientLogistic(benchmark::State& state) {
  const ModelVector model = InitModel(LogisticSpec(), 1);
  std::vector<double> grad;
  int row = 0;
  for (auto _ : state) {
    PerSampleGradient(model, Pool().row(row), Pool().labels[row], grad);
    benchmark::DoNotOptimize(grad.data());
    row = (row + 1) % Pool().size();
  }
}
BENCHMARK(BM_PerSampleGradientLogistic);

void BM_PerSampleGradientMlp(benchmark::State& state) {
  const ModelVector model = InitModel(MlpSpec(), 1);
  std::vector<double> grad;
  int row = 0;
  for (auto _ : state) {
    PerSampleGradient(model, Pool().row(row), Pool().labels[row], grad);
    benchmark::DoNotOptimize(grad.data());
    row = (row + 1) % Pool().size();
  }
}
BENCHMARK(BM_PerSampleGradientMlp);

void BM_NoisyStep(benchmark::State& state) {
  const SyncConfig config = StepConfig();
  ModelVector model = InitModel(LogisticSpec(), 2);
  std::mt19937_64 batch_rng(3), noise_rng(4);
  for (auto _ : state) {
    const std::vector<int> batch = DrawBatch(600, config, batch_rng);
    NoisyStep(model, Pool(), batch, config, 0.05, noise_rng, nullptr);
    benchmark::DoNotOptimize(model.weights.data());
  }
}
BENCHMARK(BM_NoisyStep);

void BM_LocalPrivateTraining(benchmark::State& state) {
  const SyncConfig config = StepConfig();
  const ModelVector helper = InitModel(LogisticSpec(), 5);
  std::vector<int> shard(600);
  for (int i = 0; i < 600; ++i) shard[i] = i;
  std::mt19937_64 batch_rng(6), noise_rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(LocalPrivateTraining(
        helper, Pool(), shard, config, 0.05, batch_rng, noise_rng));
  }
}
BENCHMARK(BM_LocalPrivateTraining);

void BM_SyncRound(benchmark::State& state) {
  SyncConfig config = StepConfig();
  config.worker_threads = static_cast<int>(state.range(0));
  PartitionSpec spec;
  spec.scheme = PartitionScheme::kIid;
  spec.num_clients = 10;
  spec.train_per_client = 200;
  spec.test_per_client = 50;
  spec.seed = 11;
  const Partition partition = MakePartition(Pool(), Pool(), spec);
  FederationState state0 = InitFederation(LogisticSpec(), partition, 12);
  for (auto _ : state) {
    FederationState round_state = state0;
    benchmark::DoNotOptimize(RunSyncRound(round_state, Pool(), config));
  }
}
BENCHMARK(BM_SyncRound)->Arg(1)->Arg(4);

}  // namespace
}  // namespace fedgdp

BENCHMARK_MAIN();
