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
// The synchronized federation engine: Poisson client sampling, private
// local training (noisy SGD or noisy Adam with per-sample clipping), server
// aggregation, and helper-model personalization. Every random draw comes
// from a (root seed, round, client, purpose) substream, so runs are pure
// functions of their inputs and independent of worker count.

#ifndef FEDGDP_ENGINE_H_
#define FEDGDP_ENGINE_H_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "fedgdp/dataset.h"
#include "fedgdp/model.h"
#include "fedgdp/partition.h"

namespace fedgdp {

enum class Optimizer { kNoisySgd, kNoisyAdam };
enum class BatchMode { kPoissonPerExample, kFixedSizeUniform };
enum class HelperMap { kIdentity, kInterpolation };

std::string OptimizerName(Optimizer optimizer);
Optimizer ParseOptimizer(const std::string& name);
std::string BatchModeName(BatchMode mode);
BatchMode ParseBatchMode(const std::string& name);
std::string HelperMapName(HelperMap map);
HelperMap ParseHelperMap(const std::string& name);

// Per-round learning rate: base_rate * decay_factor^(round / interval),
// constant within a round. decay_factor = 1 gives a constant schedule.
struct LearningRateSchedule {
  double base_rate = 0.1;
  double decay_factor = 1.0;
  int decay_interval_rounds = 10;

  double RoundRate(int round) const;  // round is 0-based
  void Validate() const;
};

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct SyncConfig {
  double sync_probability = 1.0;  // Poisson client-sampling rate p
  int rounds = 1;                 // R
  int local_iters = 1;            // K
  double aggregation_rate = 1.0;  // eta
  double helper_alpha = 0.1;      // interpolation weight alpha
  HelperMap helper_map = HelperMap::kInterpolation;
  Optimizer optimizer = Optimizer::kNoisySgd;
  LearningRateSchedule learning_rate;
  int batch_size = 0;        // B
  double noise_scale = 0.0;  // sigma; 0 disables noise
  // Per-sample clip C. The +infinity sentinel disables clipping and is
  // allowed only with noise_scale == 0 (non-private oracle runs).
  double clip_norm = 1.0;
  BatchMode batch_mode = BatchMode::kPoissonPerExample;
  AdamParams adam;
  int worker_threads = 1;

  // Throws InvalidParameterError naming the offending field.
  void Validate() const;
};

struct ClientState {
  ModelVector local_model;
  ModelVector helper_model;
  std::vector<int> train_indices;  // into the shared train pool
  std::vector<int> test_indices;   // into the shared test pool
};

struct FederationState {
  ModelVector global_model;
  std::vector<ClientState> clients;
  int round = 0;
  uint64_t root_seed = 0;
};

// All models (global, locals, helpers) start from the same seeded w0.
FederationState InitFederation(const ModelSpec& model_spec,
                               const Partition& partition,
                               uint64_t root_seed);

// Independent Bernoulli(p) inclusion of each of the m clients; the result
// may be empty. Indices are returned in increasing order.
std::vector<int> PoissonSampleClients(int m, double p, std::mt19937_64& rng);

// Positions in [0, shard_size) forming one minibatch. Poisson mode includes
// each position independently with rate batch_size/shard_size (possibly
// yielding an empty batch); fixed-size mode draws exactly batch_size
// positions uniformly without replacement.
std::vector<int> DrawBatch(int shard_size, const SyncConfig& config,
                           std::mt19937_64& rng);

// Instrumentation sink for the privacy-relevant step internals.
struct StepTrace {
  std::vector<double> clipped_norms;  // post-clip per-sample gradient norms
  std::vector<double> noise_draws;    // raw per-coordinate noise samples
};

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  int step = 0;
};

// One private step on `batch` (rows of `data`):
//   w <- w - (rate/B) * (sum of clipped per-sample gradients + noise),
// with per-coordinate noise N(0, (2*C*sigma)^2), or the Adam update fed by
// the same noisy mean gradient when config.optimizer is noisy-adam.
// adam_state must be non-null in Adam mode. An empty batch is a noise-only
// step in Poisson mode and an error in fixed-size mode.
void NoisyStep(ModelVector& model, const LabeledDataset& data,
               const std::vector<int>& batch, const SyncConfig& config,
               double rate, std::mt19937_64& noise_rng, AdamState* adam_state,
               StepTrace* trace = nullptr);

// K noisy steps starting from the helper model, with a fresh Adam state.
// Batch positions index into train_indices; draws come from batch_rng and
// noise from noise_rng.
ModelVector LocalPrivateTraining(const ModelVector& helper,
                                 const LabeledDataset& train_pool,
                                 const std::vector<int>& train_indices,
                                 const SyncConfig& config, double rate,
                                 std::mt19937_64& batch_rng,
                                 std::mt19937_64& noise_rng,
                                 StepTrace* trace = nullptr);

// Server update (1 - eta) * global + eta * mean(locals). Requires nonempty
// locals and eta in [0,1].
ModelVector AggregateGlobal(const ModelVector& global,
                            const std::vector<ModelVector>& locals,
                            double eta);

// Helper returned to a client: the global model verbatim (identity map) or
// (1 - alpha) * local + alpha * global (interpolation). Requires alpha in
// [0,1].
ModelVector ComputeHelper(const ModelVector& global, const ModelVector& local,
                          double alpha, HelperMap map);

// One synchronization round: sample the participant set, train participants
// from their helpers (in parallel over config.worker_threads), aggregate,
// and recompute participants' helpers. Non-participants are untouched. An
// empty participant set only advances the round counter. Returns the
// participant indices.
std::vector<int> RunSyncRound(FederationState& state,
                              const LabeledDataset& train_pool,
                              const SyncConfig& config);

struct RoundMetrics {
  int round = 0;
  double avg_personalized_acc = 0.0;  // mean of client models on own tests
  double global_acc = 0.0;            // global model, mean over client tests
  double avg_train_loss = 0.0;        // mean of client models on own trains
  int clients_sampled = 0;
};

struct RunResult {
  FederationState state;
  std::vector<RoundMetrics> metrics;  // one row per round
};

// Runs config.rounds synchronization rounds. Metrics are evaluated every
// metric_every rounds and always on the final round.
RunResult RunFederation(FederationState state,
                        const LabeledDataset& train_pool,
                        const LabeledDataset& test_pool,
                        const SyncConfig& config, int metric_every = 1);

// CSV with header round,avg_personalized_acc,global_acc,avg_train_loss,
// clients_sampled and one row per round.
void WriteMetricsCsv(const std::vector<RoundMetrics>& metrics,
                     std::ostream& out);
void WriteMetricsCsv(const std::vector<RoundMetrics>& metrics,
                     const std::string& path);

}  // namespace fedgdp

#endif  // FEDGDP_ENGINE_H_
