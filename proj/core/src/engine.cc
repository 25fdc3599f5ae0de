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

#include "fedgdp/engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <utility>

#include "fedgdp/errors.h"
#include "fedgdp/rng.h"

namespace fedgdp {
namespace {

void AppendDouble(std::string& out, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  out += buf;
}

}  // namespace

std::string OptimizerName(Optimizer optimizer) {
  switch (optimizer) {
    case Optimizer::kNoisySgd:
      return "noisy-sgd";
    case Optimizer::kNoisyAdam:
      return "noisy-adam";
  }
  throw InvalidParameterError("unknown optimizer value");
}

Optimizer ParseOptimizer(const std::string& name) {
  if (name == "noisy-sgd") return Optimizer::kNoisySgd;
  if (name == "noisy-adam") return Optimizer::kNoisyAdam;
  throw InvalidParameterError("unknown optimizer name: " + name);
}

std::string BatchModeName(BatchMode mode) {
  switch (mode) {
    case BatchMode::kPoissonPerExample:
      return "poisson-per-example";
    case BatchMode::kFixedSizeUniform:
      return "fixed-size-uniform";
  }
  throw InvalidParameterError("unknown batch mode value");
}

BatchMode ParseBatchMode(const std::string& name) {
  if (name == "poisson-per-example") return BatchMode::kPoissonPerExample;
  if (name == "fixed-size-uniform") return BatchMode::kFixedSizeUniform;
  throw InvalidParameterError("unknown batch mode name: " + name);
}

std::string HelperMapName(HelperMap map) {
  switch (map) {
    case HelperMap::kIdentity:
      return "identity";
    case HelperMap::kInterpolation:
      return "interpolation";
  }
  throw InvalidParameterError("unknown helper map value");
}

HelperMap ParseHelperMap(const std::string& name) {
  if (name == "identity") return HelperMap::kIdentity;
  if (name == "interpolation") return HelperMap::kInterpolation;
  throw InvalidParameterError("unknown helper map name: " + name);
}

double LearningRateSchedule::RoundRate(int round) const {
  if (round < 0) {
    throw InvalidParameterError("learning rate round must be >= 0");
  }
  if (decay_factor == 1.0) return base_rate;
  const int steps = round / decay_interval_rounds;
  return base_rate * std::pow(decay_factor, static_cast<double>(steps));
}

void LearningRateSchedule::Validate() const {
  if (!(base_rate > 0.0) || !std::isfinite(base_rate)) {
    throw InvalidParameterError("learning_rate.base_rate must be positive");
  }
  if (!(decay_factor > 0.0) || decay_factor > 1.0) {
    throw InvalidParameterError(
        "learning_rate.decay_factor must be in (0, 1]");
  }
  if (decay_interval_rounds < 1) {
    throw InvalidParameterError(
        "learning_rate.decay_interval_rounds must be >= 1");
  }
}

void SyncConfig::Validate() const {
  if (!(sync_probability >= 0.0) || sync_probability > 1.0) {
    throw InvalidParameterError("sync_probability must be in [0, 1]");
  }
  if (rounds < 0) {
    throw InvalidParameterError("rounds must be >= 0");
  }
  if (local_iters < 1) {
    throw InvalidParameterError("local_iters must be >= 1");
  }
  if (!(aggregation_rate >= 0.0) || aggregation_rate > 1.0) {
    throw InvalidParameterError("aggregation_rate must be in [0, 1]");
  }
  if (!(helper_alpha >= 0.0) || helper_alpha > 1.0) {
    throw InvalidParameterError("helper_alpha must be in [0, 1]");
  }
  learning_rate.Validate();
  if (batch_size < 1) {
    throw InvalidParameterError("batch_size must be >= 1");
  }
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw InvalidParameterError("noise_scale must be finite and >= 0");
  }
  if (std::isnan(clip_norm) || !(clip_norm > 0.0)) {
    throw InvalidParameterError("clip_norm must be positive");
  }
  if (std::isinf(clip_norm) && noise_scale > 0.0) {
    throw InvalidParameterError(
        "clip_norm must be finite when noise_scale > 0");
  }
  if (worker_threads < 1) {
    throw InvalidParameterError("worker_threads must be >= 1");
  }
}

FederationState InitFederation(const ModelSpec& model_spec,
                               const Partition& partition,
                               uint64_t root_seed) {
  model_spec.Validate();
  if (partition.empty()) {
    throw InvalidParameterError("partition must have at least one client");
  }
  FederationState state;
  state.global_model = InitModel(model_spec, root_seed);
  state.clients.reserve(partition.size());
  for (const ClientShard& shard : partition) {
    ClientState client;
    client.local_model = state.global_model;
    client.helper_model = state.global_model;
    client.train_indices = shard.train_indices;
    client.test_indices = shard.test_indices;
    state.clients.push_back(std::move(client));
  }
  state.round = 0;
  state.root_seed = root_seed;
  return state;
}

std::vector<int> PoissonSampleClients(int m, double p, std::mt19937_64& rng) {
  if (m < 0) {
    throw InvalidParameterError("client count must be >= 0");
  }
  if (!(p >= 0.0) || p > 1.0) {
    throw InvalidParameterError("sampling probability must be in [0, 1]");
  }
  std::vector<int> sampled;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < m; ++i) {
    if (unit(rng) < p) sampled.push_back(i);
  }
  return sampled;
}

std::vector<int> DrawBatch(int shard_size, const SyncConfig& config,
                           std::mt19937_64& rng) {
  if (shard_size < 1) {
    throw InvalidParameterError("shard size must be >= 1");
  }
  std::vector<int> batch;
  if (config.batch_mode == BatchMode::kPoissonPerExample) {
    const double rate = std::min(
        1.0, static_cast<double>(config.batch_size) / shard_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < shard_size; ++i) {
      if (unit(rng) < rate) batch.push_back(i);
    }
    return batch;
  }
  if (config.batch_size > shard_size) {
    throw InvalidParameterError(
        "batch_size must be <= shard size for fixed-size batches");
  }
  // Partial Fisher-Yates over positions gives a uniform sample without
  // replacement in O(batch_size) extra space.
  std::vector<int> positions(shard_size);
  std::iota(positions.begin(), positions.end(), 0);
  for (int i = 0; i < config.batch_size; ++i) {
    std::uniform_int_distribution<int> pick(i, shard_size - 1);
    std::swap(positions[i], positions[pick(rng)]);
  }
  batch.assign(positions.begin(), positions.begin() + config.batch_size);
  std::sort(batch.begin(), batch.end());
  return batch;
}

void NoisyStep(ModelVector& model, const LabeledDataset& data,
               const std::vector<int>& batch, const SyncConfig& config,
               double rate, std::mt19937_64& noise_rng, AdamState* adam_state,
               StepTrace* trace) {
  if (batch.empty() && config.batch_mode == BatchMode::kFixedSizeUniform) {
    throw InvalidParameterError(
        "fixed-size batches must be nonempty");
  }
  if (config.optimizer == Optimizer::kNoisyAdam && adam_state == nullptr) {
    throw InvalidParameterError("noisy-adam requires optimizer state");
  }
  const size_t dim = model.weights.size();
  std::vector<double> sum(dim, 0.0);
  std::vector<double> grad(dim, 0.0);
  for (int row : batch) {
    PerSampleGradient(model, data.row(row), data.labels[row], grad);
    ClipGradient(grad, config.clip_norm);
    if (trace != nullptr) {
      double sq = 0.0;
      for (double g : grad) sq += g * g;
      trace->clipped_norms.push_back(std::sqrt(sq));
    }
    for (size_t j = 0; j < dim; ++j) sum[j] += grad[j];
  }
  if (config.noise_scale > 0.0) {
    const double noise_sd = 2.0 * config.clip_norm * config.noise_scale;
    std::normal_distribution<double> noise(0.0, noise_sd);
    for (size_t j = 0; j < dim; ++j) {
      const double draw = noise(noise_rng);
      if (trace != nullptr) trace->noise_draws.push_back(draw);
      sum[j] += draw;
    }
  }
  const double inv_batch = 1.0 / static_cast<double>(config.batch_size);
  if (config.optimizer == Optimizer::kNoisySgd) {
    const double scale = rate * inv_batch;
    for (size_t j = 0; j < dim; ++j) {
      model.weights[j] -= scale * sum[j];
    }
    return;
  }
  // Noisy Adam: the privatized mean gradient feeds the standard Adam
  // moment recursions.
  if (adam_state->first_moment.size() != dim) {
    adam_state->first_moment.assign(dim, 0.0);
    adam_state->second_moment.assign(dim, 0.0);
    adam_state->step = 0;
  }
  adam_state->step += 1;
  const AdamParams& adam = config.adam;
  const double bias1 =
      1.0 - std::pow(adam.beta1, static_cast<double>(adam_state->step));
  const double bias2 =
      1.0 - std::pow(adam.beta2, static_cast<double>(adam_state->step));
  for (size_t j = 0; j < dim; ++j) {
    const double g = sum[j] * inv_batch;
    double& m1 = adam_state->first_moment[j];
    double& m2 = adam_state->second_moment[j];
    m1 = adam.beta1 * m1 + (1.0 - adam.beta1) * g;
    m2 = adam.beta2 * m2 + (1.0 - adam.beta2) * g * g;
    const double m1_hat = m1 / bias1;
    const double m2_hat = m2 / bias2;
    model.weights[j] -= rate * m1_hat / (std::sqrt(m2_hat) + adam.epsilon);
  }
}

ModelVector LocalPrivateTraining(const ModelVector& helper,
                                 const LabeledDataset& train_pool,
                                 const std::vector<int>& train_indices,
                                 const SyncConfig& config, double rate,
                                 std::mt19937_64& batch_rng,
                                 std::mt19937_64& noise_rng,
                                 StepTrace* trace) {
  if (train_indices.empty()) {
    throw InvalidParameterError("client train shard must be nonempty");
  }
  ModelVector model = helper;
  AdamState adam_state;
  std::vector<int> batch;
  for (int k = 0; k < config.local_iters; ++k) {
    const std::vector<int> positions =
        DrawBatch(static_cast<int>(train_indices.size()), config, batch_rng);
    batch.clear();
    batch.reserve(positions.size());
    for (int pos : positions) batch.push_back(train_indices[pos]);
    NoisyStep(model, train_pool, batch, config, rate, noise_rng, &adam_state,
              trace);
  }
  return model;
}

ModelVector AggregateGlobal(const ModelVector& global,
                            const std::vector<ModelVector>& locals,
                            double eta) {
  if (locals.empty()) {
    throw InvalidParameterError(
        "aggregation requires at least one local model");
  }
  if (!(eta >= 0.0) || eta > 1.0) {
    throw InvalidParameterError("aggregation_rate must be in [0, 1]");
  }
  const size_t dim = global.weights.size();
  std::vector<double> mean(dim, 0.0);
  for (const ModelVector& local : locals) {
    if (!(local.spec == global.spec)) {
      throw InvalidParameterError(
          "local models must share the global architecture");
    }
    for (size_t j = 0; j < dim; ++j) mean[j] += local.weights[j];
  }
  const double inv = 1.0 / static_cast<double>(locals.size());
  ModelVector result = global;
  for (size_t j = 0; j < dim; ++j) {
    result.weights[j] =
        (1.0 - eta) * global.weights[j] + eta * mean[j] * inv;
  }
  return result;
}

ModelVector ComputeHelper(const ModelVector& global, const ModelVector& local,
                          double alpha, HelperMap map) {
  if (!(local.spec == global.spec)) {
    throw InvalidParameterError(
        "helper inputs must share one architecture");
  }
  if (map == HelperMap::kIdentity) return global;
  if (!(alpha >= 0.0) || alpha > 1.0) {
    throw InvalidParameterError("helper_alpha must be in [0, 1]");
  }
  ModelVector helper = local;
  for (size_t j = 0; j < helper.weights.size(); ++j) {
    helper.weights[j] =
        (1.0 - alpha) * local.weights[j] + alpha * global.weights[j];
  }
  return helper;
}

std::vector<int> RunSyncRound(FederationState& state,
                              const LabeledDataset& train_pool,
                              const SyncConfig& config) {
  config.Validate();
  const int m = static_cast<int>(state.clients.size());
  const int round_id = state.round + 1;  // 1-based substream label
  std::mt19937_64 server_rng =
      MakeSubstream(state.root_seed, round_id, kServerStream,
                    RngPurpose::kClientSampling);
  const std::vector<int> sampled =
      PoissonSampleClients(m, config.sync_probability, server_rng);
  const double rate = config.learning_rate.RoundRate(state.round);

  std::vector<ModelVector> trained(sampled.size());
  const int workers = std::max(
      1, std::min(config.worker_threads, static_cast<int>(sampled.size())));
  std::atomic<size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto train_one = [&](size_t slot) {
    const ClientState& client = state.clients[sampled[slot]];
    std::mt19937_64 batch_rng =
        MakeSubstream(state.root_seed, round_id, sampled[slot],
                      RngPurpose::kBatchSampling);
    std::mt19937_64 noise_rng =
        MakeSubstream(state.root_seed, round_id, sampled[slot],
                      RngPurpose::kStepNoise);
    trained[slot] =
        LocalPrivateTraining(client.helper_model, train_pool,
                             client.train_indices, config, rate, batch_rng,
                             noise_rng);
  };
  auto worker = [&] {
    while (true) {
      const size_t slot = next.fetch_add(1);
      if (slot >= sampled.size()) return;
      try {
        train_one(slot);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  if (!sampled.empty()) {
    state.global_model =
        AggregateGlobal(state.global_model, trained, config.aggregation_rate);
    for (size_t slot = 0; slot < sampled.size(); ++slot) {
      ClientState& client = state.clients[sampled[slot]];
      client.local_model = std::move(trained[slot]);
      client.helper_model =
          ComputeHelper(state.global_model, client.local_model,
                        config.helper_alpha, config.helper_map);
    }
  }
  state.round = round_id;
  return sampled;
}

RunResult RunFederation(FederationState state,
                        const LabeledDataset& train_pool,
                        const LabeledDataset& test_pool,
                        const SyncConfig& config, int metric_every) {
  config.Validate();
  if (metric_every < 1) {
    throw InvalidParameterError("metric_every must be >= 1");
  }
  RunResult result;
  result.metrics.reserve(static_cast<size_t>(config.rounds));
  for (int r = 0; r < config.rounds; ++r) {
    const std::vector<int> sampled = RunSyncRound(state, train_pool, config);
    if (state.round % metric_every != 0 && state.round != config.rounds) {
      continue;
    }
    RoundMetrics row;
    row.round = state.round;
    row.clients_sampled = static_cast<int>(sampled.size());
    double acc_sum = 0.0;
    double global_sum = 0.0;
    double loss_sum = 0.0;
    int test_count = 0;
    int train_count = 0;
    for (const ClientState& client : state.clients) {
      if (!client.test_indices.empty()) {
        acc_sum +=
            Accuracy(client.local_model, test_pool, client.test_indices);
        global_sum +=
            Accuracy(state.global_model, test_pool, client.test_indices);
        ++test_count;
      }
      if (!client.train_indices.empty()) {
        loss_sum +=
            MeanLoss(client.local_model, train_pool, client.train_indices);
        ++train_count;
      }
    }
    if (test_count > 0) {
      row.avg_personalized_acc = acc_sum / test_count;
      row.global_acc = global_sum / test_count;
    }
    if (train_count > 0) {
      row.avg_train_loss = loss_sum / train_count;
    }
    result.metrics.push_back(row);
  }
  result.state = std::move(state);
  return result;
}

void WriteMetricsCsv(const std::vector<RoundMetrics>& metrics,
                     std::ostream& out) {
  out << "round,avg_personalized_acc,global_acc,avg_train_loss,"
         "clients_sampled\n";
  for (const RoundMetrics& row : metrics) {
    std::string line = std::to_string(row.round);
    line += ',';
    AppendDouble(line, row.avg_personalized_acc);
    line += ',';
    AppendDouble(line, row.global_acc);
    line += ',';
    AppendDouble(line, row.avg_train_loss);
    line += ',';
    line += std::to_string(row.clients_sampled);
    line += '\n';
    out << line;
  }
}

void WriteMetricsCsv(const std::vector<RoundMetrics>& metrics,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open metrics file for writing: " + path);
  }
  WriteMetricsCsv(metrics, out);
  if (!out.good()) {
    throw ParseError("failed writing metrics file: " + path);
  }
}

}  // namespace fedgdp
