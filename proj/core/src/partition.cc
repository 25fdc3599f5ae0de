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

#include "fedgdp/partition.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "fedgdp/errors.h"
#include "fedgdp/rng.h"

namespace fedgdp {
namespace {

constexpr int kFeasibilityRetries = 100;

std::vector<std::vector<int>> IndicesByClass(const LabeledDataset& data) {
  std::vector<std::vector<int>> by_class(data.num_classes);
  for (int i = 0; i < data.size(); ++i) {
    by_class[data.labels[i]].push_back(i);
  }
  return by_class;
}

std::vector<int> LabelCounts(const LabeledDataset& data,
                             const std::vector<int>& indices) {
  std::vector<int> counts(data.num_classes, 0);
  for (int i : indices) ++counts[data.labels[i]];
  return counts;
}

std::vector<double> DirichletDraw(double beta, int num_classes,
                                  std::mt19937_64& rng) {
  std::vector<double> q(num_classes);
  std::gamma_distribution<double> gamma(beta, 1.0);
  double sum = 0.0;
  for (double& v : q) {
    v = gamma(rng);
    sum += v;
  }
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    // Tiny concentrations can underflow every coordinate; the draw is then
    // one-hot in the limit, so pick a uniform class.
    std::fill(q.begin(), q.end(), 0.0);
    q[rng() % num_classes] = 1.0;
    return q;
  }
  for (double& v : q) v /= sum;
  return q;
}

std::vector<int> MultinomialCounts(const std::vector<double>& q, int draws,
                                   std::mt19937_64& rng) {
  std::discrete_distribution<int> categorical(q.begin(), q.end());
  std::vector<int> counts(q.size(), 0);
  for (int k = 0; k < draws; ++k) ++counts[categorical(rng)];
  return counts;
}

// train-pool class proportions, the exact beta -> infinity limit.
std::vector<double> PoolFrequencies(const LabeledDataset& data) {
  std::vector<double> q(data.num_classes, 0.0);
  for (int label : data.labels) q[label] += 1.0;
  for (double& v : q) v /= data.size();
  return q;
}

void CheckTestPool(const LabeledDataset& test, const PartitionSpec& spec) {
  if (spec.test_per_client > 0 && test.size() == 0) {
    throw InvalidParameterError(
        "Partition: test pool is empty but test_per_client > 0");
  }
}

}  // namespace

std::string PartitionSchemeName(PartitionScheme scheme) {
  switch (scheme) {
    case PartitionScheme::kShard:
      return "shard";
    case PartitionScheme::kDirichlet:
      return "dirichlet";
    case PartitionScheme::kIid:
      return "iid";
  }
  throw InvalidParameterError("PartitionSchemeName: unknown scheme");
}

PartitionScheme ParsePartitionScheme(const std::string& name) {
  if (name == "shard") return PartitionScheme::kShard;
  if (name == "dirichlet") return PartitionScheme::kDirichlet;
  if (name == "iid") return PartitionScheme::kIid;
  throw InvalidParameterError("ParsePartitionScheme: unknown scheme '" +
                              name + "'");
}

void PartitionSpec::Validate() const {
  if (num_clients <= 0) {
    throw InvalidParameterError("PartitionSpec: num_clients must be > 0");
  }
  if (test_per_client < 0) {
    throw InvalidParameterError("PartitionSpec: test_per_client must be >= 0");
  }
  switch (scheme) {
    case PartitionScheme::kShard:
      if (total_shards <= 0 || shards_per_client <= 0) {
        throw InvalidParameterError(
            "PartitionSpec: total_shards and shards_per_client must be > 0");
      }
      if (total_shards != num_clients * shards_per_client) {
        throw InvalidParameterError(
            "PartitionSpec: total_shards must equal num_clients * "
            "shards_per_client");
      }
      break;
    case PartitionScheme::kDirichlet:
      if (train_per_client <= 0) {
        throw InvalidParameterError(
            "PartitionSpec: train_per_client must be > 0");
      }
      if (!(dirichlet_beta > 0.0)) {
        throw InvalidParameterError(
            "PartitionSpec: dirichlet_beta must be > 0");
      }
      break;
    case PartitionScheme::kIid:
      if (train_per_client <= 0) {
        throw InvalidParameterError(
            "PartitionSpec: train_per_client must be > 0");
      }
      break;
  }
}

Partition ShardPartition(const LabeledDataset& train,
                         const LabeledDataset& test,
                         const PartitionSpec& spec) {
  spec.Validate();
  if (spec.scheme != PartitionScheme::kShard) {
    throw InvalidParameterError("ShardPartition: spec.scheme must be shard");
  }
  if (train.size() == 0 || train.size() % spec.total_shards != 0) {
    throw InvalidParameterError(
        "ShardPartition: train pool size must divide evenly into "
        "total_shards");
  }
  CheckTestPool(test, spec);
  const int shard_size = train.size() / spec.total_shards;

  // Label-sorted order; the stable sort keeps pool order within a label.
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&train](int a, int b) {
    return train.labels[a] < train.labels[b];
  });

  std::vector<int> shard_ids(spec.total_shards);
  std::iota(shard_ids.begin(), shard_ids.end(), 0);
  std::mt19937_64 server_rng =
      MakeSubstream(spec.seed, 0, kServerStream, RngPurpose::kPartition);
  std::shuffle(shard_ids.begin(), shard_ids.end(), server_rng);

  std::vector<std::vector<int>> test_by_class = IndicesByClass(test);
  Partition partition(spec.num_clients);
  for (int i = 0; i < spec.num_clients; ++i) {
    ClientShard& client = partition[i];
    for (int s = 0; s < spec.shards_per_client; ++s) {
      const int shard = shard_ids[i * spec.shards_per_client + s];
      const int begin = shard * shard_size;
      client.train_indices.insert(client.train_indices.end(),
                                  order.begin() + begin,
                                  order.begin() + begin + shard_size);
    }

    std::vector<bool> seen(train.num_classes, false);
    for (int idx : client.train_indices) seen[train.labels[idx]] = true;
    std::vector<int> eligible;
    for (int c = 0; c < test.num_classes && c < train.num_classes; ++c) {
      if (seen[c]) {
        eligible.insert(eligible.end(), test_by_class[c].begin(),
                        test_by_class[c].end());
      }
    }
    if (static_cast<int>(eligible.size()) < spec.test_per_client) {
      throw PartitionInfeasibleError(
          "ShardPartition: client " + std::to_string(i) + " has only " +
          std::to_string(eligible.size()) +
          " test examples with its train labels, needs " +
          std::to_string(spec.test_per_client));
    }
    std::mt19937_64 client_rng =
        MakeSubstream(spec.seed, 0, static_cast<uint64_t>(i),
                      RngPurpose::kPartition);
    std::sample(eligible.begin(), eligible.end(),
                std::back_inserter(client.test_indices), spec.test_per_client,
                client_rng);
  }
  return partition;
}

Partition DirichletPartition(const LabeledDataset& train,
                             const LabeledDataset& test,
                             const PartitionSpec& spec) {
  spec.Validate();
  if (spec.scheme != PartitionScheme::kDirichlet) {
    throw InvalidParameterError(
        "DirichletPartition: spec.scheme must be dirichlet");
  }
  if (static_cast<long long>(spec.num_clients) * spec.train_per_client >
      train.size()) {
    throw InvalidParameterError(
        "DirichletPartition: num_clients * train_per_client exceeds the "
        "train pool size");
  }
  CheckTestPool(test, spec);

  // Pre-shuffled per-class pools; consuming from the front is a uniform
  // draw without replacement across clients.
  std::vector<std::vector<int>> train_by_class = IndicesByClass(train);
  std::mt19937_64 server_rng =
      MakeSubstream(spec.seed, 0, kServerStream, RngPurpose::kPartition);
  for (std::vector<int>& pool : train_by_class) {
    std::shuffle(pool.begin(), pool.end(), server_rng);
  }
  std::vector<std::size_t> next(train_by_class.size(), 0);
  std::vector<std::vector<int>> test_by_class = IndicesByClass(test);

  const bool exact_limit = std::isinf(spec.dirichlet_beta);
  const std::vector<double> pool_frequencies =
      exact_limit ? PoolFrequencies(train) : std::vector<double>();

  Partition partition(spec.num_clients);
  for (int i = 0; i < spec.num_clients; ++i) {
    std::mt19937_64 client_rng =
        MakeSubstream(spec.seed, 0, static_cast<uint64_t>(i),
                      RngPurpose::kPartition);
    std::vector<int> train_counts;
    std::vector<int> test_counts;
    bool feasible = false;
    for (int attempt = 0; attempt < kFeasibilityRetries; ++attempt) {
      std::vector<double> q =
          exact_limit ? pool_frequencies
                      : DirichletDraw(spec.dirichlet_beta, train.num_classes,
                                      client_rng);
      train_counts = MultinomialCounts(q, spec.train_per_client, client_rng);
      test_counts = MultinomialCounts(q, spec.test_per_client, client_rng);
      feasible = true;
      for (int c = 0; c < train.num_classes; ++c) {
        if (static_cast<std::size_t>(train_counts[c]) >
            train_by_class[c].size() - next[c]) {
          feasible = false;
          break;
        }
        const std::size_t test_supply =
            c < static_cast<int>(test_by_class.size())
                ? test_by_class[c].size()
                : 0;
        if (static_cast<std::size_t>(test_counts[c]) > test_supply) {
          feasible = false;
          break;
        }
      }
      if (feasible) break;
    }
    if (!feasible) {
      throw PartitionInfeasibleError(
          "DirichletPartition: client " + std::to_string(i) +
          " could not draw a feasible class-count vector after " +
          std::to_string(kFeasibilityRetries) + " retries");
    }

    ClientShard& client = partition[i];
    for (int c = 0; c < train.num_classes; ++c) {
      client.train_indices.insert(
          client.train_indices.end(), train_by_class[c].begin() + next[c],
          train_by_class[c].begin() + next[c] + train_counts[c]);
      next[c] += train_counts[c];
      if (test_counts[c] > 0) {
        std::sample(test_by_class[c].begin(), test_by_class[c].end(),
                    std::back_inserter(client.test_indices), test_counts[c],
                    client_rng);
      }
    }
  }
  return partition;
}

Partition IidPartition(const LabeledDataset& train,
                       const LabeledDataset& test,
                       const PartitionSpec& spec) {
  spec.Validate();
  if (spec.scheme != PartitionScheme::kIid) {
    throw InvalidParameterError("IidPartition: spec.scheme must be iid");
  }
  if (static_cast<long long>(spec.num_clients) * spec.train_per_client >
      train.size()) {
    throw InvalidParameterError(
        "IidPartition: num_clients * train_per_client exceeds the train "
        "pool size");
  }
  CheckTestPool(test, spec);

  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 server_rng =
      MakeSubstream(spec.seed, 0, kServerStream, RngPurpose::kPartition);
  std::shuffle(order.begin(), order.end(), server_rng);

  std::vector<int> test_order(test.size());
  std::iota(test_order.begin(), test_order.end(), 0);

  Partition partition(spec.num_clients);
  for (int i = 0; i < spec.num_clients; ++i) {
    ClientShard& client = partition[i];
    client.train_indices.assign(
        order.begin() + static_cast<std::size_t>(i) * spec.train_per_client,
        order.begin() +
            static_cast<std::size_t>(i + 1) * spec.train_per_client);
    if (static_cast<int>(test_order.size()) < spec.test_per_client) {
      throw PartitionInfeasibleError(
          "IidPartition: test pool smaller than test_per_client");
    }
    std::mt19937_64 client_rng =
        MakeSubstream(spec.seed, 0, static_cast<uint64_t>(i),
                      RngPurpose::kPartition);
    std::sample(test_order.begin(), test_order.end(),
                std::back_inserter(client.test_indices), spec.test_per_client,
                client_rng);
  }
  return partition;
}

Partition MakePartition(const LabeledDataset& train,
                        const LabeledDataset& test,
                        const PartitionSpec& spec) {
  switch (spec.scheme) {
    case PartitionScheme::kShard:
      return ShardPartition(train, test, spec);
    case PartitionScheme::kDirichlet:
      return DirichletPartition(train, test, spec);
    case PartitionScheme::kIid:
      return IidPartition(train, test, spec);
  }
  throw InvalidParameterError("MakePartition: unknown scheme");
}

nlohmann::json PartitionManifest(const Partition& partition,
                                 const PartitionSpec& spec,
                                 const LabeledDataset& train,
                                 const LabeledDataset& test) {
  nlohmann::json doc;
  doc["scheme"] = PartitionSchemeName(spec.scheme);
  doc["num_clients"] = spec.num_clients;
  doc["seed"] = spec.seed;
  doc["test_per_client"] = spec.test_per_client;
  doc["test_overlap_allowed"] = true;
  switch (spec.scheme) {
    case PartitionScheme::kShard:
      doc["total_shards"] = spec.total_shards;
      doc["shards_per_client"] = spec.shards_per_client;
      break;
    case PartitionScheme::kDirichlet:
      doc["train_per_client"] = spec.train_per_client;
      if (std::isinf(spec.dirichlet_beta)) {
        doc["dirichlet_beta"] = "inf";
      } else {
        doc["dirichlet_beta"] = spec.dirichlet_beta;
      }
      break;
    case PartitionScheme::kIid:
      doc["train_per_client"] = spec.train_per_client;
      break;
  }
  doc["train_pool_size"] = train.size();
  doc["test_pool_size"] = test.size();

  nlohmann::json clients = nlohmann::json::array();
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const ClientShard& shard = partition[i];
    clients.push_back(
        {{"client", i},
         {"num_train", shard.train_indices.size()},
         {"num_test", shard.test_indices.size()},
         {"train_label_counts", LabelCounts(train, shard.train_indices)},
         {"test_label_counts", LabelCounts(test, shard.test_indices)},
         {"train_indices", shard.train_indices},
         {"test_indices", shard.test_indices}});
  }
  doc["clients"] = std::move(clients);
  return doc;
}

}  // namespace fedgdp
