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
// Non-IID client partitions of a labeled pool: label-sorted shard dealing,
// Dirichlet label-mixture sampling, and an IID control. All partitions are
// pure functions of (pools, spec, seed).

#ifndef FEDGDP_PARTITION_H_
#define FEDGDP_PARTITION_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fedgdp/dataset.h"

namespace fedgdp {

enum class PartitionScheme { kShard, kDirichlet, kIid };

std::string PartitionSchemeName(PartitionScheme scheme);
PartitionScheme ParsePartitionScheme(const std::string& name);

struct PartitionSpec {
  PartitionScheme scheme = PartitionScheme::kShard;
  int num_clients = 0;
  // Shard scheme: the train pool is label-sorted, cut into total_shards
  // equal shards, and each client is dealt shards_per_client of them.
  int total_shards = 0;
  int shards_per_client = 0;
  // Dirichlet and IID schemes: exact per-client train size.
  int train_per_client = 0;
  // All schemes: exact per-client test size.
  int test_per_client = 0;
  // Dirichlet concentration; +infinity selects the exact homogeneous limit
  // (per-client class proportions set to the pool frequencies).
  double dirichlet_beta = 1.0;
  uint64_t seed = 0;

  // Throws InvalidParameterError naming the offending field.
  void Validate() const;
};

struct ClientShard {
  std::vector<int> train_indices;  // into the train pool
  std::vector<int> test_indices;   // into the test pool
};
using Partition = std::vector<ClientShard>;

// Label-sorted shard dealing: train shards are disjoint and exhaustive and
// every client holds exactly train_size/total_shards * shards_per_client
// examples with at most shards_per_client distinct labels. Each client's
// test examples are sampled without replacement (within the client) from
// the test pool restricted to labels present in its train shard. Requires
// total_shards == num_clients * shards_per_client and an evenly divisible
// train pool.
Partition ShardPartition(const LabeledDataset& train,
                         const LabeledDataset& test,
                         const PartitionSpec& spec);

// Dirichlet mixture: per client, class proportions q ~ Dir(beta), then
// exactly train_per_client train examples with class counts drawn
// Multinomial(q, train_per_client), taken from the pool without replacement
// across clients; test examples likewise but from the full test pool
// (cross-client test overlap is allowed). Infeasible count vectors trigger a
// bounded q-resample (100 tries) before PartitionInfeasibleError.
Partition DirichletPartition(const LabeledDataset& train,
                             const LabeledDataset& test,
                             const PartitionSpec& spec);

// IID control: a uniform shuffle dealt into disjoint per-client train sets;
// test examples sampled per client from the full test pool.
Partition IidPartition(const LabeledDataset& train,
                       const LabeledDataset& test,
                       const PartitionSpec& spec);

// Dispatch on spec.scheme.
Partition MakePartition(const LabeledDataset& train,
                        const LabeledDataset& test,
                        const PartitionSpec& spec);

// Audit manifest: the spec echo plus per-client example indices and label
// histograms. Cross-client test overlap is permitted by every scheme and the
// manifest records that.
nlohmann::json PartitionManifest(const Partition& partition,
                                 const PartitionSpec& spec,
                                 const LabeledDataset& train,
                                 const LabeledDataset& test);

}  // namespace fedgdp

#endif  // FEDGDP_PARTITION_H_
