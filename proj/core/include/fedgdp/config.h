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
// Experiment configuration: one JSON document that names the dataset
// source, model architecture, client partition, and federation schedule.
// Unknown keys are rejected so typos cannot silently fall back to defaults.
//
// Schema (defaults in parentheses; keys marked * are required):
//
// {
//   "dataset": {
//     "source"*: "synthetic" | "idx",
//     // synthetic source:
//     "num_classes" (6), "input_dim" (10),
//     "train_per_class" (200), "test_per_class" (50), "spread" (2.0)
//     // idx source:
//     "train_images"*, "train_labels"*, "test_images"*, "test_labels"*
//   },
//   "model": {
//     "arch" ("multinomial-logistic") | "one-hidden-mlp",
//     "hidden_units" (required for the MLP)
//   },
//   "partition": {
//     "scheme"*: "shard" | "dirichlet" | "iid",
//     "num_clients"*,
//     "total_shards"*, "shards_per_client"*,     // shard scheme
//     "train_per_client"*,                       // dirichlet and iid
//     "test_per_client"*,
//     "dirichlet_beta" (1.0; the string "inf" selects the exact
//                       homogeneous limit)
//   },
//   "federation": {
//     "sync_probability" (1.0), "rounds" (1), "local_iters" (1),
//     "aggregation_rate" (1.0), "helper_alpha" (0.1),
//     "helper_map" ("interpolation"), "optimizer" ("noisy-sgd"),
//     "learning_rate": {"base_rate" (0.1), "decay_factor" (1.0),
//                       "decay_interval_rounds" (10)},
//     "batch_size"*, "noise_scale" (0.0),
//     "clip_norm" (1.0; the string "inf" disables clipping and requires
//                  noise_scale 0),
//     "batch_mode" ("poisson-per-example"),
//     "adam": {"beta1" (0.9), "beta2" (0.999), "epsilon" (1e-8)},
//     "worker_threads" (1)
//   },
//   "output_dir" ("."),
//   "root_seed" (1),
//   "metric_every" (1)
// }
//
// Partition and data-synthesis randomness derive from root_seed, so a
// config plus a seed fully determines every artifact.

#ifndef FEDGDP_CONFIG_H_
#define FEDGDP_CONFIG_H_

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fedgdp/engine.h"
#include "fedgdp/model.h"
#include "fedgdp/partition.h"

namespace fedgdp {

struct SyntheticDataConfig {
  int num_classes = 6;
  int input_dim = 10;
  int train_per_class = 200;
  int test_per_class = 50;
  double spread = 2.0;
};

struct IdxDataConfig {
  std::string train_images;
  std::string train_labels;
  std::string test_images;
  std::string test_labels;
};

struct DatasetConfig {
  enum class Source { kSynthetic, kIdx };
  Source source = Source::kSynthetic;
  SyntheticDataConfig synthetic;
  IdxDataConfig idx;
};

struct ModelConfig {
  ModelArch arch = ModelArch::kMultinomialLogistic;
  int hidden_units = 0;
};

struct ExperimentConfig {
  DatasetConfig dataset;
  ModelConfig model;
  PartitionSpec partition;  // seed is taken from root_seed, not the file
  SyncConfig federation;
  std::string output_dir = ".";
  uint64_t root_seed = 1;
  int metric_every = 1;

  // Field and cross-field checks that do not need the data loaded
  // (e.g. fixed-size batches must fit in a client's train shard). Throws
  // InvalidParameterError naming the offending field.
  void Validate() const;
};

// Throws InvalidParameterError on malformed JSON, unknown keys, missing
// required keys, or wrongly typed values; the result is already validated.
ExperimentConfig ParseExperimentConfig(const std::string& json_text);
ExperimentConfig LoadExperimentConfig(const std::string& path);

// Canonical serialization; parse(dump(ToJson(c))) reproduces c exactly.
nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config);

}  // namespace fedgdp

#endif  // FEDGDP_CONFIG_H_
