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

#include "fedgdp/config.h"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fedgdp/errors.h"

namespace fedgdp {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void Fail(const std::string& block, const std::string& key,
                       const std::string& what) {
  throw InvalidParameterError("config: " + block + "." + key + " " + what);
}

void CheckKeys(const json& obj, const std::string& block,
               std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw InvalidParameterError("config: unknown key '" + block + "." +
                                  it.key() + "'");
    }
  }
}

const json& RequireBlock(const json& root, const char* key) {
  const auto it = root.find(key);
  if (it == root.end()) {
    throw InvalidParameterError(std::string("config: missing block '") + key +
                                "'");
  }
  if (!it->is_object()) Fail("", key, "must be a JSON object");
  return *it;
}

int GetInt(const json& obj, const std::string& block, const char* key,
           int fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) Fail(block, key, "must be an integer");
  return it->get<int>();
}

int RequireInt(const json& obj, const std::string& block, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) Fail(block, key, "is required");
  if (!it->is_number_integer()) Fail(block, key, "must be an integer");
  return it->get<int>();
}

double GetDouble(const json& obj, const std::string& block, const char* key,
                 double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) Fail(block, key, "must be a number");
  return it->get<double>();
}

// A plain number, or the string "inf" for +infinity.
double GetMaybeInf(const json& obj, const std::string& block, const char* key,
                   double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (it->is_string()) {
    if (it->get<std::string>() == "inf") return kInf;
    Fail(block, key, "must be a number or the string \"inf\"");
  }
  if (!it->is_number()) Fail(block, key, "must be a number or \"inf\"");
  return it->get<double>();
}

std::string GetString(const json& obj, const std::string& block,
                      const char* key, const std::string& fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) Fail(block, key, "must be a string");
  return it->get<std::string>();
}

std::string RequireString(const json& obj, const std::string& block,
                          const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) Fail(block, key, "is required");
  if (!it->is_string()) Fail(block, key, "must be a string");
  return it->get<std::string>();
}

uint64_t GetU64(const json& obj, const std::string& block, const char* key,
                uint64_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() &&
                                     it->get<int64_t>() >= 0)) {
    Fail(block, key, "must be a nonnegative integer");
  }
  return it->get<uint64_t>();
}

DatasetConfig ParseDataset(const json& obj) {
  DatasetConfig dataset;
  const std::string source = RequireString(obj, "dataset", "source");
  if (source == "synthetic") {
    dataset.source = DatasetConfig::Source::kSynthetic;
    CheckKeys(obj, "dataset",
              {"source", "num_classes", "input_dim", "train_per_class",
               "test_per_class", "spread"});
    SyntheticDataConfig& synth = dataset.synthetic;
    synth.num_classes = GetInt(obj, "dataset", "num_classes",
                               synth.num_classes);
    synth.input_dim = GetInt(obj, "dataset", "input_dim", synth.input_dim);
    synth.train_per_class =
        GetInt(obj, "dataset", "train_per_class", synth.train_per_class);
    synth.test_per_class =
        GetInt(obj, "dataset", "test_per_class", synth.test_per_class);
    synth.spread = GetDouble(obj, "dataset", "spread", synth.spread);
    return dataset;
  }
  if (source == "idx") {
    dataset.source = DatasetConfig::Source::kIdx;
    CheckKeys(obj, "dataset",
              {"source", "train_images", "train_labels", "test_images",
               "test_labels"});
    dataset.idx.train_images = RequireString(obj, "dataset", "train_images");
    dataset.idx.train_labels = RequireString(obj, "dataset", "train_labels");
    dataset.idx.test_images = RequireString(obj, "dataset", "test_images");
    dataset.idx.test_labels = RequireString(obj, "dataset", "test_labels");
    return dataset;
  }
  Fail("dataset", "source", "must be \"synthetic\" or \"idx\"");
}

ModelConfig ParseModel(const json& obj) {
  CheckKeys(obj, "model", {"arch", "hidden_units"});
  ModelConfig model;
  model.arch = ParseModelArch(
      GetString(obj, "model", "arch", ModelArchName(model.arch)));
  model.hidden_units = GetInt(obj, "model", "hidden_units", 0);
  if (model.arch == ModelArch::kOneHiddenMlp && model.hidden_units < 1) {
    Fail("model", "hidden_units", "is required for the one-hidden MLP");
  }
  if (model.arch == ModelArch::kMultinomialLogistic &&
      model.hidden_units != 0) {
    Fail("model", "hidden_units", "only applies to the one-hidden MLP");
  }
  return model;
}

PartitionSpec ParsePartition(const json& obj) {
  PartitionSpec spec;
  spec.scheme = ParsePartitionScheme(RequireString(obj, "partition",
                                                   "scheme"));
  spec.num_clients = RequireInt(obj, "partition", "num_clients");
  spec.test_per_client = RequireInt(obj, "partition", "test_per_client");
  switch (spec.scheme) {
    case PartitionScheme::kShard:
      CheckKeys(obj, "partition",
                {"scheme", "num_clients", "total_shards", "shards_per_client",
                 "test_per_client"});
      spec.total_shards = RequireInt(obj, "partition", "total_shards");
      spec.shards_per_client =
          RequireInt(obj, "partition", "shards_per_client");
      break;
    case PartitionScheme::kDirichlet:
      CheckKeys(obj, "partition",
                {"scheme", "num_clients", "train_per_client",
                 "test_per_client", "dirichlet_beta"});
      spec.train_per_client =
          RequireInt(obj, "partition", "train_per_client");
      spec.dirichlet_beta = GetMaybeInf(obj, "partition", "dirichlet_beta",
                                        spec.dirichlet_beta);
      break;
    case PartitionScheme::kIid:
      CheckKeys(obj, "partition",
                {"scheme", "num_clients", "train_per_client",
                 "test_per_client"});
      spec.train_per_client =
          RequireInt(obj, "partition", "train_per_client");
      break;
  }
  return spec;
}

SyncConfig ParseFederation(const json& obj) {
  CheckKeys(obj, "federation",
            {"sync_probability", "rounds", "local_iters", "aggregation_rate",
             "helper_alpha", "helper_map", "optimizer", "learning_rate",
             "batch_size", "noise_scale", "clip_norm", "batch_mode", "adam",
             "worker_threads"});
  SyncConfig config;
  config.sync_probability = GetDouble(obj, "federation", "sync_probability",
                                      config.sync_probability);
  config.rounds = GetInt(obj, "federation", "rounds", config.rounds);
  config.local_iters =
      GetInt(obj, "federation", "local_iters", config.local_iters);
  config.aggregation_rate = GetDouble(obj, "federation", "aggregation_rate",
                                      config.aggregation_rate);
  config.helper_alpha =
      GetDouble(obj, "federation", "helper_alpha", config.helper_alpha);
  config.helper_map = ParseHelperMap(GetString(
      obj, "federation", "helper_map", HelperMapName(config.helper_map)));
  config.optimizer = ParseOptimizer(GetString(
      obj, "federation", "optimizer", OptimizerName(config.optimizer)));
  if (const auto it = obj.find("learning_rate"); it != obj.end()) {
    if (!it->is_object()) {
      Fail("federation", "learning_rate", "must be a JSON object");
    }
    CheckKeys(*it, "federation.learning_rate",
              {"base_rate", "decay_factor", "decay_interval_rounds"});
    config.learning_rate.base_rate =
        GetDouble(*it, "federation.learning_rate", "base_rate",
                  config.learning_rate.base_rate);
    config.learning_rate.decay_factor =
        GetDouble(*it, "federation.learning_rate", "decay_factor",
                  config.learning_rate.decay_factor);
    config.learning_rate.decay_interval_rounds =
        GetInt(*it, "federation.learning_rate", "decay_interval_rounds",
               config.learning_rate.decay_interval_rounds);
  }
  config.batch_size = RequireInt(obj, "federation", "batch_size");
  config.noise_scale =
      GetDouble(obj, "federation", "noise_scale", config.noise_scale);
  config.clip_norm =
      GetMaybeInf(obj, "federation", "clip_norm", config.clip_norm);
  config.batch_mode = ParseBatchMode(GetString(
      obj, "federation", "batch_mode", BatchModeName(config.batch_mode)));
  if (const auto it = obj.find("adam"); it != obj.end()) {
    if (!it->is_object()) Fail("federation", "adam", "must be a JSON object");
    CheckKeys(*it, "federation.adam", {"beta1", "beta2", "epsilon"});
    config.adam.beta1 =
        GetDouble(*it, "federation.adam", "beta1", config.adam.beta1);
    config.adam.beta2 =
        GetDouble(*it, "federation.adam", "beta2", config.adam.beta2);
    config.adam.epsilon =
        GetDouble(*it, "federation.adam", "epsilon", config.adam.epsilon);
  }
  config.worker_threads =
      GetInt(obj, "federation", "worker_threads", config.worker_threads);
  return config;
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (dataset.source == DatasetConfig::Source::kSynthetic) {
    const SyntheticDataConfig& synth = dataset.synthetic;
    if (synth.num_classes < 2) {
      throw InvalidParameterError("config: dataset.num_classes must be >= 2");
    }
    if (synth.input_dim < 1) {
      throw InvalidParameterError("config: dataset.input_dim must be >= 1");
    }
    if (synth.train_per_class < 1 || synth.test_per_class < 1) {
      throw InvalidParameterError(
          "config: dataset.train_per_class and test_per_class must be >= 1");
    }
    if (!(synth.spread >= 0.0) || !std::isfinite(synth.spread)) {
      throw InvalidParameterError(
          "config: dataset.spread must be finite and >= 0");
    }
  } else {
    if (dataset.idx.train_images.empty() || dataset.idx.train_labels.empty() ||
        dataset.idx.test_images.empty() || dataset.idx.test_labels.empty()) {
      throw InvalidParameterError(
          "config: dataset idx paths must all be nonempty");
    }
  }

  if (model.arch == ModelArch::kOneHiddenMlp && model.hidden_units < 1) {
    throw InvalidParameterError(
        "config: model.hidden_units must be >= 1 for the one-hidden MLP");
  }

  PartitionSpec seeded = partition;
  seeded.seed = root_seed;
  seeded.Validate();
  federation.Validate();

  if (metric_every < 1) {
    throw InvalidParameterError("config: metric_every must be >= 1");
  }

  // Cross-field checks that need no data: fixed-size batches must fit in a
  // client shard whenever the shard size is already known from the spec.
  if (federation.batch_mode == BatchMode::kFixedSizeUniform &&
      partition.scheme != PartitionScheme::kShard &&
      federation.batch_size > partition.train_per_client) {
    throw InvalidParameterError(
        "config: federation.batch_size must be <= partition.train_per_client "
        "for fixed-size batches");
  }
  if (dataset.source == DatasetConfig::Source::kSynthetic) {
    const SyntheticDataConfig& synth = dataset.synthetic;
    const long long train_pool =
        static_cast<long long>(synth.num_classes) * synth.train_per_class;
    const long long test_pool =
        static_cast<long long>(synth.num_classes) * synth.test_per_class;
    if (partition.scheme != PartitionScheme::kShard &&
        static_cast<long long>(partition.num_clients) *
                partition.train_per_client >
            train_pool) {
      throw InvalidParameterError(
          "config: partition train demand exceeds the synthetic train pool");
    }
    if (partition.test_per_client > test_pool) {
      throw InvalidParameterError(
          "config: partition.test_per_client exceeds the synthetic test "
          "pool");
    }
  }
}

ExperimentConfig ParseExperimentConfig(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidParameterError(std::string("config: not valid JSON: ") +
                                e.what());
  }
  if (!root.is_object()) {
    throw InvalidParameterError("config: top level must be a JSON object");
  }
  CheckKeys(root, "config",
            {"dataset", "model", "partition", "federation", "output_dir",
             "root_seed", "metric_every"});

  ExperimentConfig config;
  config.dataset = ParseDataset(RequireBlock(root, "dataset"));
  if (const auto it = root.find("model"); it != root.end()) {
    if (!it->is_object()) Fail("", "model", "must be a JSON object");
    config.model = ParseModel(*it);
  }
  config.partition = ParsePartition(RequireBlock(root, "partition"));
  config.federation = ParseFederation(RequireBlock(root, "federation"));
  config.output_dir = GetString(root, "config", "output_dir",
                                config.output_dir);
  config.root_seed = GetU64(root, "config", "root_seed", config.root_seed);
  config.metric_every =
      GetInt(root, "config", "metric_every", config.metric_every);
  config.partition.seed = config.root_seed;
  config.Validate();
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidParameterError("config: cannot open file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseExperimentConfig(buffer.str());
}

nlohmann::json ExperimentConfigToJson(const ExperimentConfig& config) {
  json root;

  json dataset;
  if (config.dataset.source == DatasetConfig::Source::kSynthetic) {
    const SyntheticDataConfig& synth = config.dataset.synthetic;
    dataset["source"] = "synthetic";
    dataset["num_classes"] = synth.num_classes;
    dataset["input_dim"] = synth.input_dim;
    dataset["train_per_class"] = synth.train_per_class;
    dataset["test_per_class"] = synth.test_per_class;
    dataset["spread"] = synth.spread;
  } else {
    dataset["source"] = "idx";
    dataset["train_images"] = config.dataset.idx.train_images;
    dataset["train_labels"] = config.dataset.idx.train_labels;
    dataset["test_images"] = config.dataset.idx.test_images;
    dataset["test_labels"] = config.dataset.idx.test_labels;
  }
  root["dataset"] = dataset;

  json model;
  model["arch"] = ModelArchName(config.model.arch);
  if (config.model.arch == ModelArch::kOneHiddenMlp) {
    model["hidden_units"] = config.model.hidden_units;
  }
  root["model"] = model;

  json partition;
  partition["scheme"] = PartitionSchemeName(config.partition.scheme);
  partition["num_clients"] = config.partition.num_clients;
  partition["test_per_client"] = config.partition.test_per_client;
  switch (config.partition.scheme) {
    case PartitionScheme::kShard:
      partition["total_shards"] = config.partition.total_shards;
      partition["shards_per_client"] = config.partition.shards_per_client;
      break;
    case PartitionScheme::kDirichlet:
      partition["train_per_client"] = config.partition.train_per_client;
      if (std::isinf(config.partition.dirichlet_beta)) {
        partition["dirichlet_beta"] = "inf";
      } else {
        partition["dirichlet_beta"] = config.partition.dirichlet_beta;
      }
      break;
    case PartitionScheme::kIid:
      partition["train_per_client"] = config.partition.train_per_client;
      break;
  }
  root["partition"] = partition;

  const SyncConfig& fed = config.federation;
  json federation;
  federation["sync_probability"] = fed.sync_probability;
  federation["rounds"] = fed.rounds;
  federation["local_iters"] = fed.local_iters;
  federation["aggregation_rate"] = fed.aggregation_rate;
  federation["helper_alpha"] = fed.helper_alpha;
  federation["helper_map"] = HelperMapName(fed.helper_map);
  federation["optimizer"] = OptimizerName(fed.optimizer);
  federation["learning_rate"] = {
      {"base_rate", fed.learning_rate.base_rate},
      {"decay_factor", fed.learning_rate.decay_factor},
      {"decay_interval_rounds", fed.learning_rate.decay_interval_rounds}};
  federation["batch_size"] = fed.batch_size;
  federation["noise_scale"] = fed.noise_scale;
  if (std::isinf(fed.clip_norm)) {
    federation["clip_norm"] = "inf";
  } else {
    federation["clip_norm"] = fed.clip_norm;
  }
  federation["batch_mode"] = BatchModeName(fed.batch_mode);
  federation["adam"] = {{"beta1", fed.adam.beta1},
                        {"beta2", fed.adam.beta2},
                        {"epsilon", fed.adam.epsilon}};
  federation["worker_threads"] = fed.worker_threads;
  root["federation"] = federation;

  root["output_dir"] = config.output_dir;
  root["root_seed"] = config.root_seed;
  root["metric_every"] = config.metric_every;
  return root;
}

}  // namespace fedgdp
